//! Perfect matchings of the graph with open faces, their face, pairing and
//! edge weights, and the two matching solutions built from them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{build_closure, build_graph, EdgeClass, GraphError, HName, OpenFaceGraph};
use crate::laurent::{LaurentError, LaurentPoly, PowerProduct, Var, VarKind};
use crate::oracle::Instance;
use crate::surface::{Site, SteppedSurface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("column {0} has an N-edge with no S-edge below it")]
    UnbalancedColumn(i32),
}

/// A set of edge ids, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Matching(Vec<usize>);

impl Matching {
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Matching(edges)
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_set(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    /// True when every vertex of `g` is covered exactly once.
    pub fn is_perfect_on(&self, g: &OpenFaceGraph) -> bool {
        let mut cover = vec![0u8; g.vertices().len()];
        for &e in &self.0 {
            let e = g.edge(e);
            cover[e.tail] += 1;
            cover[e.head] += 1;
        }
        cover.into_iter().all(|c| c == 1)
    }
}

/// Allowed pairs `(S(i,j1), N(i,j2))` with `j1 <= j2`, stored as the two faces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairingSet {
    pub pairs: Vec<(Site, Site)>,
}

/// All perfect matchings, sorted lexicographically by edge ids.
pub fn enumerate_matchings(g: &OpenFaceGraph) -> Vec<Matching> {
    let n = g.vertices().len();
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in g.edges() {
        adjacency[e.tail].push((e.id, e.head));
        adjacency[e.head].push((e.id, e.tail));
    }
    let mut out = Vec::new();
    let mut covered = vec![false; n];
    let mut chosen = Vec::with_capacity(n / 2);
    extend(&adjacency, &mut covered, &mut chosen, 0, &mut out);
    out.sort_unstable();
    out
}

fn extend(
    adjacency: &[Vec<(usize, usize)>],
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    from: usize,
    out: &mut Vec<Matching>,
) {
    let Some(v) = (from..covered.len()).find(|&v| !covered[v]) else {
        out.push(Matching::new(chosen.clone()));
        return;
    };
    covered[v] = true;
    for &(e, w) in &adjacency[v] {
        if covered[w] {
            continue;
        }
        covered[w] = true;
        chosen.push(e);
        extend(adjacency, covered, chosen, v + 1, out);
        chosen.pop();
        covered[w] = false;
    }
    covered[v] = false;
}

fn ceil_half(n: i32) -> i32 {
    (n + 1).div_euclid(2)
}

/// `prod t_x^(ceil((b-a)/2) - [x closed])` over all shadow faces, where `a`
/// and `b` count the matched and unmatched sides of `x` in `g`.
pub fn face_weight(g: &OpenFaceGraph, m: &Matching) -> LaurentPoly {
    let pairs = g.all_faces().into_iter().filter_map(|x| {
        let sides = g.sides(x);
        let a = sides.iter().filter(|&&e| m.contains(e)).count() as i32;
        let b = sides.len() as i32 - a;
        let closed = i32::from(g.closed_faces().contains(&x));
        let e = ceil_half(b - a) - closed;
        (e != 0).then_some((Var::t(x.0, x.1), e))
    });
    LaurentPoly::from_pp(PowerProduct::from_pairs(pairs))
}

/// Pairs each matched `N` edge with the nearest unpaired `S` edge below it
/// in the same column.
pub fn perfect_pairing(g: &OpenFaceGraph, m: &Matching) -> Result<PairingSet, MatchingError> {
    // Heights doubled: S(i,j) sits at 2j-1, N(i,j) at 2j+1.
    let mut columns: BTreeMap<i32, Vec<(i32, HName)>> = BTreeMap::new();
    for &e in m.edges() {
        match g.edge(e).hname() {
            Some(h @ HName::S((i, j))) => columns.entry(i).or_default().push((2 * j - 1, h)),
            Some(h @ HName::N((i, j))) => columns.entry(i).or_default().push((2 * j + 1, h)),
            None => {}
        }
    }
    let mut pairs = Vec::new();
    for (i, mut col) in columns {
        col.sort_unstable();
        let mut stack = Vec::new();
        for (_, h) in col {
            match h {
                HName::S(a) => stack.push(a),
                HName::N(b) => {
                    let a = stack.pop().ok_or(MatchingError::UnbalancedColumn(i))?;
                    pairs.push((a, b));
                }
            }
        }
        if !stack.is_empty() {
            return Err(MatchingError::UnbalancedColumn(i));
        }
    }
    pairs.sort_unstable();
    Ok(PairingSet { pairs })
}

/// The column interval `c[i, j1-k(i,j1)-1 ..= j2+k(i,j2)+1]` for each pair.
pub fn pairing_weight(s: &SteppedSurface, p: &PairingSet) -> LaurentPoly {
    let pairs = p.pairs.iter().flat_map(|&((i, j1), (_, j2))| {
        let lo = j1 - s.height(i, j1) - 1;
        let hi = j2 + s.height(i, j2) + 1;
        (lo..=hi).map(move |a| (Var::c(i, a), 1))
    });
    LaurentPoly::from_pp(PowerProduct::from_pairs(pairs))
}

/// `T = sum_M w_p(M) w_f(M)`.
pub fn solve_matching(inst: &Instance) -> Result<LaurentPoly, MatchingError> {
    if inst.shadow().is_degenerate() {
        return Ok(inst.apex_value());
    }
    let g = build_graph(inst.surface(), inst.point())?;
    let terms = enumerate_matchings(&g)
        .iter()
        .map(|m| Ok(&pairing_weight(inst.surface(), &perfect_pairing(&g, m)?) * &face_weight(&g, m)))
        .collect::<Result<Vec<_>, MatchingError>>()?;
    Ok(terms.into_iter().sum())
}

/// `M ∪ Diag(E(closure) \ E(G))`, as closure edge ids.
pub fn extend_matching(g: &OpenFaceGraph, gbar: &OpenFaceGraph, m: &Matching) -> Matching {
    let mut edges: Vec<usize> = m
        .edges()
        .iter()
        .map(|&e| gbar.edge_id(g.edge(e).key).expect("G is a subgraph of its closure"))
        .collect();
    edges.extend(
        gbar.edges()
            .iter()
            .filter(|e| e.class == EdgeClass::Diagonal && g.edge_id(e.key).is_none())
            .map(|e| e.id),
    );
    Matching::new(edges)
}

/// All white-black horizontal and diagonal edges of the closure.
pub fn mbar0(gbar: &OpenFaceGraph) -> Matching {
    Matching::new(gbar.reference_set().into_iter().collect())
}

/// `p_a = tau[i, j-k-1]` for an S-edge over a closed face `a`.
pub fn tail_below(s: &SteppedSurface, (i, j): Site) -> Var {
    Var::tail(i, j - s.height(i, j) - 1)
}

/// `pbar_b = tau[i, j+k+2]` for an N-edge over a closed face `b`.
pub fn tail_above(s: &SteppedSurface, (i, j): Site) -> Var {
    Var::tail(i, j + s.height(i, j) + 2)
}

/// The edge weight as exponent pairs: `t_x^-1` for each bounded face of the
/// closure, `p_a` on `S(a)` and `pbar_b^-1` on `N(b)` over closed faces.
fn edge_weight_pairs(gbar: &OpenFaceGraph, s: &SteppedSurface, e: usize) -> Vec<(Var, i32)> {
    let e = gbar.edge(e);
    let faces = gbar.all_faces();
    let mut pairs: Vec<(Var, i32)> =
        e.faces.iter().filter(|x| faces.contains(x)).map(|&(i, j)| (Var::t(i, j), -1)).collect();
    match e.hname() {
        Some(HName::S(a)) if gbar.closed_faces().contains(&a) => pairs.push((tail_below(s, a), 1)),
        Some(HName::N(b)) if gbar.closed_faces().contains(&b) => pairs.push((tail_above(s, b), -1)),
        _ => {}
    }
    pairs
}

pub fn edge_weight(gbar: &OpenFaceGraph, s: &SteppedSurface, e: usize) -> LaurentPoly {
    LaurentPoly::from_pp(PowerProduct::from_pairs(edge_weight_pairs(gbar, s, e)))
}

/// Product of edge weights over a set, with tails normalized.
pub fn edge_weight_set(gbar: &OpenFaceGraph, s: &SteppedSurface, edges: &[usize]) -> LaurentPoly {
    let pairs = edges.iter().flat_map(|&e| edge_weight_pairs(gbar, s, e));
    LaurentPoly::from_pp(PowerProduct::from_pairs(pairs)).normalize_tails()
}

/// `w_e(M0)` with every `c` and tail set to 1: a pure `t` monomial.
pub fn reference_weight(gbar: &OpenFaceGraph, s: &SteppedSurface) -> LaurentPoly {
    edge_weight_set(gbar, s, mbar0(gbar).edges()).set_one(&[VarKind::C, VarKind::Tail])
}

/// `T = sum_M w_e(Mbar) / w_e(Mbar0)|_{c=1}`.
pub fn solve_edge(inst: &Instance) -> Result<LaurentPoly, MatchingError> {
    if inst.shadow().is_degenerate() {
        return Ok(inst.apex_value());
    }
    let s = inst.surface();
    let g = build_graph(s, inst.point())?;
    let gbar = build_closure(s, inst.point())?;
    let total: LaurentPoly = enumerate_matchings(&g)
        .iter()
        .map(|m| edge_weight_set(&gbar, s, extend_matching(&g, &gbar, m).edges()))
        .sum();
    let total = total.normalize_tails().assert_tail_free()?;
    Ok(total.exact_div(&reference_weight(&gbar, s))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_oracle;
    use crate::surface::{proj_height, Point3};

    fn pt(i: i32, j: i32, k: i32) -> Point3 {
        Point3::new(i, j, k).unwrap()
    }

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn diamond_counts() {
        for (p, n) in [(pt(0, 0, 1), 2), (pt(1, 0, 2), 8), (pt(0, 0, 3), 64)] {
            let g = build_graph(&SteppedSurface::fund(), p).unwrap();
            let ms = enumerate_matchings(&g);
            assert_eq!(ms.len(), n);
            assert!(ms.iter().all(|m| m.is_perfect_on(&g)));
            assert!(ms.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn first_step_face_weights_sum_to_coefficient_free_value() {
        let g = build_graph(&SteppedSurface::fund(), pt(0, 0, 1)).unwrap();
        let total: LaurentPoly = enumerate_matchings(&g).iter().map(|m| face_weight(&g, m)).sum();
        assert_eq!(total, poly("t[-1,0]*t[0,0]^-1*t[1,0] + t[0,-1]*t[0,0]^-1*t[0,1]"));
    }

    #[test]
    fn the_worked_example() {
        let p = pt(0, 0, 3);
        let s = SteppedSurface::grafted(p, |i, j| (i + j).abs() - 1).unwrap();
        let g = build_graph(&s, p).unwrap();
        let expected = PairingSet {
            pairs: vec![
                ((-1, 0), (-1, 1)),
                ((0, -1), (0, 1)),
                ((0, 0), (0, 0)),
                ((1, -1), (1, 0)),
            ],
        };
        let m = enumerate_matchings(&g)
            .into_iter()
            .find(|m| perfect_pairing(&g, m).unwrap() == expected)
            .expect("the example pairing occurs");
        assert_eq!(face_weight(&g, &m), poly("t[-2,0]*t[0,0]^-1*t[2,0]"));
        assert_eq!(
            pairing_weight(&s, &expected),
            poly("c[-1,-1]*c[-1,0]*c[-1,1]*c[0,0]*c[0,-2]*c[0,-1]*c[0,0]*c[0,1]*c[0,2]*c[1,-1]*c[1,0]*c[1,1]")
        );
    }

    #[test]
    fn long_pair_spans_the_column_segment() {
        let (a, b) = (pt(0, 4, 3), pt(0, 10, 5));
        let items = (-8..=8).flat_map(|i| (-4..=18).map(move |j| (i, j))).map(|(i, j)| {
            let h = crate::surface::fund_height(i, j).max(proj_height(a, i, j)).max(proj_height(b, i, j));
            (i, j, h)
        });
        let s = SteppedSurface::from_overrides(items).unwrap();
        let w = pairing_weight(&s, &PairingSet { pairs: vec![((0, 4), (0, 10))] });
        assert_eq!(w, crate::surface::coeff_j(0, 8, 8));
    }

    #[test]
    fn empty_pairing_weighs_one() {
        assert!(pairing_weight(&SteppedSurface::fund(), &PairingSet::default()).is_one());
    }

    #[test]
    fn solutions_agree_with_the_recurrence() {
        let cases = [
            (SteppedSurface::fund(), pt(0, 0, 1)),
            (SteppedSurface::fund(), pt(1, 0, 2)),
            (SteppedSurface::fund(), pt(0, 0, 3)),
            (SteppedSurface::grafted(pt(0, 0, 3), |i, j| (i + j).abs() - 1).unwrap(), pt(0, 0, 3)),
            (SteppedSurface::fund(), pt(0, 0, -1)),
        ];
        for (s, p) in cases {
            let inst = Instance::new(s, p).unwrap();
            let oracle = solve_oracle(&inst).unwrap();
            assert_eq!(solve_matching(&inst).unwrap(), oracle, "matching at {p}");
            assert_eq!(solve_edge(&inst).unwrap(), oracle, "edge at {p}");
        }
    }

    #[test]
    fn face_weight_from_reference_counts() {
        let p = pt(0, 0, 3);
        let s = SteppedSurface::grafted(p, |i, j| (i + j).abs() - 1).unwrap();
        let (g, gbar) = (build_graph(&s, p).unwrap(), build_closure(&s, p).unwrap());
        let m0 = mbar0(&gbar);
        for m in enumerate_matchings(&g) {
            let mbar = extend_matching(&g, &gbar, &m);
            let pairs = gbar.all_faces().into_iter().map(|x| {
                let n = gbar.sides(x).iter().filter(|&&e| m0.contains(e)).count() as i32;
                let d = gbar.sides(x).iter().filter(|&&e| mbar.contains(e)).count() as i32;
                (Var::t(x.0, x.1), n - d)
            });
            assert_eq!(face_weight(&g, &m), LaurentPoly::from_pp(PowerProduct::from_pairs(pairs)));
        }
    }
}
