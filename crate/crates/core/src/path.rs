//! Non-intersecting path families on the oriented graph and its closure,
//! their bijection with perfect matchings, and the path solution.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{boundary_sets, build_closure, build_graph, GraphError, HName, OpenFaceGraph};
use crate::laurent::{LaurentError, LaurentPoly, PowerProduct, Var};
use crate::matching::{edge_weight, enumerate_matchings, extend_matching, mbar0, tail_above, Matching, MatchingError};
use crate::oracle::Instance;
use crate::surface::SteppedSurface;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("edge set is not a family of non-intersecting paths: {0}")]
    NotAPathFamily(String),
    #[error("edge set is not a perfect matching")]
    NotPerfect,
}

/// Vertex-disjoint directed paths, from the left-most south-west vertices
/// to the right-most south-east ones.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PathFamily {
    edges: Vec<usize>,
    /// Vertex sequences, one per source in increasing id order.
    paths: Vec<Vec<usize>>,
}

impl PathFamily {
    /// Checks the edge set and splits it into paths.
    pub fn from_edges(g: &OpenFaceGraph, edges: impl IntoIterator<Item = usize>) -> Result<Self, PathError> {
        let edges: BTreeSet<usize> = edges.into_iter().collect();
        let bounds = boundary_sets(g);
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        let mut indegree: BTreeMap<usize, usize> = BTreeMap::new();
        for &e in &edges {
            let e = g.edge(e);
            if next.insert(e.tail, e.head).is_some() {
                return Err(PathError::NotAPathFamily(format!("vertex {} branches", e.tail)));
            }
            *indegree.entry(e.head).or_default() += 1;
            if indegree[&e.head] > 1 {
                return Err(PathError::NotAPathFamily(format!("vertex {} merges", e.head)));
            }
        }
        let starts: BTreeSet<usize> = next.keys().filter(|v| !indegree.contains_key(v)).copied().collect();
        let ends: BTreeSet<usize> = indegree.keys().filter(|v| !next.contains_key(v)).copied().collect();
        if starts != bounds.left_sw {
            return Err(PathError::NotAPathFamily(format!("sources {starts:?} != {:?}", bounds.left_sw)));
        }
        if ends != bounds.right_se {
            return Err(PathError::NotAPathFamily(format!("sinks {ends:?} != {:?}", bounds.right_se)));
        }
        let mut paths = Vec::with_capacity(starts.len());
        let mut visited = 0;
        for &s in &starts {
            let mut path = vec![s];
            let mut v = s;
            while let Some(&w) = next.get(&v) {
                path.push(w);
                v = w;
            }
            visited += path.len() - 1;
            paths.push(path);
        }
        // Every edge reached from a source; anything left lies on a cycle.
        if visited != edges.len() {
            return Err(PathError::NotAPathFamily("closed loop".into()));
        }
        Ok(PathFamily { edges: edges.into_iter().collect(), paths })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn to_set(&self) -> BTreeSet<usize> {
        self.edges.iter().copied().collect()
    }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (a, b): (BTreeSet<_>, BTreeSet<_>) = (a.iter().copied().collect(), b.iter().copied().collect());
    a.symmetric_difference(&b).copied().collect()
}

/// `Phi(M) = M △ M0` on `g`.
pub fn phi(g: &OpenFaceGraph, m: &Matching) -> Result<PathFamily, PathError> {
    let m0: Vec<usize> = g.reference_set().into_iter().collect();
    PathFamily::from_edges(g, symmetric_difference(m.edges(), &m0))
}

/// `Psi(P) = P △ M0`, the inverse of `phi`.
pub fn psi(g: &OpenFaceGraph, p: &PathFamily) -> Result<Matching, PathError> {
    let m0: Vec<usize> = g.reference_set().into_iter().collect();
    let m = Matching::new(symmetric_difference(p.edges(), &m0));
    if m.is_perfect_on(g) {
        Ok(m)
    } else {
        Err(PathError::NotPerfect)
    }
}

/// `Phibar(Mbar) = Mbar △ Mbar0` on the closure.
pub fn phi_bar(gbar: &OpenFaceGraph, mbar: &Matching) -> Result<PathFamily, PathError> {
    PathFamily::from_edges(gbar, symmetric_difference(mbar.edges(), mbar0(gbar).edges()))
}

/// Path families on the closure, as images of the matchings of `g`.
pub fn enumerate_paths(g: &OpenFaceGraph, gbar: &OpenFaceGraph) -> Result<Vec<PathFamily>, PathError> {
    let mut out = enumerate_matchings(g)
        .iter()
        .map(|m| phi_bar(gbar, &extend_matching(g, gbar, m)))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}

/// Independent enumeration by depth-first search: route the sources in
/// order along vertex-disjoint directed paths to distinct sinks.
pub fn enumerate_paths_direct(g: &OpenFaceGraph) -> Vec<PathFamily> {
    let bounds = boundary_sets(g);
    let sources: Vec<usize> = bounds.left_sw.iter().copied().collect();
    let mut out_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertices().len()];
    for e in g.edges() {
        out_edges[e.tail].push((e.id, e.head));
    }
    let mut search = Search {
        out_edges: &out_edges,
        sinks: &bounds.right_se,
        used: vec![false; g.vertices().len()],
        edges: Vec::new(),
        found: Vec::new(),
    };
    search.route(&sources);
    let mut families: Vec<PathFamily> = search
        .found
        .into_iter()
        .map(|edges| PathFamily::from_edges(g, edges).expect("search builds valid families"))
        .collect();
    families.sort();
    families
}

struct Search<'a> {
    out_edges: &'a [Vec<(usize, usize)>],
    sinks: &'a BTreeSet<usize>,
    used: Vec<bool>,
    edges: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn route(&mut self, sources: &[usize]) {
        match sources.split_first() {
            None => self.found.push(self.edges.clone()),
            Some((&s, rest)) if !self.used[s] => {
                self.used[s] = true;
                self.walk(s, rest);
                self.used[s] = false;
            }
            Some(_) => {}
        }
    }

    fn walk(&mut self, v: usize, rest: &[usize]) {
        if self.sinks.contains(&v) {
            self.route(rest);
            return;
        }
        for &(e, w) in &self.out_edges[v] {
            if self.used[w] {
                continue;
            }
            self.used[w] = true;
            self.edges.push(e);
            self.walk(w, rest);
            self.edges.pop();
            self.used[w] = false;
        }
    }
}

/// Modified edge weight as exponent pairs: the reference edges are inverted.
fn modified_pairs(gbar: &OpenFaceGraph, s: &SteppedSurface, e: usize) -> Vec<(Var, i32)> {
    let w = edge_weight(gbar, s, e);
    let m = w.as_monomial().expect("edge weights are monomials");
    let sign = if gbar.edge(e).is_reference() { -1 } else { 1 };
    m.exps.iter().map(|(v, x)| (v, sign * x)).collect()
}

pub fn modified_edge_weight(gbar: &OpenFaceGraph, s: &SteppedSurface, e: usize) -> LaurentPoly {
    LaurentPoly::from_pp(PowerProduct::from_pairs(modified_pairs(gbar, s, e)))
}

/// `w'_e` of a family: the product over its edges.
pub fn family_weight(gbar: &OpenFaceGraph, s: &SteppedSurface, p: &PathFamily) -> LaurentPoly {
    let pairs = p.edges().iter().flat_map(|&e| modified_pairs(gbar, s, e));
    LaurentPoly::from_pp(PowerProduct::from_pairs(pairs))
}

/// `prod pbar_b` over the white-black horizontal edges `N(b)` of the
/// reference set with `b` closed.
pub fn tail_normalizer(gbar: &OpenFaceGraph, s: &SteppedSurface) -> PowerProduct {
    PowerProduct::from_pairs(mbar0(gbar).edges().iter().filter_map(|&e| match gbar.edge(e).hname() {
        Some(HName::N(b)) if gbar.closed_faces().contains(&b) => Some((tail_above(s, b), 1)),
        _ => None,
    }))
}

/// `T = sum_P w'_e(P) / prod pbar_b`.
pub fn solve_path(inst: &Instance) -> Result<LaurentPoly, PathError> {
    if inst.shadow().is_degenerate() {
        return Ok(inst.apex_value());
    }
    let s = inst.surface();
    let g = build_graph(s, inst.point())?;
    let gbar = build_closure(s, inst.point())?;
    let q = tail_normalizer(&gbar, s).pow(-1);
    let total: LaurentPoly = enumerate_paths(&g, &gbar)?
        .iter()
        .map(|p| {
            let pairs = p.edges().iter().flat_map(|&e| modified_pairs(&gbar, s, e));
            LaurentPoly::from_pp(PowerProduct::from_pairs(pairs).mul(&q))
        })
        .sum();
    Ok(total.normalize_tails().assert_tail_free()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::edge_weight_set;
    use crate::oracle::solve_oracle;
    use crate::surface::Point3;

    fn pt(i: i32, j: i32, k: i32) -> Point3 {
        Point3::new(i, j, k).unwrap()
    }

    fn cases() -> Vec<(SteppedSurface, Point3)> {
        vec![
            (SteppedSurface::fund(), pt(0, 0, 1)),
            (SteppedSurface::fund(), pt(1, 0, 2)),
            (SteppedSurface::fund(), pt(0, 0, 3)),
            (SteppedSurface::grafted(pt(0, 0, 3), |i, j| (i + j).abs() - 1).unwrap(), pt(0, 0, 3)),
            (SteppedSurface::grafted(pt(0, 0, 5), |i, j| 1 - i + j).unwrap(), pt(0, 0, 5)),
        ]
    }

    #[test]
    fn phi_round_trips_on_g() {
        for (s, p) in cases() {
            let g = build_graph(&s, p).unwrap();
            let m0 = g.reference_set();
            for m in enumerate_matchings(&g) {
                let fam = phi(&g, &m).unwrap();
                assert_eq!(psi(&g, &fam).unwrap(), m);
                for &e in &m0 {
                    assert_ne!(m.contains(e), fam.to_set().contains(&e));
                }
            }
        }
    }

    #[test]
    fn closure_families_extend_by_a_fixed_set() {
        for (s, p) in cases() {
            let g = build_graph(&s, p).unwrap();
            let gbar = build_closure(&s, p).unwrap();
            let mut extra: Option<BTreeSet<usize>> = None;
            for m in enumerate_matchings(&g) {
                let small: BTreeSet<usize> =
                    phi(&g, &m).unwrap().edges().iter().map(|&e| gbar.edge_id(g.edge(e).key).unwrap()).collect();
                let big = phi_bar(&gbar, &extend_matching(&g, &gbar, &m)).unwrap().to_set();
                assert!(small.is_subset(&big));
                let diff: BTreeSet<usize> = big.difference(&small).copied().collect();
                assert_eq!(*extra.get_or_insert_with(|| diff.clone()), diff, "{p}");
            }
        }
    }

    #[test]
    fn direct_search_finds_the_same_families() {
        for (s, p) in cases() {
            let g = build_graph(&s, p).unwrap();
            let gbar = build_closure(&s, p).unwrap();
            assert_eq!(enumerate_paths(&g, &gbar).unwrap(), enumerate_paths_direct(&gbar), "{p}");
        }
    }

    #[test]
    fn weight_factors_through_the_reference_set() {
        for (s, p) in cases() {
            let g = build_graph(&s, p).unwrap();
            let gbar = build_closure(&s, p).unwrap();
            let w0 = edge_weight_set(&gbar, &s, mbar0(&gbar).edges());
            for m in enumerate_matchings(&g) {
                let mbar = extend_matching(&g, &gbar, &m);
                let lhs = edge_weight_set(&gbar, &s, mbar.edges());
                let rhs = &family_weight(&gbar, &s, &phi_bar(&gbar, &mbar).unwrap()) * &w0;
                assert!(lhs.same_value(&rhs), "{p}");
            }
        }
    }

    #[test]
    fn path_solution_matches_the_recurrence() {
        for (s, p) in cases() {
            let inst = Instance::new(s, p).unwrap();
            assert_eq!(solve_path(&inst).unwrap(), solve_oracle(&inst).unwrap(), "{p}");
        }
        let inst = Instance::new(SteppedSurface::fund(), pt(2, 1, 0)).unwrap();
        assert_eq!(solve_path(&inst).unwrap(), LaurentPoly::var(Var::t(2, 1)));
    }

    #[test]
    fn first_step_has_two_families() {
        let (s, p) = (SteppedSurface::fund(), pt(0, 0, 1));
        let gbar = build_closure(&s, p).unwrap();
        assert_eq!(enumerate_paths_direct(&gbar).len(), 2);
    }
}
