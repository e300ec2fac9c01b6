//! The directed network of the closure: one chip per black vertex, the
//! elementary matrices of the chips, their ordered product, and the minor
//! that yields the solution.
//!
//! Every elementary matrix is the identity except in the row of its black
//! vertex, plus (for the modified matrices) scalars on neighbouring
//! diagonal entries. Matrices act on row vectors, so entry `(α,β)` is the
//! weight of going from row `α` on the left to row `β` on the right.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{build_closure, Color, EdgeClass, GraphError, OpenFaceGraph, Part};
use crate::laurent::{LaurentError, LaurentPoly, PowerProduct, Var, VarKind};
use crate::matching::{tail_above, tail_below};
use crate::oracle::Instance;
use crate::path::{modified_edge_weight, tail_normalizer};
use crate::surface::{Site, SteppedSurface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("unrecognized local pattern at vertex {0}: {1}")]
    UnrecognizedLocalPattern(usize, String),
    #[error("chip order has a cycle")]
    CyclicOrder,
    #[error("entry ({row},{col}) differs")]
    FlatnessViolated { row: usize, col: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ChipKind {
    U,
    UPrime,
    V,
    VPrime,
    W,
}

impl fmt::Display for ChipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChipKind::U => "U",
            ChipKind::UPrime => "U'",
            ChipKind::V => "V",
            ChipKind::VPrime => "V'",
            ChipKind::W => "W",
        })
    }
}

/// The four corners of the black vertex's square: `a` south-west, `b`
/// south-east, `c` north-west, `d` north-east.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChipLabels {
    pub a: Site,
    pub b: Site,
    pub c: Site,
    pub d: Site,
}

impl ChipLabels {
    fn of_square((i, j): Site) -> Self {
        ChipLabels { a: (i, j), b: (i + 1, j), c: (i, j + 1), d: (i + 1, j + 1) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chip {
    /// Vertex id of the black vertex in the closure.
    pub black: usize,
    pub kind: ChipKind,
    pub row: i32,
    pub labels: ChipLabels,
    pub pos: (i32, i32),
}

/// The chips of a closure with the precedence relation between them.
#[derive(Clone, Debug)]
pub struct Network {
    rows: (i32, i32),
    chips: Vec<Chip>,
    /// `(x, y)`: chip `x` must be applied before chip `y`.
    precedes: BTreeSet<(usize, usize)>,
    /// Chip pairs whose vertical edges end at the same white vertex, where
    /// cutting the network could hand that vertex to either chip.
    splits: Vec<(usize, usize)>,
}

impl Network {
    pub fn rows(&self) -> (i32, i32) {
        self.rows
    }

    pub fn chips(&self) -> &[Chip] {
        &self.chips
    }

    pub fn precedes(&self) -> &BTreeSet<(usize, usize)> {
        &self.precedes
    }

    pub fn ambiguous_splits(&self) -> &[(usize, usize)] {
        &self.splits
    }

    /// The canonical extension, forced to apply `first` before `second`.
    /// Both orders of an ambiguous split are valid decompositions.
    pub fn split_order(&self, first: usize, second: usize) -> Result<Vec<usize>, NetworkError> {
        let mut forced = self.clone();
        forced.precedes.insert((first, second));
        forced.canonical_order()
    }

    /// A linear extension of the precedence relation; among available chips
    /// the one with the smallest key goes first.
    pub fn linear_extension<K: Ord>(&self, key: impl Fn(&Chip) -> K) -> Result<Vec<usize>, NetworkError> {
        let n = self.chips.len();
        let mut indegree = vec![0usize; n];
        let mut after: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(x, y) in &self.precedes {
            indegree[y] += 1;
            after[x].push(y);
        }
        let keys: Vec<K> = self.chips.iter().map(key).collect();
        let mut ready: BinaryHeap<Reverse<(&K, usize)>> =
            (0..n).filter(|&x| indegree[x] == 0).map(|x| Reverse((&keys[x], x))).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, x))) = ready.pop() {
            order.push(x);
            for &y in &after[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(Reverse((&keys[y], y)));
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(NetworkError::CyclicOrder)
        }
    }

    /// Leftmost column first, then bottom row first.
    pub fn canonical_order(&self) -> Result<Vec<usize>, NetworkError> {
        self.linear_extension(|c| (c.pos.0, c.row))
    }

    /// A second extension, top row first, used to test order independence.
    pub fn alternative_order(&self) -> Result<Vec<usize>, NetworkError> {
        self.linear_extension(|c| (Reverse(c.row), c.pos.0))
    }
}

/// Cuts the closure at its white vertices.
pub fn build_network(gbar: &OpenFaceGraph) -> Result<Network, NetworkError> {
    let mut chip_of = BTreeMap::new();
    let mut chips = Vec::new();
    for v in gbar.vertices().iter().filter(|v| v.color == Color::Black) {
        let kind = match v.key.part {
            Part::Whole => ChipKind::W,
            Part::SE => ChipKind::UPrime,
            Part::NW => ChipKind::V,
            Part::SW => ChipKind::U,
            Part::NE => ChipKind::VPrime,
        };
        chip_of.insert(v.id, chips.len());
        chips.push(Chip { black: v.id, kind, row: v.row, labels: ChipLabels::of_square(v.key.square), pos: v.pos });
    }

    // Each row must be a single horizontal chain for the wire picture.
    let mut heads_per_row: BTreeMap<i32, usize> = BTreeMap::new();
    let mut has_left = vec![false; gbar.vertices().len()];
    for e in gbar.edges().iter().filter(|e| e.class != EdgeClass::Vertical) {
        has_left[e.head] = true;
    }
    for v in gbar.vertices().iter().filter(|v| !has_left[v.id]) {
        *heads_per_row.entry(v.row).or_default() += 1;
    }
    if let Some((row, _)) = heads_per_row.iter().find(|(_, &n)| n > 1) {
        return Err(NetworkError::UnrecognizedLocalPattern(0, format!("row {row} splits into several chains")));
    }

    let mut precedes = BTreeSet::new();
    let mut splits = Vec::new();
    for w in gbar.vertices().iter().filter(|v| v.color == Color::White) {
        let mut left = None;
        let mut right = None;
        let mut verticals = Vec::new();
        for e in gbar.incident(w.id) {
            match (e.class, e.head == w.id) {
                (EdgeClass::Vertical, true) => verticals.push(chip_of[&e.tail]),
                (EdgeClass::Vertical, false) => {
                    return Err(NetworkError::UnrecognizedLocalPattern(w.id, "vertical edge leaves a white vertex".into()))
                }
                (_, true) => left = Some(chip_of[&e.tail]),
                (_, false) => right = Some(chip_of[&e.head]),
            }
        }
        if let (Some(l), Some(r)) = (left, right) {
            precedes.insert((l, r));
        }
        for (x, &b) in verticals.iter().enumerate() {
            splits.extend(verticals[x + 1..].iter().map(|&c| (b.min(c), b.max(c))));
            if let Some(l) = left {
                precedes.insert((l, b));
            }
            if let Some(r) = right {
                precedes.insert((b, r));
            }
        }
    }
    Ok(Network { rows: gbar.row_range(), chips, precedes, splits })
}

/// An elementary matrix: identity except one full row and some scaled
/// diagonal entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elementary {
    pub row: i32,
    pub entries: Vec<(i32, LaurentPoly)>,
    pub diagonal: Vec<(i32, LaurentPoly)>,
}

impl Elementary {
    fn entry(&self, alpha: i32, beta: i32) -> LaurentPoly {
        if alpha == self.row {
            return self.entries.iter().find(|e| e.0 == beta).map(|e| e.1.clone()).unwrap_or_else(LaurentPoly::zero);
        }
        if alpha != beta {
            return LaurentPoly::zero();
        }
        self.diagonal.iter().find(|e| e.0 == alpha).map(|e| e.1.clone()).unwrap_or_else(LaurentPoly::one)
    }

    /// The dense block on the given rows.
    pub fn block(&self, rows: &[i32]) -> Vec<Vec<LaurentPoly>> {
        rows.iter().map(|&a| rows.iter().map(|&b| self.entry(a, b)).collect()).collect()
    }
}

/// The chip read off the modified edge weights of the closure: row `r`
/// holds `w'(e_L) * w'(out)` for each out-edge of the black vertex.
pub fn generic_chip(gbar: &OpenFaceGraph, s: &SteppedSurface, chip: &Chip) -> Result<Elementary, NetworkError> {
    let b = chip.black;
    let mut left = LaurentPoly::one();
    let mut horizontal_out = None;
    let mut outs: Vec<(i32, LaurentPoly)> = Vec::new();
    for e in gbar.incident(b) {
        let w = modified_edge_weight(gbar, s, e.id);
        match (e.class, e.head == b) {
            (EdgeClass::Vertical, false) => outs.push((gbar.vertex(e.head).row, w)),
            (EdgeClass::Vertical, true) => {
                return Err(NetworkError::UnrecognizedLocalPattern(b, "vertical edge enters a black vertex".into()))
            }
            (_, true) => left = w,
            (_, false) => horizontal_out = Some(w),
        }
    }
    outs.push((chip.row, horizontal_out.unwrap_or_else(LaurentPoly::one)));
    let mut entries: Vec<(i32, LaurentPoly)> = outs.into_iter().map(|(r, w)| (r, &left * &w)).collect();
    entries.sort_by_key(|e| e.0);
    Ok(Elementary { row: chip.row, entries, diagonal: Vec::new() })
}

/// The modified chip: the `U`, `V`, `W` blocks of the generic chip times
/// `pbar_a^-1`, including the identity rows of the block inside the network.
pub fn modified_chip(
    gbar: &OpenFaceGraph,
    s: &SteppedSurface,
    chip: &Chip,
) -> Result<Elementary, NetworkError> {
    let mut e = generic_chip(gbar, s, chip)?;
    let a = chip.labels.a;
    if !gbar.closed_faces().contains(&a) {
        return Ok(e);
    }
    let r = chip.row;
    let others: &[i32] = match chip.kind {
        ChipKind::U => &[r - 1],
        ChipKind::V => &[r + 1],
        ChipKind::W => &[r - 1, r + 1],
        ChipKind::UPrime | ChipKind::VPrime => return Ok(e),
    };
    let inv = LaurentPoly::var_pow(tail_above(s, a), -1);
    for (_, w) in e.entries.iter_mut() {
        *w = &*w * &inv;
    }
    let (lo, hi) = gbar.row_range();
    e.diagonal = others.iter().filter(|x| (lo..=hi).contains(*x)).map(|&x| (x, inv.clone())).collect();
    Ok(e)
}

/// Whether the tail factors `pbar_a` are absorbed into the matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    Plain,
    /// Each `U`, `V`, `W` block is multiplied by `pbar_a^-1`.
    Modified,
}

/// Face data for the closed-form chips: `t_x` is 1 off the closure faces,
/// tails are 1 off the closed faces.
struct FaceData<'a> {
    gbar: &'a OpenFaceGraph,
    s: &'a SteppedSurface,
    all: BTreeSet<Site>,
}

impl FaceData<'_> {
    fn t(&self, x: Site) -> PowerProduct {
        if self.all.contains(&x) {
            PowerProduct::var(Var::t(x.0, x.1), 1)
        } else {
            PowerProduct::one()
        }
    }

    fn pbar(&self, x: Site) -> PowerProduct {
        if self.gbar.closed_faces().contains(&x) {
            PowerProduct::var(tail_above(self.s, x), 1)
        } else {
            PowerProduct::one()
        }
    }

    fn p(&self, x: Site) -> PowerProduct {
        if self.gbar.closed_faces().contains(&x) {
            PowerProduct::var(tail_below(self.s, x), 1)
        } else {
            PowerProduct::one()
        }
    }
}

fn ratio(num: &[&PowerProduct], den: &[&PowerProduct]) -> LaurentPoly {
    let n = num.iter().fold(PowerProduct::one(), |acc, x| acc.mul(x));
    let d = den.iter().fold(PowerProduct::one(), |acc, x| acc.mul(x));
    LaurentPoly::from_pp(n.div(&d))
}

/// The closed-form elementary matrix of a chip.
pub fn formula_chip(gbar: &OpenFaceGraph, s: &SteppedSurface, chip: &Chip, scaling: Scaling) -> Elementary {
    let f = FaceData { gbar, s, all: gbar.all_faces() };
    let l = chip.labels;
    let (ta, tb, tc, td) = (f.t(l.a), f.t(l.b), f.t(l.c), f.t(l.d));
    let (pbar_a, p_d) = (f.pbar(l.a), f.p(l.d));
    let one = PowerProduct::one();
    let r = chip.row;
    let (entries, scaled_rows): (Vec<(i32, LaurentPoly)>, Vec<i32>) = match chip.kind {
        ChipKind::U => (
            vec![(r - 1, ratio(&[&pbar_a, &tc], &[&tb])), (r, ratio(&[&pbar_a, &ta], &[&tb]))],
            vec![r - 1],
        ),
        ChipKind::UPrime => (vec![(r - 1, ratio(&[&td], &[&tb])), (r, ratio(&[&p_d, &ta], &[&tb]))], vec![]),
        ChipKind::V => (
            vec![(r, ratio(&[&pbar_a, &tc], &[&td])), (r + 1, ratio(&[&pbar_a, &ta], &[&td]))],
            vec![r + 1],
        ),
        ChipKind::VPrime => (vec![(r, ratio(&[&p_d, &tc], &[&td])), (r + 1, ratio(&[&tb], &[&td]))], vec![]),
        ChipKind::W => (
            vec![
                (r - 1, ratio(&[&pbar_a, &tc], &[&tb])),
                (r, ratio(&[&pbar_a, &p_d, &ta, &tc], &[&tb, &td])),
                (r + 1, ratio(&[&pbar_a, &ta], &[&td])),
            ],
            vec![r - 1, r + 1],
        ),
    };
    match scaling {
        Scaling::Plain => Elementary { row: r, entries, diagonal: Vec::new() },
        Scaling::Modified => {
            let inv = LaurentPoly::from_pp(one.div(&pbar_a));
            let entries = entries.into_iter().map(|(b, w)| (b, &w * &inv)).collect();
            let diagonal = if pbar_a.is_one() { Vec::new() } else { scaled_rows.into_iter().map(|x| (x, inv.clone())).collect() };
            Elementary { row: r, entries, diagonal }
        }
    }
}

/// A dense square matrix over the Laurent ring, indexed by network rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkMatrix {
    rmin: i32,
    entries: Vec<Vec<LaurentPoly>>,
}

impl NetworkMatrix {
    pub fn identity((rmin, rmax): (i32, i32)) -> Self {
        let n = (rmax - rmin + 1).max(0) as usize;
        let entries = (0..n)
            .map(|a| (0..n).map(|b| if a == b { LaurentPoly::one() } else { LaurentPoly::zero() }).collect())
            .collect();
        NetworkMatrix { rmin, entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> (i32, i32) {
        (self.rmin, self.rmin + self.size() as i32 - 1)
    }

    fn ix(&self, r: i32) -> usize {
        (r - self.rmin) as usize
    }

    pub fn get(&self, alpha: i32, beta: i32) -> &LaurentPoly {
        &self.entries[self.ix(alpha)][self.ix(beta)]
    }

    /// Right multiplication by an elementary matrix.
    pub fn apply(&mut self, e: &Elementary) {
        let r = self.ix(e.row);
        let source: Vec<LaurentPoly> = self.entries.iter().map(|row| row[r].clone()).collect();
        let mut touched: BTreeMap<usize, Vec<LaurentPoly>> = BTreeMap::new();
        for (beta, w) in &e.entries {
            let b = self.ix(*beta);
            let column: Vec<LaurentPoly> = self
                .entries
                .iter()
                .enumerate()
                .map(|(a, row)| {
                    let base = if b == r { LaurentPoly::zero() } else { row[b].clone() };
                    &base + &(&source[a] * w)
                })
                .collect();
            touched.insert(b, column);
        }
        if !e.entries.iter().any(|(b, _)| *b == e.row) {
            touched.insert(r, vec![LaurentPoly::zero(); self.size()]);
        }
        for (b, column) in touched {
            for (row, x) in self.entries.iter_mut().zip(column) {
                row[b] = x;
            }
        }
        for (alpha, d) in &e.diagonal {
            let a = self.ix(*alpha);
            for row in self.entries.iter_mut() {
                row[a] = &row[a] * d;
            }
        }
    }

    /// The minor on rows and columns `rows`, by Laplace expansion memoized
    /// over the set of used columns.
    pub fn principal_minor(&self, rows: &[i32]) -> LaurentPoly {
        let idx: Vec<usize> = rows.iter().map(|&r| self.ix(r)).collect();
        let m = idx.len();
        assert!(m < 32, "minor too large");
        let mut memo: FxHashMap<u32, LaurentPoly> = FxHashMap::default();
        self.laplace(&idx, 0, &mut memo)
    }

    fn laplace(&self, idx: &[usize], used: u32, memo: &mut FxHashMap<u32, LaurentPoly>) -> LaurentPoly {
        let m = idx.len();
        let k = used.count_ones() as usize;
        if k == m {
            return LaurentPoly::one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut total = LaurentPoly::zero();
        let mut skipped = 0;
        for c in 0..m {
            if used & (1 << c) != 0 {
                continue;
            }
            let entry = &self.entries[idx[k]][idx[c]];
            if !entry.is_zero() {
                let rest = self.laplace(idx, used | (1 << c), memo);
                let term = entry * &rest;
                total = if skipped % 2 == 0 { &total + &term } else { &total - &term };
            }
            skipped += 1;
        }
        memo.insert(used, total.clone());
        total
    }
}

/// Product of the elementary matrices in the given order.
pub fn network_matrix(rows: (i32, i32), elementary: &[Elementary]) -> NetworkMatrix {
    let mut m = NetworkMatrix::identity(rows);
    for e in elementary {
        m.apply(e);
    }
    m
}

/// The same minor by transfer on the exterior power: a state is a set of
/// occupied rows, and each chip moves the occupant of its row to an
/// adjacent free row. Only additions occur. States that cannot return to
/// `rows` are dropped, found by a backward pass over the bare state sets.
pub fn minor_by_transfer(elementary: &[Elementary], rows: &[i32]) -> LaurentPoly {
    let start: Vec<i32> = rows.to_vec();
    let live = live_states(elementary, &start);
    let mut states: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::from([(start.clone(), LaurentPoly::one())]);
    for (e, keep) in elementary.iter().zip(&live[1..]) {
        let mut next: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::new();
        for (occupied, w) in states {
            let mut scale = LaurentPoly::one();
            for (alpha, d) in &e.diagonal {
                if *alpha != e.row && occupied.contains(alpha) {
                    scale = &scale * d;
                }
            }
            let w = &w * &scale;
            for (moved, x) in successors(e, &occupied) {
                if !keep.contains(&moved) {
                    continue;
                }
                let term = match x {
                    Some(x) => &w * x,
                    None => w.clone(),
                };
                let slot = next.entry(moved).or_insert_with(LaurentPoly::zero);
                *slot = &*slot + &term;
            }
        }
        states = next;
    }
    states.remove(&start).unwrap_or_else(LaurentPoly::zero)
}

/// The states reachable from `start` whose run can still end at `start`,
/// before each chip and after the last.
fn live_states(elementary: &[Elementary], start: &[i32]) -> Vec<BTreeSet<Vec<i32>>> {
    let mut forward = vec![BTreeSet::from([start.to_vec()])];
    for e in elementary {
        let last = forward.last().expect("nonempty");
        let next = last.iter().flat_map(|s| successors(e, s).into_iter().map(|(m, _)| m)).collect();
        forward.push(next);
    }
    let mut live = forward.clone();
    live[elementary.len()].retain(|s| s == start);
    for (i, e) in elementary.iter().enumerate().rev() {
        let (head, tail) = live.split_at_mut(i + 1);
        let after = &tail[0];
        head[i].retain(|s| successors(e, s).iter().any(|(m, _)| after.contains(m)));
    }
    live
}

/// The states one chip can produce from `occupied`, with the entry used.
fn successors<'e>(e: &'e Elementary, occupied: &[i32]) -> Vec<(Vec<i32>, Option<&'e LaurentPoly>)> {
    if !occupied.contains(&e.row) {
        return vec![(occupied.to_vec(), None)];
    }
    e.entries
        .iter()
        .filter(|(beta, _)| *beta == e.row || !occupied.contains(beta))
        .map(|(beta, x)| {
            let mut moved: Vec<i32> = occupied.iter().map(|&a| if a == e.row { *beta } else { a }).collect();
            moved.sort_unstable();
            (moved, Some(x))
        })
        .collect()
}

/// The rows of the south half: `r_min ..= -1`.
pub fn south_rows(rows: (i32, i32)) -> Vec<i32> {
    (rows.0..=-1).collect()
}

/// Everything needed to evaluate the network of one instance.
pub struct NetworkInstance {
    pub gbar: OpenFaceGraph,
    pub network: Network,
    surface: SteppedSurface,
}

impl NetworkInstance {
    pub fn new(inst: &Instance) -> Result<Self, NetworkError> {
        let gbar = build_closure(inst.surface(), inst.point())?;
        let network = build_network(&gbar)?;
        Ok(NetworkInstance { gbar, network, surface: inst.surface().clone() })
    }

    pub fn generic_chips(&self, order: &[usize]) -> Result<Vec<Elementary>, NetworkError> {
        order.iter().map(|&x| generic_chip(&self.gbar, &self.surface, &self.network.chips()[x])).collect()
    }

    pub fn formula_chips(&self, order: &[usize], scaling: Scaling) -> Vec<Elementary> {
        order.iter().map(|&x| formula_chip(&self.gbar, &self.surface, &self.network.chips()[x], scaling)).collect()
    }

    /// `Q = prod pbar_b` as a monomial.
    pub fn q(&self) -> LaurentPoly {
        LaurentPoly::from_pp(tail_normalizer(&self.gbar, &self.surface))
    }

    fn finish(minor: LaurentPoly) -> Result<LaurentPoly, NetworkError> {
        Ok(minor.normalize_tails().assert_tail_free()?)
    }

    /// `Q^-1` times the south minor of the plain matrix. The minor is taken
    /// by transfer: full matrix entries sum paths through the north rows and
    /// make Laplace expansion run out of memory from `k = 5` on.
    pub fn solve_plain(&self) -> Result<LaurentPoly, NetworkError> {
        let order = self.network.canonical_order()?;
        let minor = minor_by_transfer(&self.generic_chips(&order)?, &south_rows(self.network.rows()));
        NetworkInstance::finish(minor.exact_div(&self.q())?)
    }

    /// The same as [`NetworkInstance::solve_plain`] with the minor taken by
    /// Laplace expansion of the full network matrix.
    pub fn solve_plain_laplace(&self) -> Result<LaurentPoly, NetworkError> {
        let order = self.network.canonical_order()?;
        let m = network_matrix(self.network.rows(), &self.generic_chips(&order)?);
        let minor = m.principal_minor(&south_rows(self.network.rows()));
        NetworkInstance::finish(minor.exact_div(&self.q())?)
    }

    pub fn modified_chips(&self, order: &[usize]) -> Result<Vec<Elementary>, NetworkError> {
        order.iter().map(|&x| modified_chip(&self.gbar, &self.surface, &self.network.chips()[x])).collect()
    }

    /// The south minor of the modified matrix, by transfer.
    pub fn solve_modified(&self) -> Result<LaurentPoly, NetworkError> {
        let order = self.network.canonical_order()?;
        let chips = self.modified_chips(&order)?;
        NetworkInstance::finish(minor_by_transfer(&chips, &south_rows(self.network.rows())))
    }
}

/// `T = Q^-1 |M|` on the south rows.
pub fn solve_network(inst: &Instance) -> Result<LaurentPoly, NetworkError> {
    if inst.shadow().is_degenerate() {
        return Ok(inst.apex_value());
    }
    NetworkInstance::new(inst)?.solve_plain()
}

/// `T = |Mbar|` on the south rows, with the tails absorbed into the chips.
pub fn solve_network_modified(inst: &Instance) -> Result<LaurentPoly, NetworkError> {
    if inst.shadow().is_degenerate() {
        return Ok(inst.apex_value());
    }
    NetworkInstance::new(inst)?.solve_modified()
}

/// Sum of modified path weights between the ends of every pair of rows,
/// by walking the oriented closure. Comparable with the network matrix.
pub fn row_path_sums(gbar: &OpenFaceGraph, s: &SteppedSurface) -> BTreeMap<(i32, i32), LaurentPoly> {
    let n = gbar.vertices().len();
    let mut has_left = vec![false; n];
    let mut has_right = vec![false; n];
    let mut out: Vec<Vec<(usize, LaurentPoly)>> = vec![Vec::new(); n];
    for e in gbar.edges() {
        if e.class != EdgeClass::Vertical {
            has_left[e.head] = true;
            has_right[e.tail] = true;
        }
        out[e.tail].push((e.head, modified_edge_weight(gbar, s, e.id)));
    }
    // Walk in reverse topological order: sums[v] maps end rows to weights.
    let order = topological(&out);
    let mut sums: Vec<BTreeMap<i32, LaurentPoly>> = vec![BTreeMap::new(); n];
    for &v in order.iter().rev() {
        let mut acc: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        if !has_right[v] {
            acc.insert(gbar.vertex(v).row, LaurentPoly::one());
        }
        for (w, x) in &out[v] {
            for (row, y) in &sums[*w] {
                let slot = acc.entry(*row).or_insert_with(LaurentPoly::zero);
                *slot = &*slot + &(x * y);
            }
        }
        sums[v] = acc;
    }
    let mut result = BTreeMap::new();
    for v in gbar.vertices().iter().filter(|v| !has_left[v.id]) {
        for (row, x) in &sums[v.id] {
            result.insert((v.row, *row), x.clone());
        }
    }
    result
}

fn topological(out: &[Vec<(usize, LaurentPoly)>]) -> Vec<usize> {
    let n = out.len();
    let mut indegree = vec![0; n];
    for edges in out {
        for (w, _) in edges {
            indegree[*w] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = stack.pop() {
        order.push(v);
        for (w, _) in &out[v] {
            indegree[*w] -= 1;
            if indegree[*w] == 0 {
                stack.push(*w);
            }
        }
    }
    order
}

/// A 2x2 matrix of fractions, enough for the local flatness identity.
#[derive(Clone, Debug)]
struct Frac {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Frac {
    fn poly(p: LaurentPoly) -> Self {
        Frac { num: p, den: LaurentPoly::one() }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    fn same(&self, o: &Frac) -> bool {
        (&self.num * &o.den).same_value(&(&o.num * &self.den))
    }
}

type Mat2 = [[Frac; 2]; 2];

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Checks `U'bar_{k+1}(t_l,t_c,t_u) Vbar_k(t_d,t_c,t_r) = V'bar_k(t_d,t_l,t_c') Ubar_{k+1}(t_c',t_r,t_u)`
/// on rows `k, k+1` around the face `c = (i,j)` of height `k+1`, for the
/// given new value `t_c'` written as `num / den`.
pub fn flatness_check(i: i32, j: i32, k: i32, tc_new: (&LaurentPoly, &LaurentPoly)) -> Result<(), NetworkError> {
    let t = |a: i32, b: i32| Frac::poly(LaurentPoly::var(Var::t(a, b)));
    let tail = |v: Var| LaurentPoly::var(v);
    let (tl, tc, tr, tu, td) = (t(i - 1, j), t(i, j), t(i + 1, j), t(i, j + 1), t(i, j - 1));
    let tc2 = Frac { num: tc_new.0.clone(), den: tc_new.1.clone() };
    let inv = |x: &Frac| Frac { num: x.den.clone(), den: x.num.clone() };
    let one = Frac::poly(LaurentPoly::one());
    let zero = Frac::poly(LaurentPoly::zero());
    // Tails at the faces, with their heights before and after the move.
    let p_u = Frac::poly(tail(Var::tail(i, j + 1 - k - 1)));
    let pbar_d = Frac::poly(tail(Var::tail(i, j - 1 + k + 2)));
    let p_c2 = Frac::poly(tail(Var::tail(i, j - (k - 1) - 1)));
    let pbar_c2 = Frac::poly(tail(Var::tail(i, j + (k - 1) + 2)));

    // U'(ta,tb,td) = [[1,0],[td/tb, p_d ta/tb]]
    let u_prime = [[one.clone(), zero.clone()], [tu.mul(&inv(&tc)), p_u.mul(&tl).mul(&inv(&tc))]];
    // Vbar(ta,tc,td) = pbar_a^-1 [[pbar_a tc/td, pbar_a ta/td],[0,1]]
    let v_bar = [[tc.mul(&inv(&tr)), td.mul(&inv(&tr))], [zero.clone(), inv(&pbar_d)]];
    // V'(tb,tc,td) = [[p_d tc/td, tb/td],[0,1]]
    let v_prime = [[p_c2.mul(&tl).mul(&inv(&tc2)), td.mul(&inv(&tc2))], [zero.clone(), one.clone()]];
    // Ubar(ta,tb,tc) = pbar_a^-1 [[1,0],[pbar_a tc/tb, pbar_a ta/tb]]
    let u_bar = [[inv(&pbar_c2), zero], [tu.mul(&inv(&tr)), tc2.mul(&inv(&tr))]];

    let lhs = mat_mul(&u_prime, &v_bar);
    let rhs = mat_mul(&v_prime, &u_bar);
    for (row, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        for col in 0..2 {
            let (l, r) = (normalized(&l[col]), normalized(&r[col]));
            if !l.same(&r) {
                return Err(NetworkError::FlatnessViolated { row, col });
            }
        }
    }
    Ok(())
}

fn normalized(f: &Frac) -> Frac {
    Frac { num: f.num.normalize_tails(), den: f.den.normalize_tails() }
}

/// Whether a polynomial involves coefficient variables at all.
pub fn is_coefficient_free(p: &LaurentPoly) -> bool {
    !p.vars().iter().any(|v| matches!(v.kind, VarKind::C | VarKind::Tail))
}
