use std::cmp::Ordering;
use std::fmt;

/// Variable families. The derived order is the canonical order of kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// Initial value `t[i,j]` on the stepped surface.
    T,
    /// Principal coefficient `c[i,j]`.
    C,
    /// Column tail `tau[i,a]`, the formal product of `c[i,α]` over `α ≥ a`.
    Tail,
    SpeyerA,
    SpeyerB,
    SpeyerC,
    SpeyerD,
    /// Row weight `lambda[i]` of the lambda-determinant scheme.
    Lambda,
    /// Column weight `mu[j]` of the lambda-determinant scheme.
    Mu,
    /// Pentagram corner variable `p[l]`.
    P,
    /// Pentagram corner variable `q[l]`.
    Q,
}

impl VarKind {
    pub fn name(self) -> &'static str {
        match self {
            VarKind::T => "t",
            VarKind::C => "c",
            VarKind::Tail => "tau",
            VarKind::SpeyerA => "A",
            VarKind::SpeyerB => "B",
            VarKind::SpeyerC => "C",
            VarKind::SpeyerD => "D",
            VarKind::Lambda => "lambda",
            VarKind::Mu => "mu",
            VarKind::P => "p",
            VarKind::Q => "q",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "t" => VarKind::T,
            "c" => VarKind::C,
            "tau" => VarKind::Tail,
            "A" => VarKind::SpeyerA,
            "B" => VarKind::SpeyerB,
            "C" => VarKind::SpeyerC,
            "D" => VarKind::SpeyerD,
            "lambda" => VarKind::Lambda,
            "mu" => VarKind::Mu,
            "p" => VarKind::P,
            "q" => VarKind::Q,
            _ => return None,
        })
    }

    /// Kinds indexed by a single integer; their second index is always 0.
    pub fn is_single_index(self) -> bool {
        matches!(self, VarKind::Lambda | VarKind::Mu | VarKind::P | VarKind::Q)
    }
}

/// A variable: a kind plus its lattice site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub kind: VarKind,
    pub i: i32,
    pub j: i32,
}

impl Var {
    pub const fn new(kind: VarKind, i: i32, j: i32) -> Self {
        Var { kind, i, j }
    }

    pub const fn t(i: i32, j: i32) -> Self {
        Var::new(VarKind::T, i, j)
    }

    pub const fn c(i: i32, j: i32) -> Self {
        Var::new(VarKind::C, i, j)
    }

    pub const fn tail(i: i32, a: i32) -> Self {
        Var::new(VarKind::Tail, i, a)
    }

    pub const fn single(kind: VarKind, l: i32) -> Self {
        Var::new(kind, l, 0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_single_index() {
            write!(f, "{}[{}]", self.kind.name(), self.i)
        } else {
            write!(f, "{}[{},{}]", self.kind.name(), self.i, self.j)
        }
    }
}

const OFFSET: i32 = 1 << 13;

impl Var {
    /// Order-preserving 32-bit key: kind, then `i`, then `j`.
    fn pack(self) -> u32 {
        assert!(
            (-OFFSET..OFFSET).contains(&self.i) && (-OFFSET..OFFSET).contains(&self.j),
            "lattice index out of range in {self}"
        );
        ((self.kind as u32) << 28) | (((self.i + OFFSET) as u32) << 14) | (self.j + OFFSET) as u32
    }

    fn unpack(key: u32) -> Var {
        const KINDS: [VarKind; 11] = [
            VarKind::T,
            VarKind::C,
            VarKind::Tail,
            VarKind::SpeyerA,
            VarKind::SpeyerB,
            VarKind::SpeyerC,
            VarKind::SpeyerD,
            VarKind::Lambda,
            VarKind::Mu,
            VarKind::P,
            VarKind::Q,
        ];
        Var {
            kind: KINDS[(key >> 28) as usize],
            i: ((key >> 14) & 0x3fff) as i32 - OFFSET,
            j: (key & 0x3fff) as i32 - OFFSET,
        }
    }
}

/// Sparse exponent vector: strictly increasing variables, no zero exponents.
/// The total degree is cached because the term order compares it first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PowerProduct {
    deg: i32,
    items: Vec<(u32, i32)>,
}

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct::default()
    }

    fn from_items(items: Vec<(u32, i32)>) -> Self {
        PowerProduct { deg: items.iter().map(|p| p.1).sum(), items }
    }

    pub fn var(v: Var, e: i32) -> Self {
        if e == 0 {
            PowerProduct::one()
        } else {
            PowerProduct::from_items(vec![(v.pack(), e)])
        }
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut v: Vec<(u32, i32)> = pairs.into_iter().map(|(var, e)| (var.pack(), e)).collect();
        v.sort_unstable_by_key(|p| p.0);
        let mut out: Vec<(u32, i32)> = Vec::with_capacity(v.len());
        for (key, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == key => last.1 += e,
                _ => out.push((key, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        PowerProduct::from_items(out)
    }

    pub fn is_one(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.items.iter().map(|&(k, e)| (Var::unpack(k), e))
    }

    pub fn exponent(&self, v: Var) -> i32 {
        let key = v.pack();
        self.items
            .binary_search_by_key(&key, |p| p.0)
            .map(|ix| self.items[ix].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.deg as i64
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &PowerProduct) -> PowerProduct {
        self.combine(other, -1)
    }

    pub fn pow(&self, n: i32) -> PowerProduct {
        if n == 0 {
            return PowerProduct::one();
        }
        PowerProduct { deg: self.deg * n, items: self.items.iter().map(|&(v, e)| (v, e * n)).collect() }
    }

    fn combine(&self, other: &PowerProduct, sign: i32) -> PowerProduct {
        let (a, b) = (&self.items, &other.items);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Greater => {
                    out.push((b[y].0, sign * b[y].1));
                    y += 1;
                }
                Ordering::Equal => {
                    let e = a[x].1 + sign * b[y].1;
                    if e != 0 {
                        out.push((a[x].0, e));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend(b[y..].iter().map(|&(k, e)| (k, sign * e)));
        PowerProduct { deg: self.deg + sign * other.deg, items: out }
    }

    /// Componentwise minimum (absent variables count as exponent 0).
    pub fn meet(&self, other: &PowerProduct) -> PowerProduct {
        let (a, b) = (&self.items, &other.items);
        let mut out = Vec::new();
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let (key, e) = match (a.get(x), b.get(y)) {
                (Some(p), Some(q)) if p.0 == q.0 => {
                    x += 1;
                    y += 1;
                    (p.0, p.1.min(q.1))
                }
                (Some(p), Some(q)) if p.0 < q.0 => {
                    x += 1;
                    (p.0, p.1.min(0))
                }
                (Some(p), None) => {
                    x += 1;
                    (p.0, p.1.min(0))
                }
                (_, Some(q)) => {
                    y += 1;
                    (q.0, q.1.min(0))
                }
                (None, None) => unreachable!(),
            };
            if e != 0 {
                out.push((key, e));
            }
        }
        PowerProduct::from_items(out)
    }

    /// True when `self` divides `other` as ordinary (non-negative) monomials.
    pub fn divides(&self, other: &PowerProduct) -> bool {
        other.div(self).items.iter().all(|p| p.1 > 0)
    }

    pub fn has_kind(&self, kind: VarKind) -> bool {
        let lo = (kind as u32) << 28;
        let hi = lo | 0x0fff_ffff;
        self.items.iter().any(|p| (lo..=hi).contains(&p.0))
    }
}

impl Ord for PowerProduct {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// smallest variable where the two differ.
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            let (a, b) = (&self.items, &other.items);
            let n = a.len().min(b.len());
            for ix in 0..n {
                let (p, q) = (a[ix], b[ix]);
                if p == q {
                    continue;
                }
                return match p.0.cmp(&q.0) {
                    Ordering::Less => p.1.cmp(&0),
                    Ordering::Greater => 0.cmp(&q.1),
                    Ordering::Equal => p.1.cmp(&q.1),
                };
            }
            match (a.get(n), b.get(n)) {
                (Some(p), None) => p.1.cmp(&0),
                (None, Some(q)) => 0.cmp(&q.1),
                _ => Ordering::Equal,
            }
        })
    }
}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_preserves_order() {
        let vars = [
            Var::t(-3, 5),
            Var::t(-3, 6),
            Var::t(2, -7),
            Var::c(-100, 0),
            Var::tail(0, 4),
            Var::single(VarKind::Q, 9),
        ];
        for w in vars.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].pack() < w[1].pack());
        }
        for v in vars {
            assert_eq!(Var::unpack(v.pack()), v);
        }
    }

    #[test]
    fn graded_lex() {
        let x = Var::t(0, 0);
        let y = Var::t(0, 1);
        let m = |a: i32, b: i32| PowerProduct::from_pairs([(x, a), (y, b)]);
        assert!(m(1, 0) > m(0, 1));
        assert!(m(0, 2) > m(1, 0));
        assert!(m(-1, 0) < PowerProduct::one());
        assert!(m(1, -1) > m(0, 0));
        assert!(m(0, 1) > m(-1, 2));
    }
}
