//! Other coefficient systems over the fundamental surface.
//!
//! A principal-coefficient solution specializes to any tropical coefficient
//! choice by the separation formula: substitute `c[i,j] -> y[i,j]`, then
//! divide by the tropical value of the same expression at `t = 1`. Three
//! choices are provided (Speyer's octahedron recurrence, the generalized
//! lambda-determinant and the higher pentagram map), plus the trivial one.
//!
//! The pentagram map lives in the universal semifield, so its variables are
//! read from the Y-pattern directly as ratios of specialized solutions.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, Monomial, PowerProduct, Var, VarKind};
use crate::oracle::{Instance, Recurrence};
use crate::surface::{coeff_i, coeff_j, Site};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecializeError {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("specialization is defined over the fundamental surface only")]
    NotFund,
    #[error("pentagram map needs 3 <= kappa <= n-1, got n={n}, kappa={kappa}")]
    InvalidKappa { n: i32, kappa: i32 },
    #[error("no site carries index {index} at step {step} within the search box")]
    SiteNotLocated { index: i32, step: i32 },
    #[error("the two pentagram patterns disagree at {0:?}")]
    InconsistentLabels(Site),
}

/// A coefficient choice: the image `y[i,j]` of every `c[i,j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffScheme {
    /// Every `y[i,j] = 1`.
    Trivial,
    Speyer,
    Lambda,
    Pentagram(Pentagram),
}

impl CoeffScheme {
    pub fn name(&self) -> &'static str {
        match self {
            CoeffScheme::Trivial => "trivial",
            CoeffScheme::Speyer => "speyer",
            CoeffScheme::Lambda => "lambda",
            CoeffScheme::Pentagram(_) => "pentagram",
        }
    }

    /// The monomial `y[i,j]`.
    pub fn y(&self, i: i32, j: i32) -> PowerProduct {
        match self {
            CoeffScheme::Trivial => PowerProduct::one(),
            CoeffScheme::Speyer => speyer_y(i, j),
            CoeffScheme::Lambda => lambda_y(i, j),
            CoeffScheme::Pentagram(p) => PowerProduct::var(p.label(i, j).var(), 1),
        }
    }
}

pub fn speyer_scheme() -> CoeffScheme {
    CoeffScheme::Speyer
}

pub fn lambda_scheme() -> CoeffScheme {
    CoeffScheme::Lambda
}

pub fn pentagram_scheme(n: i32, kappa: i32) -> Result<CoeffScheme, SpecializeError> {
    Ok(CoeffScheme::Pentagram(Pentagram::new(n, kappa)?))
}

fn speyer_var(kind: VarKind, i: i32, j: i32) -> (Var, i32) {
    debug_assert!((i + j).rem_euclid(2) == 0, "Speyer coefficients live on even sites");
    (Var::new(kind, i, j), 1)
}

fn speyer_y(i: i32, j: i32) -> PowerProduct {
    use VarKind::{SpeyerA as A, SpeyerB as B, SpeyerC as C, SpeyerD as D};
    let (num, den) = if (i + j).rem_euclid(2) == 0 {
        ([speyer_var(B, i, j), speyer_var(D, i, j)], [speyer_var(A, i, j), speyer_var(C, i, j)])
    } else {
        ([speyer_var(A, i - 1, j), speyer_var(C, i + 1, j)], [speyer_var(B, i, j - 1), speyer_var(D, i, j + 1)])
    };
    PowerProduct::from_pairs(num).div(&PowerProduct::from_pairs(den))
}

fn lambda_y(i: i32, j: i32) -> PowerProduct {
    let lambda = PowerProduct::var(Var::single(VarKind::Lambda, i), 1);
    let mu = PowerProduct::var(Var::single(VarKind::Mu, j), 1);
    if (i + j).rem_euclid(2) == 0 {
        lambda.div(&mu)
    } else {
        mu.div(&lambda)
    }
}

/// Substitutes `c -> y` and divides by the tropical value at `t = 1`.
pub fn separation_eval(t: &LaurentPoly, scheme: &CoeffScheme) -> Result<LaurentPoly, SpecializeError> {
    let numerator = t.substitute_c(|i, j| Some(scheme.y(i, j)))?;
    let denominator = tropical_denominator(&numerator)?;
    Ok(numerator.scale(&Monomial::unit(PowerProduct::one().div(&denominator))))
}

/// The tropical sum of the specialized polynomial at `t = 1`.
pub fn tropical_denominator(specialized: &LaurentPoly) -> Result<PowerProduct, SpecializeError> {
    Ok(specialized.eval_t_one().tropical_min_eval()?.exps)
}

/// Memoized specialized values `T^{(y)}[i,j,k]` over the fundamental surface.
pub struct Specializer<'s> {
    scheme: &'s CoeffScheme,
    recurrence: Recurrence<'static>,
    cache: BTreeMap<(i32, i32, i32), LaurentPoly>,
}

static FUND: std::sync::OnceLock<crate::surface::SteppedSurface> = std::sync::OnceLock::new();

impl<'s> Specializer<'s> {
    pub fn new(scheme: &'s CoeffScheme) -> Self {
        let fund = FUND.get_or_init(crate::surface::SteppedSurface::fund);
        Specializer { scheme, recurrence: Recurrence::new(fund), cache: BTreeMap::new() }
    }

    pub fn value(&mut self, i: i32, j: i32, k: i32) -> Result<LaurentPoly, SpecializeError> {
        if let Some(v) = self.cache.get(&(i, j, k)) {
            return Ok(v.clone());
        }
        let principal = self.recurrence.value(i, j, k)?;
        let v = separation_eval(&principal, self.scheme)?;
        self.cache.insert((i, j, k), v.clone());
        Ok(v)
    }
}

/// Specializes the solution of an instance; the surface must be fund.
pub fn specialize_instance(inst: &Instance, t: &LaurentPoly, scheme: &CoeffScheme) -> Result<LaurentPoly, SpecializeError> {
    if !inst.surface().is_fund() {
        return Err(SpecializeError::NotFund);
    }
    separation_eval(t, scheme)
}

/// The right-hand side minus the left-hand side of a scheme's own
/// recurrence centred at `(i,j,k)`, with `i+j+k` even. Zero when the
/// specialized values close under it.
pub fn recurrence_defect(sp: &mut Specializer<'_>, i: i32, j: i32, k: i32) -> Result<LaurentPoly, SpecializeError> {
    assert!((i + j + k).rem_euclid(2) == 0, "recurrence centres have i+j+k even");
    let (h, v) = match sp.scheme {
        CoeffScheme::Speyer => {
            let m = |kind, a, b| LaurentPoly::var(Var::new(kind, a, b));
            (
                &m(VarKind::SpeyerB, i, j + k) * &m(VarKind::SpeyerD, i, j - k),
                &m(VarKind::SpeyerA, i + k, j) * &m(VarKind::SpeyerC, i - k, j),
            )
        }
        CoeffScheme::Lambda => (
            LaurentPoly::var(Var::single(VarKind::Lambda, i)),
            LaurentPoly::var(Var::single(VarKind::Mu, j)),
        ),
        CoeffScheme::Trivial | CoeffScheme::Pentagram(_) => (LaurentPoly::one(), LaurentPoly::one()),
    };
    let lhs = &sp.value(i, j, k - 1)? * &sp.value(i, j, k + 1)?;
    let horizontal = &h * &(&sp.value(i - 1, j, k)? * &sp.value(i + 1, j, k)?);
    let vertical = &v * &(&sp.value(i, j - 1, k)? * &sp.value(i, j + 1, k)?);
    Ok(&(&horizontal + &vertical) - &lhs)
}

/// `p` or `q` with an index in `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    P(i32),
    Q(i32),
}

impl Label {
    pub fn index(self) -> i32 {
        match self {
            Label::P(l) | Label::Q(l) => l,
        }
    }

    pub fn var(self) -> Var {
        match self {
            Label::P(l) => Var::single(VarKind::P, l),
            Label::Q(l) => Var::single(VarKind::Q, l),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::P(l) => write!(f, "p[{l}]"),
            Label::Q(l) => write!(f, "q[{l}]"),
        }
    }
}

/// The labelling of the octahedron quiver by the generalized Glick quiver
/// of the higher pentagram map with parameters `(n, kappa)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pentagram {
    n: i32,
    kappa: i32,
}

impl Pentagram {
    pub fn new(n: i32, kappa: i32) -> Result<Self, SpecializeError> {
        if !(3..n).contains(&kappa) {
            return Err(SpecializeError::InvalidKappa { n, kappa });
        }
        Ok(Pentagram { n, kappa })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    /// `(r, r')`: the floor and ceiling of `(kappa-2)/2`.
    pub fn offsets(&self) -> (i32, i32) {
        ((self.kappa - 2) / 2, (self.kappa - 1) / 2)
    }

    fn wrap(&self, l: i32) -> i32 {
        (l - 1).rem_euclid(self.n) + 1
    }

    /// The closed form of the labelling: `p` on even sites, shifted by
    /// `-((kappa-2) i + kappa j) / 2` from `p[n]` at the origin.
    pub fn label(&self, i: i32, j: i32) -> Label {
        let (_, r1) = self.offsets();
        if (i + j).rem_euclid(2) == 0 {
            Label::P(self.wrap(self.n - ((self.kappa - 2) * i + self.kappa * j) / 2))
        } else {
            match self.label(i - 1, j) {
                Label::P(l) => Label::Q(self.wrap(l - r1)),
                Label::Q(_) => unreachable!("left of an odd site is even"),
            }
        }
    }

    /// Neighbours of a labelled site as dictated by the two local patterns,
    /// in the order left, right, down, up.
    pub fn pattern(&self, at: Label) -> [Label; 4] {
        let (r, r1) = self.offsets();
        let w = |l| self.wrap(l);
        match at {
            Label::P(l) => [Label::Q(w(l + r)), Label::Q(w(l - r1)), Label::Q(w(l + r + 1)), Label::Q(w(l - r1 - 1))],
            Label::Q(l) => [Label::P(w(l + r1)), Label::P(w(l - r)), Label::P(w(l + r1 + 1)), Label::P(w(l - r - 1))],
        }
    }

    /// Labels a box of the given radius by propagating the local patterns
    /// outward from `p[n]` at the origin. Neighbours are visited in
    /// `order`, a permutation of left, right, down, up; every overlap is
    /// checked.
    pub fn propagate(&self, radius: i32, order: [usize; 4]) -> Result<BTreeMap<Site, Label>, SpecializeError> {
        const STEPS: [Site; 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
        let mut labels = BTreeMap::from([((0, 0), Label::P(self.n))]);
        let mut queue = VecDeque::from([(0, 0)]);
        while let Some((i, j)) = queue.pop_front() {
            let around = self.pattern(labels[&(i, j)]);
            for d in order {
                let site = (i + STEPS[d].0, j + STEPS[d].1);
                if site.0.abs() > radius || site.1.abs() > radius {
                    continue;
                }
                match labels.get(&site) {
                    Some(&l) if l != around[d] => return Err(SpecializeError::InconsistentLabels(site)),
                    Some(_) => {}
                    None => {
                        labels.insert(site, around[d]);
                        queue.push_back(site);
                    }
                }
            }
        }
        Ok(labels)
    }

    /// The site nearest the origin where the step-`k` variable with index
    /// `index` sits at a local maximum, i.e. `i+j+k` odd.
    fn locate(&self, index: i32, k: i32) -> Result<Site, SpecializeError> {
        let radius = self.n + self.kappa;
        let mut best: Option<(i32, Site)> = None;
        for i in -radius..=radius {
            for j in -radius..=radius {
                if (i + j + k).rem_euclid(2) == 1 && self.label(i, j).index() == index {
                    let key = (i.abs() + j.abs(), (i, j));
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        best.map(|b| b.1).ok_or(SpecializeError::SiteNotLocated { index, step: k })
    }

    /// `q^{(k)}_l`: the coefficient at the local maximum of height `k`
    /// labelled `l`, read from the principal-coefficient solution at
    /// `t = 1`, `c = pi`.
    pub fn q(&self, index: i32, k: i32) -> Result<Ratio, SpecializeError> {
        let (i, j) = self.locate(index, k)?;
        let mut rec = Recurrence::new(FUND.get_or_init(crate::surface::SteppedSurface::fund));
        let scheme = CoeffScheme::Pentagram(*self);
        let mut at = |a: i32, b: i32| -> Result<LaurentPoly, SpecializeError> {
            let v = rec.value(a, b, k - 1)?.eval_t_one();
            Ok(v.substitute_c(|x, y| Some(scheme.y(x, y)))?)
        };
        let num = &coeff_i(i, j, k - 1) * &(&at(i, j - 1)? * &at(i, j + 1)?);
        let den = &coeff_j(i, j, k - 1) * &(&at(i - 1, j)? * &at(i + 1, j)?);
        let sub = |x: LaurentPoly| x.substitute_c(|a, b| Some(scheme.y(a, b)));
        Ok(Ratio::new(sub(num)?, sub(den)?))
    }

    /// `p^{(k)}_l = 1 / q^{(k+1)}_l`.
    pub fn p(&self, index: i32, k: i32) -> Result<Ratio, SpecializeError> {
        Ok(self.q(index, k + 1)?.recip())
    }

    /// One step of the map written directly in the initial variables:
    /// `p'_l = q_l (1+p_{l-r})(1+p_{l+r'}) / ((1+1/p_{l-r-1})(1+1/p_{l+r'+1}))`.
    pub fn step_p(&self, index: i32) -> Ratio {
        let (r, r1) = self.offsets();
        let p = |l: i32| LaurentPoly::var(Var::single(VarKind::P, self.wrap(l)));
        let one = LaurentPoly::one;
        let q = LaurentPoly::var(Var::single(VarKind::Q, self.wrap(index)));
        let num = &(&q * &(&one() + &p(index - r))) * &(&one() + &p(index + r1));
        let num = &num * &(&p(index - r - 1) * &p(index + r1 + 1));
        let den = &(&one() + &p(index - r - 1)) * &(&one() + &p(index + r1 + 1));
        Ratio::new(num, den)
    }
}

/// A quotient of subtraction-free polynomials, compared by cross
/// multiplication.
#[derive(Clone, Debug)]
pub struct Ratio {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl Ratio {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        Ratio { num, den }
    }

    pub fn recip(self) -> Self {
        Ratio { num: self.den, den: self.num }
    }

    pub fn same_value(&self, other: &Ratio) -> bool {
        (&self.num * &other.den).same_value(&(&other.num * &self.den))
    }

    /// The value with every variable set to 1, as a reduced fraction.
    pub fn at_all_ones(&self) -> (num_bigint::BigInt, num_bigint::BigInt) {
        use num_integer::Integer;
        let (a, b) = (self.num.eval_all_one(), self.den.eval_all_one());
        let g = a.gcd(&b);
        (a / &g, b / g)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &LaurentPoly| if p.len() > 1 { format!("({p})") } else { p.to_string() };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", wrap(&self.num), wrap(&self.den))
        }
    }
}
