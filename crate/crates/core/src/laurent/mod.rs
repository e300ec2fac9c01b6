//! Exact sparse Laurent polynomials with integer coefficients.
//!
//! Variables are the initial values `t`, the principal coefficients `c`, the
//! column tails `tau` and the symbols of the specialization schemes. Tails are
//! kept in a normal form where each column uses one base index, so any ratio
//! of tails in a column collapses to a finite product of `c` variables.

mod coeff;
mod text;
mod var;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use rustc_hash::FxHashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use thiserror::Error;

pub use coeff::Coeff;
pub use var::{PowerProduct, Var, VarKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("division is not exact (remainder term {0})")]
    NotDivisible(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("tail generator survives in {0}")]
    ResidualTail(String),
    #[error("no coefficient image for c[{0},{1}]")]
    MissingScheme(i32, i32),
    #[error("negative coefficient in a tropical evaluation")]
    NegativeCoefficient,
    #[error("tropical evaluation needs a t-free polynomial")]
    NotTFree,
    #[error("tropical evaluation of the zero polynomial")]
    ZeroPolynomial,
    #[error("negative power of a polynomial with {0} terms")]
    NotInvertible(usize),
    #[error("cannot parse polynomial text: {0}")]
    Parse(String),
}

/// One term: a nonzero integer times a power product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Coeff,
    pub exps: PowerProduct,
}

impl Monomial {
    pub fn new(coeff: impl Into<Coeff>, exps: PowerProduct) -> Self {
        Monomial { coeff: coeff.into(), exps }
    }

    pub fn unit(exps: PowerProduct) -> Self {
        Monomial::new(1, exps)
    }

    pub fn var(v: Var, e: i32) -> Self {
        Monomial::unit(PowerProduct::var(v, e))
    }
}

/// Hash accumulator for like terms; sorted once at the end.
#[derive(Default)]
struct Accumulator(FxHashMap<PowerProduct, Coeff>);

impl Accumulator {
    fn with_capacity(n: usize) -> Self {
        Accumulator(FxHashMap::with_capacity_and_hasher(n, Default::default()))
    }

    fn add(&mut self, exps: PowerProduct, c: &Coeff) {
        *self.0.entry(exps).or_insert(Coeff::ZERO) += c;
    }

    fn finish(self) -> LaurentPoly {
        let mut terms: Vec<Monomial> = self
            .0
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Monomial { coeff, exps })
            .collect();
        terms.sort_unstable_by(|a, b| a.exps.cmp(&b.exps));
        let p = LaurentPoly { terms };
        if p.has_tails() {
            p.normalize_tails()
        } else {
            p
        }
    }
}

/// A Laurent polynomial: terms strictly increasing in graded-lex order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: Vec<Monomial>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    pub fn constant(n: impl Into<Coeff>) -> Self {
        LaurentPoly::from_monomial(Monomial::new(n, PowerProduct::one()))
    }

    pub fn var(v: Var) -> Self {
        LaurentPoly::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        LaurentPoly::from_monomial(Monomial::var(v, e))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        LaurentPoly::from_terms([m])
    }

    pub fn from_pp(pp: PowerProduct) -> Self {
        LaurentPoly::from_monomial(Monomial::unit(pp))
    }

    /// Canonicalizes arbitrary terms: merges like terms, drops zeros,
    /// sorts, and puts tails in normal form.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut acc = Accumulator::default();
        for m in terms {
            acc.add(m.exps, &m.coeff);
        }
        acc.finish()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].exps.is_one() && self.terms[0].coeff.is_one()
    }

    /// The single term, if this is a monomial.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.as_slice() {
            [m] => Some(m),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.last()
    }

    /// Multiplication by one term; order is preserved, so no re-sorting.
    pub fn scale(&self, m: &Monomial) -> LaurentPoly {
        if m.coeff.is_zero() {
            return LaurentPoly::zero();
        }
        let p = LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Monomial { coeff: &t.coeff * &m.coeff, exps: t.exps.mul(&m.exps) })
                .collect(),
        };
        if p.has_tails() {
            p.normalize_tails()
        } else {
            p
        }
    }

    /// Integer power; negative powers need a unit monomial.
    pub fn pow(&self, n: i32) -> Result<LaurentPoly, LaurentError> {
        if n < 0 {
            let m = self
                .as_monomial()
                .filter(|m| m.coeff.is_one() || m.coeff.is_minus_one())
                .ok_or(LaurentError::NotInvertible(self.len()))?;
            let coeff = if n % 2 == 0 { Coeff::ONE } else { m.coeff.clone() };
            return Ok(LaurentPoly::from_monomial(Monomial::new(coeff, m.exps.pow(n))));
        }
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        Ok(out)
    }

    /// Inverse of a unit monomial.
    pub fn inverse(&self) -> Result<LaurentPoly, LaurentError> {
        self.pow(-1)
    }

    /// Exact quotient.
    ///
    /// Both sides are shifted to honest polynomials, where graded-lex is a
    /// well order, and divided by leading-term cancellation. The remainder
    /// is never materialized: its terms stream out of a heap over the
    /// products of quotient and divisor terms.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if let Some(m) = den.as_monomial() {
            let mut out = Vec::with_capacity(self.len());
            for t in &self.terms {
                let (q, r) = t.coeff.div_rem(&m.coeff);
                if !r.is_zero() {
                    return Err(LaurentError::NotDivisible(text::render_term(t)));
                }
                out.push(Monomial::new(q, t.exps.div(&m.exps)));
            }
            return Ok(LaurentPoly::from_terms(out));
        }
        let num_shift = self.min_exponents();
        let den_shift = den.min_exponents();
        let num: Vec<Monomial> = self
            .terms
            .iter()
            .rev()
            .map(|t| Monomial { coeff: t.coeff.clone(), exps: t.exps.div(&num_shift) })
            .collect();
        let div: Vec<Monomial> = den
            .terms
            .iter()
            .rev()
            .map(|t| Monomial { coeff: t.coeff.clone(), exps: t.exps.div(&den_shift) })
            .collect();
        let lead = &div[0];
        let mut quot: Vec<Monomial> = Vec::new();
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
        let mut next_num = 0;
        loop {
            let top = match (num.get(next_num), heap.peek()) {
                (None, None) => break,
                (Some(n), None) => n.exps.clone(),
                (None, Some(h)) => h.exps.clone(),
                (Some(n), Some(h)) => std::cmp::max(&n.exps, &h.exps).clone(),
            };
            let mut c = Coeff::ZERO;
            if num.get(next_num).is_some_and(|n| n.exps == top) {
                c += &num[next_num].coeff;
                next_num += 1;
            }
            while heap.peek().is_some_and(|h| h.exps == top) {
                let h = heap.pop().expect("peeked");
                c -= &(&quot[h.q].coeff * &div[h.d].coeff);
                if h.d + 1 < div.len() {
                    heap.push(HeapEntry { exps: quot[h.q].exps.mul(&div[h.d + 1].exps), q: h.q, d: h.d + 1 });
                }
            }
            if c.is_zero() {
                continue;
            }
            let (qc, r) = c.div_rem(&lead.coeff);
            if !r.is_zero() || !lead.exps.divides(&top) {
                return Err(LaurentError::NotDivisible(text::render_term(&Monomial::new(c, top))));
            }
            let step = Monomial::new(qc, top.div(&lead.exps));
            if div.len() > 1 {
                heap.push(HeapEntry { exps: step.exps.mul(&div[1].exps), q: quot.len(), d: 1 });
            }
            quot.push(step);
        }
        let shift = num_shift.div(&den_shift);
        quot.reverse();
        Ok(LaurentPoly { terms: quot }.scale(&Monomial::unit(shift)))
    }

    /// Componentwise minimum of exponents over the support.
    pub fn min_exponents(&self) -> PowerProduct {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return PowerProduct::one();
        };
        it.fold(first.exps.clone(), |acc, t| acc.meet(&t.exps))
    }

    /// Rewrites every tail of column `i` to the largest base index present
    /// in that column, using `tau[i,a] = c[i,a] * tau[i,a+1]`.
    pub fn normalize_tails(&self) -> LaurentPoly {
        let mut top: BTreeMap<i32, i32> = BTreeMap::new();
        let mut ragged = false;
        for t in &self.terms {
            for (v, _) in t.exps.iter().filter(|p| p.0.kind == VarKind::Tail) {
                let e = top.entry(v.i).or_insert(v.j);
                ragged |= *e != v.j;
                *e = (*e).max(v.j);
            }
        }
        if !ragged {
            return self.clone();
        }
        let mut acc = Accumulator::with_capacity(self.len());
        for t in &self.terms {
            let mut pairs = Vec::new();
            for (v, e) in t.exps.iter() {
                if v.kind == VarKind::Tail {
                    let a_max = top[&v.i];
                    pairs.extend((v.j..a_max).map(|a| (Var::c(v.i, a), e)));
                    pairs.push((Var::tail(v.i, a_max), e));
                } else {
                    pairs.push((v, e));
                }
            }
            acc.add(PowerProduct::from_pairs(pairs), &t.coeff);
        }
        let mut terms: Vec<Monomial> = acc
            .0
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Monomial { coeff, exps })
            .collect();
        terms.sort_unstable_by(|a, b| a.exps.cmp(&b.exps));
        LaurentPoly { terms }
    }

    pub fn has_tails(&self) -> bool {
        self.terms.iter().any(|t| t.exps.has_kind(VarKind::Tail))
    }

    pub fn assert_tail_free(self) -> Result<LaurentPoly, LaurentError> {
        if self.has_tails() {
            Err(LaurentError::ResidualTail(self.to_string()))
        } else {
            Ok(self)
        }
    }

    /// Value equality that sees through tail base choices.
    pub fn same_value(&self, other: &LaurentPoly) -> bool {
        if self == other {
            return true;
        }
        (self - other).is_zero()
    }

    /// Replaces each variable for which `f` returns an image by that unit
    /// monomial image (raised to the exponent); other variables stay.
    pub fn substitute(&self, f: impl Fn(Var) -> Option<PowerProduct>) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|t| {
            let mut exps = PowerProduct::one();
            for (v, e) in t.exps.iter() {
                let image = f(v).unwrap_or_else(|| PowerProduct::var(v, 1));
                exps = exps.mul(&image.pow(e));
            }
            Monomial::new(t.coeff.clone(), exps)
        }))
    }

    /// Replaces every `c[i,j]` by the scheme image.
    pub fn substitute_c(
        &self,
        scheme: impl Fn(i32, i32) -> Option<PowerProduct>,
    ) -> Result<LaurentPoly, LaurentError> {
        if self.has_tails() {
            return Err(LaurentError::ResidualTail(self.to_string()));
        }
        for v in self.vars().into_iter().filter(|v| v.kind == VarKind::C) {
            if scheme(v.i, v.j).is_none() {
                return Err(LaurentError::MissingScheme(v.i, v.j));
            }
        }
        Ok(self.substitute(|v| if v.kind == VarKind::C { scheme(v.i, v.j) } else { None }))
    }

    /// Sets every variable of the given kinds to 1.
    pub fn set_one(&self, kinds: &[VarKind]) -> LaurentPoly {
        self.substitute(|v| kinds.contains(&v.kind).then(PowerProduct::one))
    }

    pub fn eval_t_one(&self) -> LaurentPoly {
        self.set_one(&[VarKind::T])
    }

    /// Tropical (min) evaluation of a subtraction-free, t-free polynomial.
    pub fn tropical_min_eval(&self) -> Result<Monomial, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        if self.terms.iter().any(|t| t.coeff.is_negative()) {
            return Err(LaurentError::NegativeCoefficient);
        }
        if self.terms.iter().any(|t| t.exps.has_kind(VarKind::T)) {
            return Err(LaurentError::NotTFree);
        }
        Ok(Monomial::unit(self.min_exponents()))
    }

    /// The integer obtained by setting every variable to 1.
    pub fn eval_all_one(&self) -> BigInt {
        self.terms.iter().map(|t| t.coeff.clone()).sum::<Coeff>().to_bigint()
    }

    /// Renames variables; used for the reflection symmetry.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|t| {
            Monomial::new(t.coeff.clone(), PowerProduct::from_pairs(t.exps.iter().map(|(v, e)| (f(v), e))))
        }))
    }

    /// Every variable occurring with nonzero exponent.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|t| t.exps.iter().map(|p| p.0)).collect()
    }

    fn merge(&self, other: &LaurentPoly, negate: bool) -> LaurentPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        let flip = |c: &Coeff| if negate { -c } else { c.clone() };
        while x < a.len() && y < b.len() {
            match a[x].exps.cmp(&b[y].exps) {
                Ordering::Less => {
                    terms.push(a[x].clone());
                    x += 1;
                }
                Ordering::Greater => {
                    terms.push(Monomial { coeff: flip(&b[y].coeff), exps: b[y].exps.clone() });
                    y += 1;
                }
                Ordering::Equal => {
                    let mut c = a[x].coeff.clone();
                    c += &flip(&b[y].coeff);
                    if !c.is_zero() {
                        terms.push(Monomial { coeff: c, exps: a[x].exps.clone() });
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        terms.extend_from_slice(&a[x..]);
        terms.extend(b[y..].iter().map(|t| Monomial { coeff: flip(&t.coeff), exps: t.exps.clone() }));
        let p = LaurentPoly { terms };
        if self.has_tails() || other.has_tails() {
            p.normalize_tails()
        } else {
            p
        }
    }
}

/// A pending product `quot[q] * div[d]` in the division heap.
struct HeapEntry {
    exps: PowerProduct,
    q: usize,
    d: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.exps == other.exps
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, true)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if let Some(m) = rhs.as_monomial() {
            return self.scale(m);
        }
        if let Some(m) = self.as_monomial() {
            return rhs.scale(m);
        }
        let mut acc = Accumulator::with_capacity(self.len() * rhs.len());
        for a in &self.terms {
            for b in &rhs.terms {
                acc.add(a.exps.mul(&b.exps), &(&a.coeff * &b.coeff));
            }
        }
        acc.finish()
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|t| Monomial::new(-&t.coeff, t.exps.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> LaurentPoly {
        LaurentPoly::from_terms(iter.flat_map(|p| p.terms))
    }
}

impl std::iter::Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> LaurentPoly {
        iter.fold(LaurentPoly::one(), |acc, p| &acc * &p)
    }
}

/// Product of distinct variables, e.g. a segment of one column.
pub fn var_product(vars: impl IntoIterator<Item = Var>) -> LaurentPoly {
    LaurentPoly::from_pp(PowerProduct::from_pairs(vars.into_iter().map(|v| (v, 1))))
}
