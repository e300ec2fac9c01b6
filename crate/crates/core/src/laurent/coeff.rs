//! Arbitrary-precision integers with an allocation-free fast path.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{AddAssign, Mul, Neg, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An integer stored inline while it fits in `i64`.
#[derive(Clone, Debug)]
pub enum Coeff {
    Small(i64),
    Big(BigInt),
}

impl Coeff {
    pub const ZERO: Coeff = Coeff::Small(0);
    pub const ONE: Coeff = Coeff::Small(1);

    fn from_big(b: BigInt) -> Coeff {
        match b.to_i64() {
            Some(v) => Coeff::Small(v),
            None => Coeff::Big(b),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Coeff::Small(v) => BigInt::from(*v),
            Coeff::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Small(1))
    }

    pub fn is_minus_one(&self) -> bool {
        matches!(self, Coeff::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Small(v) => *v < 0,
            Coeff::Big(b) => b.is_negative(),
        }
    }

    /// Quotient and remainder, truncating toward zero.
    pub fn div_rem(&self, other: &Coeff) -> (Coeff, Coeff) {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, other) {
            if let (Some(q), Some(r)) = (a.checked_div(*b), a.checked_rem(*b)) {
                return (Coeff::Small(q), Coeff::Small(r));
            }
        }
        let (q, r) = self.to_bigint().div_rem(&other.to_bigint());
        (Coeff::from_big(q), Coeff::from_big(r))
    }

    pub fn add_mul_assign(&mut self, a: &Coeff, b: &Coeff) {
        *self += &(a * b);
    }
}

impl From<i64> for Coeff {
    fn from(v: i64) -> Self {
        Coeff::Small(v)
    }
}

impl From<i32> for Coeff {
    fn from(v: i32) -> Self {
        Coeff::Small(v as i64)
    }
}

impl From<BigInt> for Coeff {
    fn from(b: BigInt) -> Self {
        Coeff::from_big(b)
    }
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Coeff::Small(a), Coeff::Small(b)) => a == b,
            (Coeff::Big(a), Coeff::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Coeff {}

impl Hash for Coeff {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Coeff::Small(v) => v.hash(state),
            Coeff::Big(b) => b.hash(state),
        }
    }
}

impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Coeff::Small(a), Coeff::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        if let (Coeff::Small(a), Coeff::Small(b)) = (&*self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                *self = Coeff::Small(s);
                return;
            }
        }
        *self = Coeff::from_big(self.to_bigint() + rhs.to_bigint());
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        *self += &-rhs;
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if let Some(p) = a.checked_mul(*b) {
                return Coeff::Small(p);
            }
        }
        Coeff::from_big(self.to_bigint() * rhs.to_bigint())
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Small(v) => match v.checked_neg() {
                Some(n) => Coeff::Small(n),
                None => Coeff::Big(-BigInt::from(*v)),
            },
            Coeff::Big(b) => Coeff::from_big(-b),
        }
    }
}

impl std::iter::Sum<Coeff> for Coeff {
    fn sum<I: Iterator<Item = Coeff>>(iter: I) -> Coeff {
        let mut acc = Coeff::ZERO;
        for c in iter {
            acc += &c;
        }
        acc
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(v) => write!(f, "{v}"),
            Coeff::Big(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for Coeff {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<BigInt>().map(Coeff::from_big)
    }
}

impl Zero for Coeff {
    fn zero() -> Self {
        Coeff::ZERO
    }
    fn is_zero(&self) -> bool {
        Coeff::is_zero(self)
    }
}

impl std::ops::Add for Coeff {
    type Output = Coeff;
    fn add(mut self, rhs: Coeff) -> Coeff {
        self += &rhs;
        self
    }
}

impl One for Coeff {
    fn one() -> Self {
        Coeff::ONE
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}
