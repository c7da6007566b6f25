//! Arbitrary-precision rational scalars.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactNumber(BigRational);

impl ExactNumber {
    pub fn zero() -> Self {
        ExactNumber(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactNumber(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactNumber(BigRational::from_integer(n.into()))
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn from_ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Argument("zero denominator".into()));
        }
        Ok(ExactNumber(BigRational::new(numer.into(), denom)))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        ExactNumber(r)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big_rational(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// The integer value, if the denominator is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, exp: u32) -> Self {
        ExactNumber(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn abs(&self) -> Self {
        ExactNumber(self.0.abs())
    }

    /// Exact quotient; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &ExactNumber) -> Option<ExactNumber> {
        (!rhs.is_zero()).then(|| ExactNumber(&self.0 / &rhs.0))
    }

    /// True when both values are integers and `rhs` divides `self`.
    pub fn is_divisible_by(&self, rhs: &ExactNumber) -> bool {
        match (self.to_integer(), rhs.to_integer()) {
            (Some(a), Some(b)) if !b.is_zero() => a.is_multiple_of(&b),
            _ => false,
        }
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> ExactNumber {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    ExactNumber::from_integer(acc)
}

impl fmt::Display for ExactNumber {
    /// Integers print as decimal, everything else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactNumber {
    type Err = Error;

    /// Accepts `123`, `-4`, `3/4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("not an integer or rational: {s:?}"));
        match s.split_once('/') {
            None => s
                .parse::<BigInt>()
                .map(ExactNumber::from_integer)
                .map_err(|_| bad()),
            Some((p, q)) => {
                let p = p.parse::<BigInt>().map_err(|_| bad())?;
                let q = q.parse::<BigInt>().map_err(|_| bad())?;
                if q.is_negative() {
                    return Err(bad());
                }
                ExactNumber::from_ratio(p, q)
            }
        }
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for ExactNumber {
            fn from(v: $t) -> Self {
                ExactNumber::from_integer(v)
            }
        }
    )*};
}
from_int!(i32, i64, i128, u32, u64, u128, usize);

impl From<BigInt> for ExactNumber {
    fn from(v: BigInt) -> Self {
        ExactNumber::from_integer(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<ExactNumber> for ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: ExactNumber) -> ExactNumber {
                ExactNumber(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactNumber> for ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: &'a ExactNumber) -> ExactNumber {
                ExactNumber(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactNumber> for &'a ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: &'a ExactNumber) -> ExactNumber {
                ExactNumber((&self.0).$method(&rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

/// Panics on division by zero, like the integer types. Use
/// [`ExactNumber::checked_div`] when the divisor may be zero.
impl Div<ExactNumber> for ExactNumber {
    type Output = ExactNumber;
    fn div(self, rhs: ExactNumber) -> ExactNumber {
        ExactNumber(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a ExactNumber> for &'a ExactNumber {
    type Output = ExactNumber;
    fn div(self, rhs: &'a ExactNumber) -> ExactNumber {
        ExactNumber(&self.0 / &rhs.0)
    }
}

impl<'a> AddAssign<&'a ExactNumber> for ExactNumber {
    fn add_assign(&mut self, rhs: &'a ExactNumber) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<ExactNumber> for ExactNumber {
    fn add_assign(&mut self, rhs: ExactNumber) {
        self.0 += rhs.0;
    }
}

impl<'a> SubAssign<&'a ExactNumber> for ExactNumber {
    fn sub_assign(&mut self, rhs: &'a ExactNumber) {
        self.0 -= &rhs.0;
    }
}

impl<'a> MulAssign<&'a ExactNumber> for ExactNumber {
    fn mul_assign(&mut self, rhs: &'a ExactNumber) {
        self.0 *= &rhs.0;
    }
}

impl Neg for ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber(-self.0)
    }
}

impl Neg for &ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber(-&self.0)
    }
}

impl Sum for ExactNumber {
    fn sum<I: Iterator<Item = ExactNumber>>(iter: I) -> Self {
        iter.fold(ExactNumber::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactNumber> for ExactNumber {
    fn sum<I: Iterator<Item = &'a ExactNumber>>(iter: I) -> Self {
        iter.fold(ExactNumber::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactNumber {
    fn product<I: Iterator<Item = ExactNumber>>(iter: I) -> Self {
        iter.fold(ExactNumber::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a ExactNumber> for ExactNumber {
    fn product<I: Iterator<Item = &'a ExactNumber>>(iter: I) -> Self {
        iter.fold(ExactNumber::one(), |acc, x| acc * x)
    }
}
