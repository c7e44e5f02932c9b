//! Exact rational arithmetic and the enumeration of rationals in the unit interval.
//!
//! Every numeric value handled by the crate is a [`Rational`]. The enumeration
//! [`eta`] lists the reduced fractions `p/q` with `0 <= p <= q` by denominator,
//! then numerator:
//!
//! ```text
//! 0/1, 1/1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("rational {0} lies outside [0, 1]")]
    OutOfUnitInterval(Rational),
    #[error("enumeration index of {0} does not fit in 64 bits")]
    IndexOverflow(Rational),
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// An exact fraction, always stored reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `numer / denom`. Panics when `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self::checked_new(numer, denom).expect("zero denominator")
    }

    pub fn checked_new(
        numer: impl Into<BigInt>,
        denom: impl Into<BigInt>,
    ) -> Result<Self, NumericsError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    /// `2^-exp`.
    pub fn pow2_neg(exp: u64) -> Self {
        Self(BigRational::new(BigInt::one(), BigInt::one() << exp))
    }

    /// `2^exp`.
    pub fn pow2(exp: u64) -> Self {
        Self::integer(BigInt::one() << exp)
    }

    /// `numer * 2^-exp`.
    pub fn dyadic(numer: impl Into<BigInt>, exp: u64) -> Self {
        let numer = numer.into();
        if numer.is_zero() {
            return Self::zero();
        }
        // Cancelling trailing zeros reduces the fraction without a gcd.
        let shift = numer.trailing_zeros().unwrap_or(0).min(exp);
        Self(BigRational::new_raw(numer >> shift, BigInt::one() << (exp - shift)))
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Self(self.0.recip())
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Is the denominator a power of two?
    pub fn is_dyadic(&self) -> bool {
        let d = self.denom();
        (d & (d - BigInt::one())).is_zero()
    }

    /// The exponent `e` with denominator `2^e`, for dyadic values.
    pub fn dyadic_exponent(&self) -> Option<u64> {
        self.is_dyadic().then(|| self.denom().bits() - 1)
    }

    /// Least `s >= 0` with `|self| <= 2^s`.
    pub fn ceil_log2_abs(&self) -> u64 {
        let a = self.abs();
        if a <= Self::one() {
            return 0;
        }
        // ceil(a) bounds a, and 2^bits(ceil(a) - 1) >= ceil(a).
        let c = -(-a.0).floor().to_integer();
        (c - BigInt::one()).bits()
    }

    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && *self <= Self::one()
    }

    pub fn min(self, other: Self) -> Self {
        Ord::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        Ord::max(self, other)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

pub fn rat_add(a: &Rational, b: &Rational) -> Rational {
    a + b
}

pub fn rat_cmp(a: &Rational, b: &Rational) -> Ordering {
    // Cross-multiplication; denominators are positive so the sign is preserved.
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // The ordering on BigRational recurses through continued fractions,
        // which is slow and deep for large dyadic denominators.
        if self.denom() == other.denom() {
            return self.numer().cmp(other.numer());
        }
        rat_cmp(self, other)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Self::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = NumericsError;

    /// Accepts `p/q`, integers, and terminating decimals such as `1.2` or `-0.001`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || NumericsError::Parse(s.to_string());
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            return Self::checked_new(p, q);
        }
        if let Some((whole, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let negative = whole.starts_with('-');
            let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
            let mag: BigInt = digits.parse().map_err(|_| err())?;
            let scale = num_traits::pow(BigInt::from(10u8), frac.len());
            let mag = Self::new(mag, scale);
            return Ok(if negative { -mag } else { mag });
        }
        let n: BigInt = t.parse().map_err(|_| err())?;
        Ok(Self::integer(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Position of a fraction in the enumeration of `Q ∩ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalIndex(pub u64);

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `i`-th reduced fraction in `[0, 1]`, ordered by denominator then numerator.
pub fn eta(i: RationalIndex) -> Rational {
    match i.0 {
        0 => return Rational::zero(),
        1 => return Rational::one(),
        _ => {}
    }
    let mut rest = i.0 - 2;
    let mut q: u64 = 2;
    loop {
        let count = totient(q);
        if rest < count {
            let p = (1..q)
                .filter(|p| p.gcd(&q) == 1)
                .nth(rest as usize)
                .expect("totient counts the coprime numerators");
            return Rational::new(p, q);
        }
        rest -= count;
        q += 1;
    }
}

/// Inverse of [`eta`] on `Q ∩ [0, 1]`.
pub fn eta_inverse(q: &Rational) -> Result<RationalIndex, NumericsError> {
    if !q.in_unit_interval() {
        return Err(NumericsError::OutOfUnitInterval(q.clone()));
    }
    let overflow = || NumericsError::IndexOverflow(q.clone());
    let p = q.numer().to_u64().ok_or_else(overflow)?;
    let d = q.denom().to_u64().ok_or_else(overflow)?;
    if d == 1 {
        return Ok(RationalIndex(p));
    }
    let mut index: u64 = 2;
    for d2 in 2..d {
        index = index.checked_add(totient(d2)).ok_or_else(overflow)?;
    }
    let rank = (1..p).filter(|p2| p2.gcd(&d) == 1).count() as u64;
    index.checked_add(rank).map(RationalIndex).ok_or_else(overflow)
}
