//! Real numbers in one of two representations: exact rationals or
//! outward-rounded float intervals.
//!
//! Arithmetic between an exact and an interval operand promotes the exact
//! one to its tightest enclosing interval. Comparisons are certified: they
//! return `None` whenever an interval overlap makes the answer unknowable.

use crate::interval::{rational_sqrt_lower, rational_sqrt_upper, Interval};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic mode of a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Interval,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Interval => f.write_str("interval"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Interval(Interval),
}

/// Hashable identity of a scalar whose value is known exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKey {
    Rational(BigRational),
    Float(u64),
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Exact(rational(n, d))
    }

    pub fn integer(n: i64) -> Scalar {
        Scalar::ratio(n, 1)
    }

    pub fn zero(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Interval => Scalar::Interval(Interval::point(0.0)),
        }
    }

    pub fn one(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::one()),
            Mode::Interval => Scalar::Interval(Interval::point(1.0)),
        }
    }

    /// Casts into the given mode (exact values become enclosing intervals).
    ///
    /// Interval values cannot become exact; they are returned unchanged.
    pub fn in_mode(&self, mode: Mode) -> Scalar {
        match (self, mode) {
            (Scalar::Exact(q), Mode::Interval) => Scalar::Interval(Interval::from_rational(q)),
            _ => self.clone(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Interval(_) => Mode::Interval,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Interval(_) => None,
        }
    }

    pub fn to_interval(&self) -> Interval {
        match self {
            Scalar::Exact(q) => Interval::from_rational(q),
            Scalar::Interval(iv) => *iv,
        }
    }

    pub fn lower_f64(&self) -> f64 {
        self.to_interval().lo()
    }

    pub fn upper_f64(&self) -> f64 {
        self.to_interval().hi()
    }

    /// Best float approximation (midpoint for intervals).
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Scalar::Interval(iv) => iv.mid(),
        }
    }

    /// Width of the enclosure; zero for exact values.
    pub fn width(&self) -> f64 {
        match self {
            Scalar::Exact(_) => 0.0,
            Scalar::Interval(iv) => iv.width(),
        }
    }

    pub fn key(&self) -> Option<ScalarKey> {
        match self {
            Scalar::Exact(q) => Some(ScalarKey::Rational(q.clone())),
            Scalar::Interval(iv) if iv.is_point() => {
                // +0.0 and -0.0 are the same real
                let v = if iv.lo() == 0.0 { 0.0 } else { iv.lo() };
                Some(ScalarKey::Float(v.to_bits()))
            }
            Scalar::Interval(_) => None,
        }
    }

    pub fn certified_sign(&self) -> Option<Ordering> {
        match self {
            Scalar::Exact(q) => Some(q.cmp(&BigRational::zero())),
            Scalar::Interval(iv) => iv.certified_sign(),
        }
    }

    pub fn cmp_certified(&self, other: &Scalar) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_interval().cmp_certified(&other.to_interval()),
        }
    }

    pub fn is_positive_certified(&self) -> bool {
        self.certified_sign() == Some(Ordering::Greater)
    }

    pub fn is_zero_certified(&self) -> bool {
        self.certified_sign() == Some(Ordering::Equal)
    }

    pub fn lt_certified(&self, other: &Scalar) -> bool {
        self.cmp_certified(other) == Some(Ordering::Less)
    }

    pub fn le_certified(&self, other: &Scalar) -> bool {
        matches!(
            self.cmp_certified(other),
            Some(Ordering::Less) | Some(Ordering::Equal)
        ) || self.upper_f64() <= other.lower_f64()
    }

    /// True when the two values may be equal (exact equality or overlap).
    pub fn possibly_equal(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_interval().overlaps(&other.to_interval()),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Interval(iv) => Scalar::Interval(iv.abs()),
        }
    }

    pub fn square(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q * q),
            Scalar::Interval(iv) => Scalar::Interval(iv.sqr()),
        }
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one(self.mode());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn recip(&self) -> Scalar {
        &Scalar::one(self.mode()) / self
    }

    /// Value whose lower endpoint bounds `sqrt(self)` from below.
    ///
    /// Exact inputs yield an exact rational, equal to the root when the
    /// input is a rational square.
    pub fn sqrt_lower(&self) -> Scalar {
        match self {
            Scalar::Exact(q) if !q.is_positive() => Scalar::Exact(BigRational::zero()),
            Scalar::Exact(q) => Scalar::Exact(rational_sqrt_lower(q)),
            Scalar::Interval(iv) => Scalar::Interval(iv.sqrt()),
        }
    }

    /// Value whose upper endpoint bounds `sqrt(self)` from above.
    pub fn sqrt_upper(&self) -> Scalar {
        match self {
            Scalar::Exact(q) if !q.is_positive() => Scalar::Exact(BigRational::zero()),
            Scalar::Exact(q) => Scalar::Exact(rational_sqrt_upper(q)),
            Scalar::Interval(iv) => Scalar::Interval(iv.sqrt()),
        }
    }

    /// Certified maximum (interval max for enclosures).
    pub fn max_of(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.max(b).clone()),
            _ => Scalar::Interval(self.to_interval().max(&other.to_interval())),
        }
    }

    pub fn min_of(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.min(b).clone()),
            _ => Scalar::Interval(self.to_interval().min(&other.to_interval())),
        }
    }

    /// `max(self, 0)`.
    pub fn clamp_nonnegative(&self) -> Scalar {
        self.max_of(&Scalar::zero(self.mode()))
    }

    /// Natural logarithm as an enclosure.
    pub fn ln(&self) -> Interval {
        self.to_interval().ln()
    }

    /// Total order used for deterministic queues: exact order for rationals,
    /// lower endpoint then upper endpoint for intervals.
    pub fn queue_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_interval(), other.to_interval());
                a.lo()
                    .total_cmp(&b.lo())
                    .then_with(|| a.hi().total_cmp(&b.hi()))
            }
        }
    }
}

fn binary(
    a: &Scalar,
    b: &Scalar,
    exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
    interval: impl FnOnce(&Interval, &Interval) -> Interval,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        _ => Scalar::Interval(interval(&a.to_interval(), &b.to_interval())),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $exact:expr, $interval:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                binary(self, rhs, $exact, $interval)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| x + y, |x, y| x.add(y));
forward_binop!(Sub, sub, |x, y| x - y, |x, y| x.sub(y));
forward_binop!(Mul, mul, |x, y| x * y, |x, y| x.mul(y));
forward_binop!(Div, div, |x, y| x / y, |x, y| x.div(y));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q),
            Scalar::Interval(iv) => Scalar::Interval(iv.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<Interval> for Scalar {
    fn from(iv: Interval) -> Self {
        Scalar::Interval(iv)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Interval(iv) => write!(f, "{iv}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_canonical() {
        let a = Scalar::ratio(2, 10);
        assert_eq!(a, Scalar::ratio(1, 5));
        assert_eq!(a.to_string(), "1/5");
        let b = &a + &Scalar::ratio(4, 5);
        assert_eq!(b.to_string(), "1");
    }

    #[test]
    fn mixed_promotes_to_interval() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Interval(Interval::point(1.0));
        let c = &a + &b;
        assert!(!c.is_exact());
        assert!(c.to_interval().contains_rational(&rational(4, 3)));
    }

    #[test]
    fn certified_order() {
        let a = Scalar::ratio(1, 5);
        let b = Scalar::Interval(Interval::from_rational(&rational(1, 5)));
        assert_eq!(a.cmp_certified(&Scalar::ratio(1, 4)), Some(Ordering::Less));
        assert_eq!(a.cmp_certified(&b), None);
        assert!(b.possibly_equal(&a));
    }

    #[test]
    fn sqrt_bounds_exact_when_square() {
        assert_eq!(Scalar::ratio(4, 25).sqrt_lower(), Scalar::ratio(2, 5));
        let lo = Scalar::integer(2).sqrt_lower();
        let hi = Scalar::integer(2).sqrt_upper();
        assert!(lo.square().le_certified(&Scalar::integer(2)));
        assert!(Scalar::integer(2).le_certified(&hi.square()));
    }
}
