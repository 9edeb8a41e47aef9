//! Closed intervals of `f64` with outward (directed) rounding.
//!
//! Rounding direction is recovered from error-free transformations: the
//! rounding error of `+`, `*`, `/` and `sqrt` is computed exactly with
//! two-sum and fused multiply-add, and an endpoint is stepped to the next
//! representable float only when the rounded result lies on the wrong side.
//! Operations whose result is exactly representable therefore stay exact.
//!
//! `ln` and `exp` go through the platform libm, which is not correctly
//! rounded; their results are widened by [`LIBM_ULPS`] units in the last
//! place in each direction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Widening applied to libm transcendental results.
pub const LIBM_ULPS: u32 = 4;

/// Below this magnitude fma-based error terms can lose exactness (subnormals).
const TINY: f64 = 1e-290;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn steps_down(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn steps_up(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// Turns a rounded result and the sign of `true - rounded` into directed bounds.
fn directed(rounded: f64, err: Ordering, tiny: bool) -> (f64, f64) {
    if !rounded.is_finite() || tiny {
        return (rounded.next_down(), rounded.next_up());
    }
    match err {
        Ordering::Less => (rounded.next_down(), rounded),
        Ordering::Greater => (rounded, rounded.next_up()),
        Ordering::Equal => (rounded, rounded),
    }
}

fn sign_of(x: f64) -> Ordering {
    x.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

fn add_bounds(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    directed(s, sign_of(err), false)
}

fn mul_bounds(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    let p = a * b;
    let err = a.mul_add(b, -p);
    directed(p, sign_of(err), p.abs() < TINY)
}

fn div_bounds(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, 0.0);
    }
    let q = a / b;
    // a - q*b, exact barring underflow
    let r = -q.mul_add(b, -a);
    let err = if b > 0.0 { sign_of(r) } else { sign_of(r).reverse() };
    directed(q, err, q.abs() < TINY || a.abs() < TINY)
}

fn sqrt_bounds(a: f64) -> (f64, f64) {
    if a <= 0.0 {
        return (0.0, 0.0);
    }
    let s = a.sqrt();
    let r = -s.mul_add(s, -a);
    directed(s, sign_of(r), a < TINY)
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            self.lo / 2.0 + self.hi / 2.0
        } else if self.lo.is_finite() {
            self.lo
        } else {
            self.hi
        }
    }

    pub fn width(&self) -> f64 {
        add_bounds(self.hi, -self.lo).1
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Widens both endpoints by an absolute amount, rounding outward.
    pub fn inflate(&self, by: f64) -> Interval {
        Interval::new(add_bounds(self.lo, -by).0, add_bounds(self.hi, by).1)
    }

    /// Tightest interval enclosing an exact rational.
    pub fn from_rational(q: &BigRational) -> Interval {
        let approx = q.to_f64().unwrap_or(f64::NAN);
        if !approx.is_finite() {
            return if q.is_negative() {
                Interval::new(f64::NEG_INFINITY, -f64::MAX)
            } else {
                Interval::new(f64::MAX, f64::INFINITY)
            };
        }
        let back = BigRational::from_f64(approx).expect("finite float is rational");
        match back.cmp(q) {
            Ordering::Equal => Interval::point(approx),
            Ordering::Less => Interval::new(approx, approx.next_up()),
            Ordering::Greater => Interval::new(approx.next_down(), approx),
        }
    }

    /// Certified comparison; `None` when the intervals overlap non-trivially.
    pub fn cmp_certified(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certified_sign(&self) -> Option<Ordering> {
        self.cmp_certified(&Interval::point(0.0))
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(
            add_bounds(self.lo, other.lo).0,
            add_bounds(self.hi, other.hi).1,
        )
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let cands = [
            mul_bounds(self.lo, other.lo),
            mul_bounds(self.lo, other.hi),
            mul_bounds(self.hi, other.lo),
            mul_bounds(self.hi, other.hi),
        ];
        let lo = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let hi = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }

    pub fn div(&self, other: &Interval) -> Interval {
        if other.contains(0.0) {
            return Interval::entire();
        }
        let cands = [
            div_bounds(self.lo, other.lo),
            div_bounds(self.lo, other.hi),
            div_bounds(self.hi, other.lo),
            div_bounds(self.hi, other.hi),
        ];
        let lo = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let hi = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval::new(0.0, self.hi.max(-self.lo))
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval::new(mul_bounds(a.lo, a.lo).0, mul_bounds(a.hi, a.hi).1)
    }

    /// Square root of the nonnegative part.
    pub fn sqrt(&self) -> Interval {
        let lo = if self.lo <= 0.0 { 0.0 } else { sqrt_bounds(self.lo).0 };
        let hi = if self.hi <= 0.0 { 0.0 } else { sqrt_bounds(self.hi).1 };
        Interval::new(lo, hi)
    }

    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "ln of non-positive interval");
        Interval::new(
            steps_down(self.lo.ln(), LIBM_ULPS),
            steps_up(self.hi.ln(), LIBM_ULPS),
        )
    }

    pub fn exp(&self) -> Interval {
        let lo = steps_down(self.lo.exp(), LIBM_ULPS).max(0.0);
        Interval::new(lo, steps_up(self.hi.exp(), LIBM_ULPS))
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Exact rational value of the lower endpoint.
    pub fn lo_rational(&self) -> Option<BigRational> {
        BigRational::from_f64(self.lo)
    }

    pub fn hi_rational(&self) -> Option<BigRational> {
        BigRational::from_f64(self.hi)
    }

    /// True if the exact rational lies inside the interval.
    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo_ok = match BigRational::from_f64(self.lo) {
            Some(lo) => lo <= *q,
            None => self.lo == f64::NEG_INFINITY,
        };
        let hi_ok = match BigRational::from_f64(self.hi) {
            Some(hi) => *q <= hi,
            None => self.hi == f64::INFINITY,
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Exact rational lower bound for `sqrt(q)`, `q >= 0`.
pub(crate) fn rational_sqrt_lower(q: &BigRational) -> BigRational {
    if let Some(root) = exact_rational_sqrt(q) {
        return root;
    }
    let iv = Interval::from_rational(q).sqrt();
    let mut cand = BigRational::from_f64(iv.lo()).unwrap_or_else(BigRational::zero);
    // the float path is almost always right; fall back to bisection-free halving
    for _ in 0..64 {
        if &cand * &cand <= *q {
            return cand;
        }
        cand /= BigRational::from_integer(BigInt::from(2));
    }
    BigRational::zero()
}

/// Exact rational upper bound for `sqrt(q)`, `q >= 0`.
pub(crate) fn rational_sqrt_upper(q: &BigRational) -> BigRational {
    if let Some(root) = exact_rational_sqrt(q) {
        return root;
    }
    let iv = Interval::from_rational(q).sqrt();
    if let Some(cand) = BigRational::from_f64(iv.hi()) {
        if &cand * &cand >= *q {
            return cand;
        }
    }
    let one = BigRational::from_integer(BigInt::from(1));
    if *q > one {
        q.clone()
    } else {
        one
    }
}

/// `Some(r)` with `r*r == q` when `q` is the square of a rational.
pub(crate) fn exact_rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_operations_stay_points() {
        let a = Interval::point(0.25);
        let b = Interval::point(0.75);
        assert!(a.add(&b).is_point());
        assert!(a.mul(&b).is_point());
        assert_eq!(a.add(&b), Interval::point(1.0));
    }

    #[test]
    fn inexact_operations_enclose_true_value() {
        let third = Interval::point(1.0).div(&Interval::point(3.0));
        assert!(!third.is_point());
        assert!(third.contains_rational(&rat(1, 3)));
        let tenth = Interval::from_rational(&rat(1, 10));
        let sum = tenth.add(&tenth).add(&tenth);
        assert!(sum.contains_rational(&rat(3, 10)));
        let prod = tenth.mul(&Interval::from_rational(&rat(1, 3)));
        assert!(prod.contains_rational(&rat(1, 30)));
    }

    #[test]
    fn sqrt_encloses() {
        let two = Interval::point(2.0).sqrt();
        assert!(two.lo() * two.lo() <= 2.0 || two.lo().mul_add(two.lo(), -2.0) <= 0.0);
        assert!(two.hi().mul_add(two.hi(), -2.0) >= 0.0);
        assert!(two.width() < 1e-15);
    }

    #[test]
    fn rational_sqrt_bounds() {
        let q = rat(2, 1);
        let lo = rational_sqrt_lower(&q);
        let hi = rational_sqrt_upper(&q);
        assert!(&lo * &lo <= q);
        assert!(&hi * &hi >= q);
        assert_eq!(rational_sqrt_lower(&rat(9, 16)), rat(3, 4));
        assert_eq!(rational_sqrt_upper(&rat(9, 16)), rat(3, 4));
    }

    #[test]
    fn certified_comparison() {
        let a = Interval::new(0.0, 1.0);
        let b = Interval::new(2.0, 3.0);
        assert_eq!(a.cmp_certified(&b), Some(Ordering::Less));
        assert_eq!(a.cmp_certified(&Interval::new(0.5, 2.0)), None);
        assert_eq!(
            Interval::point(1.0).cmp_certified(&Interval::point(1.0)),
            Some(Ordering::Equal)
        );
    }
}
