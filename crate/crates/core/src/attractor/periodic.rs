use super::ball::{tight_ball, Ball};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::system::IfsSystem;
use crate::word::Word;
use serde::Serialize;
use std::fmt;

/// Cap on how many periodic points feed each witness search.
const MAX_CANDIDATES: usize = 256;

/// `φ_u(fix φ_w)`, a point of the attractor with an eventually periodic address.
pub fn periodic_point(sys: &IfsSystem, prefix: &Word, period: &Word) -> Result<Point> {
    if period.is_empty() {
        return Err(Error::EmptyWord);
    }
    let fix = sys.cylinder_map(period)?.fixed_point();
    if prefix.is_empty() {
        return Ok(fix);
    }
    Ok(sys.cylinder_map(prefix)?.map_point(&fix))
}

/// Eventually periodic symbolic address `u w w w …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Address {
    pub prefix: Word,
    pub period: Word,
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u={}, w={}", self.prefix, self.period)
    }
}

/// A point shown to lie in two cylinder sets by two exact addresses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point: Point,
    pub left: Address,
    pub right: Address,
}

impl Witness {
    /// Recomputes both addresses and checks they give the recorded point.
    pub fn verify(&self, left: &IfsSystem, right: &IfsSystem) -> bool {
        let a = periodic_point(left, &self.left.prefix, &self.left.period);
        let b = periodic_point(right, &self.right.prefix, &self.right.period);
        match (a, b) {
            (Ok(a), Ok(b)) => a.certified_equal(&self.point) && b.certified_equal(&self.point),
            _ => false,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} via ({}) and ({})", self.point, self.left, self.right)
    }
}

/// Per-system data reused by every search on that system: the enclosing ball,
/// the witness candidates `fix φ_w` and a reference point of the attractor.
#[derive(Clone, Debug)]
pub struct AttractorContext<'a> {
    sys: &'a IfsSystem,
    ball: Ball,
    candidates: Vec<(Word, Point)>,
    sample: Point,
}

impl<'a> AttractorContext<'a> {
    pub fn new(sys: &'a IfsSystem, budget: &Budget) -> Self {
        AttractorContext::with_ball(sys, tight_ball(sys), budget)
    }

    pub fn with_ball(sys: &'a IfsSystem, ball: Ball, budget: &Budget) -> Self {
        let mut period = budget.witness_period.max(1);
        while period > 1 && (1..=period).map(|l| crate::system::checked_pow(sys.len(), l)).sum::<usize>() > MAX_CANDIDATES {
            period -= 1;
        }
        let mut candidates = Vec::new();
        for len in 1..=period {
            for w in Word::all_of_length(sys.len(), len) {
                let p = sys.cylinder_map(&w).expect("valid word").fixed_point();
                candidates.push((w, p));
            }
        }
        let sample = candidates[0].1.clone();
        AttractorContext {
            sys,
            ball,
            candidates,
            sample,
        }
    }

    pub fn system(&self) -> &'a IfsSystem {
        self.sys
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn candidates(&self) -> &[(Word, Point)] {
        &self.candidates
    }

    /// `fix φ_1`, which lies in the attractor.
    pub fn sample(&self) -> &Point {
        &self.sample
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn w(s: &[usize]) -> Word {
        Word::from_one_based(s)
    }

    #[test]
    fn periodic_point_examples() {
        let f5 = catalog::touching_fifths();
        let four_fifths = Point::from_ratios(&[(4, 5)]);
        assert_eq!(periodic_point(&f5, &w(&[2]), &w(&[3])).unwrap(), four_fifths);
        assert_eq!(periodic_point(&f5, &w(&[3]), &w(&[1])).unwrap(), four_fifths);
        let c4 = catalog::cantor_quarters();
        assert_eq!(periodic_point(&c4, &Word::empty(), &w(&[2])).unwrap(), Point::from_ratios(&[(1, 1)]));
        assert_eq!(periodic_point(&c4, &w(&[1]), &Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn candidates_respect_cap() {
        let big = catalog::touching_fifths().power(3).unwrap();
        let ctx = AttractorContext::new(&big, &Budget::default());
        assert_eq!(ctx.candidates().len(), 27);
        let f5 = catalog::touching_fifths();
        let ctx = AttractorContext::new(&f5, &Budget::default());
        assert_eq!(ctx.candidates().len(), 12);
    }
}
