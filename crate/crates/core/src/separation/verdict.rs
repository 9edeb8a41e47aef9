use crate::attractor::{distance_between, AttractorContext, Witness};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::system::IfsSystem;
use crate::word::Word;
use serde::Serialize;
use std::fmt;

/// Three-valued answer to "do `φ_i(E)` and `φ_j(E)` meet?".
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IntersectionVerdict {
    CertifiedDisjoint { gap: Scalar },
    CertifiedIntersect { witness: Witness },
    Undecided { upper: Scalar, nodes: usize },
}

impl IntersectionVerdict {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, IntersectionVerdict::CertifiedDisjoint { .. })
    }

    pub fn is_intersecting(&self) -> bool {
        matches!(self, IntersectionVerdict::CertifiedIntersect { .. })
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, IntersectionVerdict::Undecided { .. })
    }
}

impl fmt::Display for IntersectionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionVerdict::CertifiedDisjoint { gap } => write!(f, "disjoint (gap ≥ {gap})"),
            IntersectionVerdict::CertifiedIntersect { witness } => write!(f, "intersect at {witness}"),
            IntersectionVerdict::Undecided { upper, nodes } => {
                write!(f, "undecided (distance ≤ {upper} after {nodes} nodes)")
            }
        }
    }
}

pub(crate) fn check_pair(sys: &IfsSystem, i: usize, j: usize) -> Result<()> {
    for index in [i, j] {
        if index >= sys.len() {
            return Err(Error::IndexOutOfRange { index, maps: sys.len() });
        }
    }
    if i == j {
        return Err(Error::SelfPair(i));
    }
    Ok(())
}

pub fn decide_intersection(sys: &IfsSystem, i: usize, j: usize, budget: &Budget) -> Result<IntersectionVerdict> {
    check_pair(sys, i, j)?;
    let ctx = AttractorContext::new(sys, budget);
    decide_in(&ctx, i, j, budget)
}

/// Verdict for a pair using a prepared context, so graph construction builds it once.
pub(crate) fn decide_in(ctx: &AttractorContext<'_>, i: usize, j: usize, budget: &Budget) -> Result<IntersectionVerdict> {
    let bounds = distance_between(ctx, &[Word::single(i)], ctx, &[Word::single(j)], budget)?;
    Ok(if let Some(witness) = bounds.witness {
        IntersectionVerdict::CertifiedIntersect { witness }
    } else if bounds.is_positive() {
        IntersectionVerdict::CertifiedDisjoint { gap: bounds.lower }
    } else {
        IntersectionVerdict::Undecided {
            upper: bounds.upper,
            nodes: bounds.nodes_expanded,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::Point;

    #[test]
    fn fifths_and_quarters() {
        let b = Budget::default();
        let f5 = catalog::touching_fifths();
        assert_eq!(
            decide_intersection(&f5, 0, 1, &b).unwrap(),
            IntersectionVerdict::CertifiedDisjoint { gap: Scalar::ratio(2, 5) }
        );
        match decide_intersection(&f5, 1, 2, &b).unwrap() {
            IntersectionVerdict::CertifiedIntersect { witness } => {
                assert_eq!(witness.point, Point::from_ratios(&[(4, 5)]));
                assert!(witness.verify(&f5, &f5));
            }
            other => panic!("expected an intersection, got {other}"),
        }
        let c4 = catalog::cantor_quarters();
        assert_eq!(
            decide_intersection(&c4, 0, 1, &b).unwrap(),
            IntersectionVerdict::CertifiedDisjoint { gap: Scalar::ratio(1, 2) }
        );
        assert_eq!(decide_intersection(&c4, 1, 1, &b), Err(Error::SelfPair(1)));
        assert!(matches!(decide_intersection(&c4, 0, 2, &b), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn interval_mode_cannot_certify_touching() {
        let f5 = catalog::touching_fifths().to_interval_mode();
        let b = Budget::default().with_nodes(200);
        assert!(decide_intersection(&f5, 1, 2, &b).unwrap().is_undecided());
        assert!(decide_intersection(&f5, 0, 1, &b).unwrap().is_disjoint());
    }
}
