use super::graph::{adjacency_graph, AdjacencyGraph};
use super::verdict::IntersectionVerdict;
use crate::attractor::Witness;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::system::IfsSystem;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SscVerdict {
    /// All first-level images pairwise disjoint; `delta` bounds the smallest gap from below.
    Ssc { delta: Scalar },
    NotSsc { pair: (usize, usize), witness: Witness },
    Undecided { pairs: Vec<(usize, usize)> },
}

impl SscVerdict {
    pub fn is_ssc(&self) -> bool {
        matches!(self, SscVerdict::Ssc { .. })
    }

    pub fn is_not_ssc(&self) -> bool {
        matches!(self, SscVerdict::NotSsc { .. })
    }

    pub fn delta(&self) -> Option<&Scalar> {
        match self {
            SscVerdict::Ssc { delta } => Some(delta),
            _ => None,
        }
    }
}

impl fmt::Display for SscVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SscVerdict::Ssc { delta } => write!(f, "SSC holds (δ ≥ {delta})"),
            SscVerdict::NotSsc { pair, witness } => {
                write!(f, "SSC fails: images {} and {} meet at {}", pair.0 + 1, pair.1 + 1, witness.point)
            }
            SscVerdict::Undecided { pairs } => write!(f, "SSC undecided ({} pairs open)", pairs.len()),
        }
    }
}

/// Reads the SSC status off an already computed adjacency graph.
pub fn ssc_from_graph(graph: &AdjacencyGraph) -> SscVerdict {
    let mut delta: Option<Scalar> = None;
    for (&pair, v) in graph.verdicts() {
        match v {
            IntersectionVerdict::CertifiedIntersect { witness } => {
                return SscVerdict::NotSsc {
                    pair,
                    witness: witness.clone(),
                }
            }
            IntersectionVerdict::CertifiedDisjoint { gap } => {
                delta = Some(match delta {
                    Some(d) => d.min_of(gap),
                    None => gap.clone(),
                });
            }
            IntersectionVerdict::Undecided { .. } => {}
        }
    }
    if !graph.is_complete() {
        return SscVerdict::Undecided {
            pairs: graph.undecided().to_vec(),
        };
    }
    SscVerdict::Ssc {
        delta: delta.expect("at least one pair"),
    }
}

pub fn check_ssc(sys: &IfsSystem, budget: &Budget) -> Result<SscVerdict> {
    Ok(ssc_from_graph(&adjacency_graph(sys, budget)?))
}

/// Certified lower bound `δ > 0` on the smallest distance between first-level images.
pub fn min_gap(sys: &IfsSystem, budget: &Budget) -> Result<Scalar> {
    match check_ssc(sys, budget)? {
        SscVerdict::Ssc { delta } => Ok(delta),
        _ => Err(Error::NotSsc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn examples() {
        let b = Budget::default();
        assert_eq!(
            check_ssc(&catalog::cantor_quarters(), &b).unwrap(),
            SscVerdict::Ssc { delta: Scalar::ratio(1, 2) }
        );
        match check_ssc(&catalog::touching_fifths(), &b).unwrap() {
            SscVerdict::NotSsc { pair, .. } => assert_eq!(pair, (1, 2)),
            other => panic!("unexpected {other}"),
        }
        let undecided = check_ssc(&catalog::touching_fifths().to_interval_mode(), &b.clone().with_nodes(100)).unwrap();
        assert!(matches!(undecided, SscVerdict::Undecided { .. }));
    }

    #[test]
    fn min_gap_examples() {
        let b = Budget::default();
        let c4 = catalog::cantor_quarters();
        assert_eq!(min_gap(&c4, &b).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(min_gap(&c4.power(2).unwrap(), &b).unwrap(), Scalar::ratio(1, 8));
        assert_eq!(min_gap(&catalog::touching_fifths(), &b), Err(Error::NotSsc));
    }
}
