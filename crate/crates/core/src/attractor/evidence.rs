use super::ball::tight_ball;
use super::distance::diameter_bounds;
use super::hausdorff::hausdorff_bounds;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};
use crate::similitude::Similitude;
use crate::system::IfsSystem;
use crate::word::Word;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::fmt;

/// Hausdorff upper bounds below this fraction of the diameter count as "same attractor".
pub const SAME_ATTRACTOR_TOLERANCE: f64 = 1e-6;

const CODE_SEARCH_DEPTH: usize = 12;
const CODE_SEARCH_NODES: usize = 200_000;
const EVIDENCE_COVER: usize = 20_000;
const EVIDENCE_MAX_DEPTH: usize = 24;

/// What is known about whether two systems generate the same attractor.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AttractorEvidence {
    /// The map lists coincide.
    Identical,
    /// Every map of one system equals a cylinder map `φ_w` of the other and
    /// the words form a complete prefix code, so the attractors coincide.
    CylinderCode {
        /// `true` when the second system is expressed in the first.
        second_in_first: bool,
        words: Vec<Word>,
    },
    /// Hausdorff upper bound below the tolerance; a heuristic, not a proof.
    HausdorffClose { upper: Scalar, threshold: f64 },
    /// Positive Hausdorff lower bound: the attractors differ.
    Distinct { lower: Scalar },
    Inconclusive { lower: Scalar, upper: Scalar },
}

impl AttractorEvidence {
    pub fn is_certified_same(&self) -> bool {
        matches!(self, AttractorEvidence::Identical | AttractorEvidence::CylinderCode { .. })
    }

    /// Certified or heuristic agreement.
    pub fn is_compatible(&self) -> bool {
        self.is_certified_same() || matches!(self, AttractorEvidence::HausdorffClose { .. })
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, AttractorEvidence::Distinct { .. })
    }
}

impl fmt::Display for AttractorEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttractorEvidence::Identical => f.write_str("identical map lists"),
            AttractorEvidence::CylinderCode { words, .. } => {
                f.write_str("maps are cylinders of a complete prefix code:")?;
                for w in words {
                    write!(f, " {w}")?;
                }
                Ok(())
            }
            AttractorEvidence::HausdorffClose { upper, threshold } => write!(
                f,
                "heuristic: Hausdorff distance ≤ {:.3e} < {threshold:.1e}·diam",
                upper.upper_f64()
            ),
            AttractorEvidence::Distinct { lower } => {
                write!(f, "attractors differ: Hausdorff distance ≥ {:.6e}", lower.lower_f64())
            }
            AttractorEvidence::Inconclusive { lower, upper } => write!(
                f,
                "inconclusive: Hausdorff distance in [{:.3e}, {:.3e}]",
                lower.lower_f64(),
                upper.upper_f64()
            ),
        }
    }
}

/// Searches for a word `w` with `φ_w = target`, pruning by ratio and by the
/// enclosing ball (`φ_w = target` forces `target(c) ∈ φ_w(B)`).
fn find_cylinder(sys: &IfsSystem, target: &Similitude) -> Option<Word> {
    let ball = tight_ball(sys);
    let probe = target.map_point(ball.center());
    let mut stack: Vec<(Word, Similitude)> = sys
        .maps()
        .iter()
        .enumerate()
        .rev()
        .map(|(i, f)| (Word::single(i), f.clone()))
        .collect();
    let mut nodes = 0;
    while let Some((w, f)) = stack.pop() {
        nodes += 1;
        if nodes > CODE_SEARCH_NODES {
            return None;
        }
        if &f == target {
            return Some(w);
        }
        if f.ratio().lt_certified(target.ratio())
            || f.ratio() == target.ratio()
            || w.len() >= CODE_SEARCH_DEPTH
            || ball.image(&f).excludes_point(&probe)
        {
            continue;
        }
        for (i, g) in sys.maps().iter().enumerate().rev() {
            stack.push((w.push(i), f.compose(g).expect("same dimension")));
        }
    }
    None
}

fn complete_prefix_code(words: &[Word], alphabet: usize) -> bool {
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if i != j && b.starts_with(a) {
                return false;
            }
        }
    }
    let total = words.iter().fold(BigRational::from_integer(BigInt::from(0)), |acc, w| {
        acc + BigRational::new(BigInt::one(), BigInt::from(alphabet).pow(w.len() as u32))
    });
    total == BigRational::one()
}

fn cylinder_code(outer: &IfsSystem, inner: &IfsSystem) -> Option<Vec<Word>> {
    if outer.mode() != Mode::Exact || inner.mode() != Mode::Exact {
        return None;
    }
    let words: Vec<Word> = inner.maps().iter().map(|m| find_cylinder(outer, m)).collect::<Option<_>>()?;
    complete_prefix_code(&words, outer.len()).then_some(words)
}

/// Certified coincidence when possible, otherwise Hausdorff bounds on covers of growing depth.
pub fn same_attractor_evidence(phi: &IfsSystem, psi: &IfsSystem, budget: &Budget) -> Result<AttractorEvidence> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    if phi.maps() == psi.maps() {
        return Ok(AttractorEvidence::Identical);
    }
    if let Some(words) = cylinder_code(phi, psi) {
        return Ok(AttractorEvidence::CylinderCode {
            second_in_first: true,
            words,
        });
    }
    if let Some(words) = cylinder_code(psi, phi) {
        return Ok(AttractorEvidence::CylinderCode {
            second_in_first: false,
            words,
        });
    }
    let diam = diameter_bounds(phi, 3, budget).upper.upper_f64();
    let threshold = SAME_ATTRACTOR_TOLERANCE * diam.max(f64::MIN_POSITIVE);
    let local = Budget {
        max_cover: budget.max_cover.min(EVIDENCE_COVER),
        ..budget.clone()
    };
    let mut last = None;
    for depth in 1..=EVIDENCE_MAX_DEPTH {
        let h = match hausdorff_bounds(phi, psi, depth, &local) {
            Ok(h) => h,
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        if h.lower.is_positive_certified() {
            return Ok(AttractorEvidence::Distinct { lower: h.lower });
        }
        if h.upper.upper_f64() < threshold {
            return Ok(AttractorEvidence::HausdorffClose {
                upper: h.upper,
                threshold: SAME_ATTRACTOR_TOLERANCE,
            });
        }
        last = Some(h);
    }
    let (lower, upper) = match last {
        Some(h) => (h.lower, h.upper),
        None => (Scalar::zero(phi.mode()), Scalar::Interval(crate::interval::Interval::point(f64::INFINITY))),
    };
    Ok(AttractorEvidence::Inconclusive { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn powers_are_cylinder_codes() {
        let f5 = catalog::touching_fifths();
        let f25 = f5.power(2).unwrap();
        let e = same_attractor_evidence(&f5, &f25, &Budget::default()).unwrap();
        assert!(e.is_certified_same());
        let e = same_attractor_evidence(&f25, &f5, &Budget::default()).unwrap();
        assert!(matches!(e, AttractorEvidence::CylinderCode { second_in_first: false, .. }));
    }

    #[test]
    fn mixed_depth_code_is_recognised() {
        // {φ_1, φ_2φ_1, φ_2φ_2} for the halves system
        let h = catalog::halves();
        let words = [vec![0], vec![1, 0], vec![1, 1]];
        let maps = words.iter().map(|w| h.cylinder_map(&Word::new(w.clone())).unwrap()).collect();
        let psi = IfsSystem::new(maps).unwrap();
        assert!(same_attractor_evidence(&h, &psi, &Budget::default()).unwrap().is_certified_same());
    }

    #[test]
    fn different_sets_are_distinct() {
        let e = same_attractor_evidence(&catalog::touching_fifths(), &catalog::cantor_quarters(), &Budget::default()).unwrap();
        assert!(e.is_distinct(), "{e}");
    }
}
