use super::ball::{tight_ball, Ball};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::scalar::Scalar;
use crate::system::{checked_pow, IfsSystem};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverEntry {
    pub word: Word,
    pub ball: Ball,
    /// Product of the ratios along the word.
    pub ratio: Scalar,
}

/// All cylinders of one depth with enclosing balls `φ_w(B)`.
#[derive(Clone, Debug)]
pub struct CylinderCover {
    depth: usize,
    base: Ball,
    entries: Vec<CoverEntry>,
}

impl CylinderCover {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn base(&self) -> &Ball {
        &self.base
    }

    pub fn entries(&self) -> &[CoverEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest ratio product over the cover's words.
    pub fn contraction_bound(&self) -> Scalar {
        self.entries
            .iter()
            .map(|e| e.ratio.clone())
            .reduce(|a, b| a.max_of(&b))
            .unwrap_or_else(|| Scalar::integer(1))
    }
}

/// Depth-`k` cover built on the tight invariant ball.
pub fn refine_cover(sys: &IfsSystem, depth: usize, budget: &Budget) -> Result<CylinderCover> {
    refine_cover_from(sys, &tight_ball(sys), depth, budget)
}

/// Depth-`k` cover built on a caller-supplied invariant ball.
pub fn refine_cover_from(sys: &IfsSystem, base: &Ball, depth: usize, budget: &Budget) -> Result<CylinderCover> {
    if depth == 0 {
        return Err(Error::Precondition("cover depth must be at least 1".into()));
    }
    let needed = checked_pow(sys.len(), depth);
    if needed > budget.max_cover {
        return Err(Error::BudgetExceeded {
            what: "cylinders in cover",
            needed,
            limit: budget.max_cover,
        });
    }
    let mut entries = vec![CoverEntry {
        word: Word::empty(),
        ball: base.clone(),
        ratio: Scalar::one(sys.mode()),
    }];
    // prepending a symbol keeps lexicographic order when the previous level is sorted
    for _ in 0..depth {
        let mut next = Vec::with_capacity(entries.len() * sys.len());
        for (i, f) in sys.maps().iter().enumerate() {
            let head = Word::single(i);
            for e in &entries {
                next.push(CoverEntry {
                    word: head.concat(&e.word),
                    ball: e.ball.image(f),
                    ratio: f.ratio() * &e.ratio,
                });
            }
        }
        entries = next;
    }
    Ok(CylinderCover {
        depth,
        base: base.clone(),
        entries,
    })
}

/// A cylinder with its enclosing ball and one point of the attractor inside it.
#[derive(Clone, Debug)]
pub struct SampledCylinder {
    pub word: Word,
    pub ball: Ball,
    pub ratio: Scalar,
    pub sample: Point,
}

const ADAPTIVE_DEPTH_CAP: usize = 64;

/// Refines each branch until its ratio product is at most `target`, so
/// non-homogeneous systems get cylinders of comparable size.
pub fn adaptive_cover(
    sys: &IfsSystem,
    base: &Ball,
    sample: &Point,
    target: &Scalar,
    max_entries: usize,
) -> Result<Vec<SampledCylinder>> {
    let mut out = Vec::new();
    let mut stack = vec![SampledCylinder {
        word: Word::empty(),
        ball: base.clone(),
        ratio: Scalar::one(sys.mode()),
        sample: sample.clone(),
    }];
    while let Some(c) = stack.pop() {
        if c.ratio.le_certified(target) || c.word.len() >= ADAPTIVE_DEPTH_CAP {
            if out.len() >= max_entries {
                return Err(Error::BudgetExceeded {
                    what: "cylinders in adaptive cover",
                    needed: out.len() + 1 + stack.len(),
                    limit: max_entries,
                });
            }
            out.push(c);
            continue;
        }
        for (i, f) in sys.maps().iter().enumerate().rev() {
            stack.push(SampledCylinder {
                word: Word::single(i).concat(&c.word),
                ball: c.ball.image(f),
                ratio: f.ratio() * &c.ratio,
                sample: f.map_point(&c.sample),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::ball::invariant_ball;
    use crate::catalog;

    #[test]
    fn quarters_depth_two() {
        let sys = catalog::cantor_quarters();
        let base = invariant_ball(&sys);
        let cover = refine_cover_from(&sys, &base, 2, &Budget::default()).unwrap();
        assert_eq!(cover.len(), 4);
        for e in cover.entries() {
            assert_eq!(e.ball.radius(), &(base.radius() * &Scalar::ratio(1, 16)));
        }
        let words: Vec<String> = cover.entries().iter().map(|e| e.word.to_string()).collect();
        assert_eq!(words, ["(1,1)", "(1,2)", "(2,1)", "(2,2)"]);
    }

    #[test]
    fn fifths_depth_one_is_tight() {
        let cover = refine_cover(&catalog::touching_fifths(), 1, &Budget::default()).unwrap();
        let spans: Vec<(Scalar, Scalar)> = cover
            .entries()
            .iter()
            .map(|e| {
                let c = &e.ball.center().coords()[0];
                (c - e.ball.radius(), c + e.ball.radius())
            })
            .collect();
        assert_eq!(
            spans,
            vec![
                (Scalar::integer(0), Scalar::ratio(1, 5)),
                (Scalar::ratio(3, 5), Scalar::ratio(4, 5)),
                (Scalar::ratio(4, 5), Scalar::integer(1)),
            ]
        );
    }

    #[test]
    fn budget_is_enforced() {
        let budget = Budget {
            max_cover: 100,
            ..Budget::default()
        };
        assert!(matches!(
            refine_cover(&catalog::touching_fifths(), 5, &budget),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
