use super::ball::Ball;
use super::cover::refine_cover;
use super::periodic::{Address, AttractorContext, Witness};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::Point;
use crate::scalar::{Scalar, ScalarKey};
use crate::similitude::Similitude;
use crate::system::IfsSystem;
use crate::word::Word;
use std::cell::OnceCell;
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

/// Certified enclosure of the distance between two unions of cylinder sets.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceBounds {
    pub lower: Scalar,
    pub upper: Scalar,
    pub depth_reached: usize,
    pub nodes_expanded: usize,
    /// Common point found by the periodic-point search; forces `upper = 0`.
    pub witness: Option<Witness>,
    /// The node budget ran out before a decision.
    pub exhausted: bool,
}

impl DistanceBounds {
    pub fn is_positive(&self) -> bool {
        self.lower.is_positive_certified()
    }
}

struct Piece {
    word: Word,
    map: Similitude,
    ball: Ball,
    sample: Point,
    images: OnceCell<Vec<Option<Vec<ScalarKey>>>>,
}

impl Piece {
    fn new(ctx: &AttractorContext<'_>, word: Word, map: Similitude) -> Piece {
        Piece {
            ball: ctx.ball().image(&map),
            sample: map.map_point(ctx.sample()),
            word,
            map,
            images: OnceCell::new(),
        }
    }

    fn root(ctx: &AttractorContext<'_>, word: &Word) -> Result<Piece> {
        let map = ctx.system().cylinder_map(word)?;
        Ok(Piece::new(ctx, word.clone(), map))
    }

    fn child(&self, ctx: &AttractorContext<'_>, symbol: usize) -> Piece {
        let map = self.map.compose(ctx.system().map(symbol)).expect("same dimension");
        Piece::new(ctx, self.word.push(symbol), map)
    }

    /// Exact keys of `φ_word(fix φ_w)` for every witness candidate `w`.
    fn images(&self, ctx: &AttractorContext<'_>) -> &[Option<Vec<ScalarKey>>] {
        self.images.get_or_init(|| {
            ctx.candidates()
                .iter()
                .map(|(_, p)| self.map.map_point(p).key())
                .collect()
        })
    }
}

struct Pending {
    gap: Scalar,
    a: usize,
    b: usize,
    words: (Word, Word),
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gap
            .queue_cmp(&other.gap)
            .then_with(|| self.words.cmp(&other.words))
    }
}

fn find_witness(
    ctx_a: &AttractorContext<'_>,
    pa: &Piece,
    ctx_b: &AttractorContext<'_>,
    pb: &Piece,
) -> Option<Witness> {
    let mut right: HashMap<&Vec<ScalarKey>, usize> = HashMap::new();
    for (k, key) in pb.images(ctx_b).iter().enumerate() {
        if let Some(key) = key {
            right.entry(key).or_insert(k);
        }
    }
    for (k, key) in pa.images(ctx_a).iter().enumerate() {
        let Some(key) = key else { continue };
        if let Some(&m) = right.get(key) {
            let (wa, fa) = &ctx_a.candidates()[k];
            let (wb, _) = &ctx_b.candidates()[m];
            return Some(Witness {
                point: pa.map.map_point(fa),
                left: Address {
                    prefix: pa.word.clone(),
                    period: wa.clone(),
                },
                right: Address {
                    prefix: pb.word.clone(),
                    period: wb.clone(),
                },
            });
        }
    }
    None
}

/// Distance between `⋃_{w∈A} φ_w(E)` and `⋃_{v∈B} φ_v(E)` in one system.
pub fn set_distance(sys: &IfsSystem, a: &[Word], b: &[Word], budget: &Budget) -> Result<DistanceBounds> {
    let ctx = AttractorContext::new(sys, budget);
    distance_between(&ctx, a, &ctx, b, budget)
}

/// Best-first branch-and-bound on pairs of cylinders, smallest ball gap first.
///
/// The two sides may come from different systems; each side's pieces are
/// `φ_w(E)` for its own system and attractor.
pub fn distance_between(
    ctx_a: &AttractorContext<'_>,
    a: &[Word],
    ctx_b: &AttractorContext<'_>,
    b: &[Word],
    budget: &Budget,
) -> Result<DistanceBounds> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut left: Vec<Piece> = a.iter().map(|w| Piece::root(ctx_a, w)).collect::<Result<_>>()?;
    let mut right: Vec<Piece> = b.iter().map(|w| Piece::root(ctx_b, w)).collect::<Result<_>>()?;
    let mut heap = BinaryHeap::new();
    for i in 0..left.len() {
        for j in 0..right.len() {
            heap.push(Reverse(pending(&left, i, &right, j)));
        }
    }
    let mut upper: Option<Scalar> = None;
    let mut nodes = 0usize;
    let mut depth_reached = 0usize;
    let mut stuck = false;
    let mut lower = None;
    let mut witness = None;
    let mut exhausted = false;
    while let Some(Reverse(p)) = heap.pop() {
        nodes += 1;
        let (pa, pb) = (&left[p.a], &right[p.b]);
        depth_reached = depth_reached.max(pa.word.len()).max(pb.word.len());
        let sampled = pa.sample.sub(&pb.sample).norm_upper();
        upper = Some(match upper {
            Some(u) => u.min_of(&sampled),
            None => sampled,
        });
        if p.gap.is_positive_certified() {
            // every pending pair has a gap at least this large
            lower = Some(if stuck { Scalar::zero(p.gap.mode()) } else { lower_endpoint(&p.gap) });
            break;
        }
        if pa.word.len() <= budget.witness_preperiod && pb.word.len() <= budget.witness_preperiod {
            if let Some(w) = find_witness(ctx_a, pa, ctx_b, pb) {
                witness = Some(w);
                break;
            }
        }
        if nodes >= budget.max_nodes {
            exhausted = true;
            break;
        }
        let can_a = pa.word.len() < budget.max_depth;
        let can_b = pb.word.len() < budget.max_depth;
        let split_a = match (can_a, can_b) {
            (false, false) => {
                stuck = true;
                continue;
            }
            (true, false) => true,
            (false, true) => false,
            (true, true) => pa.ball.radius().upper_f64() >= pb.ball.radius().upper_f64(),
        };
        if split_a {
            for s in 0..ctx_a.system().len() {
                let child = left[p.a].child(ctx_a, s);
                left.push(child);
                heap.push(Reverse(pending(&left, left.len() - 1, &right, p.b)));
            }
        } else {
            for s in 0..ctx_b.system().len() {
                let child = right[p.b].child(ctx_b, s);
                right.push(child);
                heap.push(Reverse(pending(&left, p.a, &right, right.len() - 1)));
            }
        }
    }
    let mode = ctx_a.system().mode();
    let upper = if witness.is_some() {
        Scalar::zero(mode)
    } else {
        upper_endpoint(&upper.expect("at least one pair examined"))
    };
    Ok(DistanceBounds {
        lower: lower.unwrap_or_else(|| Scalar::zero(mode)),
        upper,
        depth_reached,
        nodes_expanded: nodes,
        witness,
        exhausted,
    })
}

fn pending(left: &[Piece], a: usize, right: &[Piece], b: usize) -> Pending {
    Pending {
        gap: left[a].ball.gap(&right[b].ball),
        a,
        b,
        words: (left[a].word.clone(), right[b].word.clone()),
    }
}

fn lower_endpoint(x: &Scalar) -> Scalar {
    match x {
        Scalar::Exact(_) => x.clone(),
        Scalar::Interval(iv) => Scalar::Interval(Interval::point(iv.lo())),
    }
}

fn upper_endpoint(x: &Scalar) -> Scalar {
    match x {
        Scalar::Exact(_) => x.clone(),
        Scalar::Interval(iv) => Scalar::Interval(Interval::point(iv.hi())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterBounds {
    pub lower: Scalar,
    pub upper: Scalar,
}

/// Largest cover size used for the pairwise diameter bound.
const DIAMETER_COVER: usize = 256;

/// `diam(E)` from periodic points (below) and a cylinder cover (above).
pub fn diameter_bounds(sys: &IfsSystem, depth: usize, budget: &Budget) -> DiameterBounds {
    let ctx = AttractorContext::new(sys, budget);
    let ball = ctx.ball();
    let mut upper = ball.radius() * &Scalar::integer(2);
    let mut k = depth.max(1);
    while k > 1 && crate::system::checked_pow(sys.len(), k) > DIAMETER_COVER {
        k -= 1;
    }
    if let Ok(cover) = refine_cover(sys, k, &Budget::default()) {
        let entries = cover.entries();
        let mut spread: Option<Scalar> = None;
        for (i, e) in entries.iter().enumerate() {
            for f in &entries[i..] {
                let ext = e.ball.extent(&f.ball);
                spread = Some(match spread {
                    Some(s) => s.max_of(&ext),
                    None => ext,
                });
            }
        }
        if let Some(s) = spread {
            upper = upper.min_of(&upper_endpoint(&s));
        }
    }
    let mut points: Vec<Point> = ctx.candidates().iter().map(|(_, p)| p.clone()).collect();
    if depth > 1 {
        let first: Vec<Point> = points.clone();
        for f in sys.maps() {
            points.extend(first.iter().map(|p| f.map_point(p)));
        }
    }
    let mut lower = Scalar::zero(sys.mode());
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            lower = lower.max_of(&lower_endpoint(&p.sub(q).norm_lower()));
        }
    }
    DiameterBounds { lower, upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn w(s: &[usize]) -> Vec<Word> {
        vec![Word::from_one_based(s)]
    }

    #[test]
    fn fifths_gap_and_touching() {
        let f5 = catalog::touching_fifths();
        let b = set_distance(&f5, &w(&[1]), &w(&[2]), &Budget::default()).unwrap();
        assert_eq!(b.lower, Scalar::ratio(2, 5));
        assert!(b.lower.le_certified(&b.upper));
        let b = set_distance(&f5, &w(&[2]), &w(&[3]), &Budget::default()).unwrap();
        assert_eq!(b.upper, Scalar::integer(0));
        let wit = b.witness.unwrap();
        assert_eq!(wit.point, Point::from_ratios(&[(4, 5)]));
        assert_eq!(wit.left.prefix.to_string(), "2");
        assert_eq!(wit.left.period.to_string(), "3");
        assert_eq!(wit.right.prefix.to_string(), "3");
        assert_eq!(wit.right.period.to_string(), "1");
        assert!(wit.verify(&f5, &f5));
    }

    #[test]
    fn quarters_gap() {
        let c4 = catalog::cantor_quarters();
        let b = set_distance(&c4, &w(&[1]), &w(&[2]), &Budget::default()).unwrap();
        assert_eq!(b.lower, Scalar::ratio(1, 2));
    }

    #[test]
    fn exhausted_budget_gives_zero_lower() {
        // overlapping images with no short common periodic point
        let sys = IfsSystem::new(vec![Similitude::line(1, 2, 0, 1), Similitude::line(2, 3, 1, 3)]).unwrap();
        let budget = Budget {
            max_nodes: 50,
            witness_preperiod: 0,
            ..Budget::default()
        };
        let b = set_distance(&sys, &w(&[1]), &w(&[2]), &budget).unwrap();
        assert!(b.exhausted);
        assert_eq!(b.lower, Scalar::integer(0));
    }

    #[test]
    fn diameters() {
        let d = diameter_bounds(&catalog::touching_fifths(), 3, &Budget::default());
        assert_eq!(d.lower, Scalar::integer(1));
        assert_eq!(d.upper, Scalar::integer(1));
        let d = diameter_bounds(&catalog::cantor_quarters(), 3, &Budget::default());
        assert_eq!((d.lower, d.upper), (Scalar::integer(1), Scalar::integer(1)));
        let d = diameter_bounds(&catalog::collapsed(), 3, &Budget::default());
        assert_eq!((d.lower, d.upper), (Scalar::integer(0), Scalar::integer(0)));
    }
}
