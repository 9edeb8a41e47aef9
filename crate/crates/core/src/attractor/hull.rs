use crate::interval::exact_rational_sqrt;
use crate::linalg::{OrthogonalMap, Point};
use crate::scalar::{Mode, Scalar};
use crate::similitude::Similitude;
use crate::system::{checked_pow, IfsSystem};
use crate::word::Word;
use num_rational::BigRational;
use num_traits::Zero;

const MAX_HULL_POINTS: usize = 512;
const FLOAT_RANK_TOLERANCE: f64 = 1e-9;

/// Affine span of sampled attractor points: `base + span(directions)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineHull {
    pub base: Point,
    /// Linearly independent, in row-reduced form (not orthonormal).
    pub directions: Vec<Point>,
    /// Every map sends the span into itself, so it contains the whole attractor.
    pub certified: bool,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon { rows: Vec::new() };
        for v in &self.directions {
            e.insert(v.coords().to_vec());
        }
        e
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.echelon().contains(p.sub(&self.base).coords().to_vec())
    }

    /// Both describe the same affine subspace.
    pub fn same_span(&self, other: &AffineHull) -> bool {
        let e = self.echelon();
        self.dim() == other.dim()
            && e.contains(other.base.sub(&self.base).coords().to_vec())
            && other.directions.iter().all(|v| e.contains(v.coords().to_vec()))
    }
}

/// Row-echelon basis with unit pivots.
struct Echelon {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (pivot, row) in &self.rows {
            let f = v[*pivot].clone();
            if f.is_zero_certified() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x - &(&f * r);
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !is_negligible(x)) else {
            return false;
        };
        let inv = v[pivot].recip();
        let row = v.iter().map(|x| x * &inv).collect();
        self.rows.push((pivot, row));
        true
    }

    fn contains(&self, v: Vec<Scalar>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero_certified())
    }
}

fn is_negligible(x: &Scalar) -> bool {
    match x {
        Scalar::Exact(q) => q.is_zero(),
        Scalar::Interval(iv) => iv.lo().abs().max(iv.hi().abs()) < FLOAT_RANK_TOLERANCE,
    }
}

/// Affine span of the fixed points of `φ_w` for `|w| ≤ depth`.
pub fn affine_hull(sys: &IfsSystem, depth: usize) -> AffineHull {
    let d = sys.dim();
    let mut points = Vec::new();
    for len in 1..=depth.max(1) {
        if points.len() + checked_pow(sys.len(), len) > MAX_HULL_POINTS && len > 1 {
            break;
        }
        for w in Word::all_of_length(sys.len(), len) {
            points.push(sys.cylinder_map(&w).expect("valid word").fixed_point());
        }
    }
    let base = points[0].clone();
    let mut basis = Echelon { rows: Vec::new() };
    for p in &points[1..] {
        if basis.rows.len() == d {
            break;
        }
        basis.insert(p.sub(&base).coords().to_vec());
    }
    let full = basis.rows.len() == d;
    let certified = full || (sys.mode() == Mode::Exact && invariant(sys, &base, &basis));
    AffineHull {
        base,
        directions: basis.rows.iter().map(|(_, r)| Point::new(r.clone())).collect(),
        certified,
    }
}

fn invariant(sys: &IfsSystem, base: &Point, basis: &Echelon) -> bool {
    sys.maps().iter().all(|f| {
        basis.contains(f.map_point(base).sub(base).coords().to_vec())
            && basis
                .rows
                .iter()
                .all(|(_, r)| basis.contains(f.map_vector(&Point::new(r.clone())).coords().to_vec()))
    })
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .reduce(|s, t| s + t)
        .unwrap_or_else(|| Scalar::integer(0))
}

/// Exact orthonormal basis of the hull directions, when the norms are rational.
fn orthonormal_basis(hull: &AffineHull) -> Option<Vec<Vec<Scalar>>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for v in &hull.directions {
        let mut u = v.coords().to_vec();
        for e in &out {
            let c = dot(&u, e);
            u = u.iter().zip(e).map(|(x, y)| x - &(&c * y)).collect();
        }
        let norm2 = dot(&u, &u);
        let q: &BigRational = norm2.as_rational()?;
        let norm = Scalar::Exact(exact_rational_sqrt(q)?);
        out.push(u.iter().map(|x| x / &norm).collect());
    }
    Some(out)
}

/// Restriction of every map to the hull, written in orthonormal hull coordinates.
///
/// Returns `None` unless the hull is certified, strictly lower-dimensional and
/// admits an exact orthonormal basis.
pub fn conjugate_to_hull(sys: &IfsSystem, hull: &AffineHull) -> Option<IfsSystem> {
    if !hull.certified || hull.dim() == sys.dim() || hull.dim() == 0 || sys.mode() != Mode::Exact {
        return None;
    }
    let basis = orthonormal_basis(hull)?;
    let k = basis.len();
    let to_hull = |v: &Point| -> Point { Point::new(basis.iter().map(|e| dot(e, v.coords())).collect()) };
    let maps = sys
        .maps()
        .iter()
        .map(|f| {
            let columns: Vec<Point> = basis
                .iter()
                .map(|e| to_hull(&f.orthogonal().apply(&Point::new(e.clone()))))
                .collect();
            let rows = (0..k).map(|r| (0..k).map(|c| columns[c].coords()[r].clone()).collect()).collect();
            let ortho = OrthogonalMap::from_rows(rows).ok()?;
            let translation = to_hull(&f.map_point(&hull.base).sub(&hull.base));
            Similitude::new(f.ratio().clone(), ortho, translation).ok()
        })
        .collect::<Option<Vec<_>>>()?;
    let mut reduced = IfsSystem::new(maps).ok()?;
    if let Some(osc) = sys.osc() {
        reduced = reduced.with_osc(osc);
    }
    Some(reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn line_systems_fill_the_line() {
        let h = affine_hull(&catalog::touching_fifths(), 1);
        assert_eq!(h.dim(), 1);
        assert!(h.certified);
        let h = affine_hull(&catalog::collapsed(), 3);
        assert_eq!(h.dim(), 0);
        assert!(h.certified);
    }

    #[test]
    fn planar_system_on_an_axis() {
        let flat = |t: i64| {
            Similitude::homothety(Scalar::ratio(1, 5), Point::from_ratios(&[(t, 5), (0, 1)])).unwrap()
        };
        let sys = IfsSystem::new(vec![flat(0), flat(3), flat(4)]).unwrap();
        for depth in 1..=3 {
            let h = affine_hull(&sys, depth);
            assert_eq!(h.dim(), 1);
            assert!(h.certified);
            assert_eq!(h.directions[0], Point::from_ratios(&[(1, 1), (0, 1)]));
        }
        let reduced = conjugate_to_hull(&sys, &affine_hull(&sys, 2)).unwrap();
        assert_eq!(reduced, catalog::touching_fifths());
        let h = affine_hull(&sys, 2);
        assert!(h.contains_point(&Point::from_ratios(&[(7, 3), (0, 1)])));
        assert!(!h.contains_point(&Point::from_ratios(&[(0, 1), (1, 9)])));
        assert!(h.same_span(&affine_hull(&sys, 1)));
    }
}
