use crate::linalg::Point;
use crate::scalar::{Mode, Scalar};
use crate::similitude::Similitude;
use crate::system::IfsSystem;
use std::fmt;

/// Closed Euclidean ball; in interval mode the radius upper endpoint is authoritative.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    center: Point,
    radius: Scalar,
}

impl Ball {
    pub fn new(center: Point, radius: Scalar) -> Self {
        debug_assert!(radius.upper_f64() >= 0.0);
        Ball { center, radius }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Scalar {
        &self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Image under a similitude: a ball again, radius scaled by the ratio.
    pub fn image(&self, f: &Similitude) -> Ball {
        Ball {
            center: f.map_point(&self.center),
            radius: f.ratio() * &self.radius,
        }
    }

    /// Lower bound on the distance between any point of `self` and any point of `other`
    /// (negative when the balls may overlap).
    pub fn gap(&self, other: &Ball) -> Scalar {
        let d = self.center.sub(&other.center).norm_lower();
        d - &self.radius - &other.radius
    }

    /// Upper bound on the distance between any two points of `self ∪ other`.
    pub fn extent(&self, other: &Ball) -> Scalar {
        let d = self.center.sub(&other.center).norm_upper();
        d + &self.radius + &other.radius
    }

    /// Certifies that `p` lies in the ball.
    pub fn contains_point(&self, p: &Point) -> bool {
        self.center.sub(p).norm_upper().le_certified(&self.radius)
    }

    /// Certifies that `p` lies outside the ball.
    pub fn excludes_point(&self, p: &Point) -> bool {
        self.radius.lt_certified(&self.center.sub(p).norm_lower())
    }

    /// Certifies `other ⊆ self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        let reach = self.center.sub(&other.center).norm_upper() + &other.radius;
        reach.le_certified(&self.radius)
    }

    pub fn in_mode(&self, mode: Mode) -> Ball {
        Ball {
            center: self.center.in_mode(mode),
            radius: self.radius.in_mode(mode),
        }
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.center, self.radius)
    }
}

/// Radius making `B(c, R)` invariant: `R ≥ |φ_i(c) − c| / (1 − ρ_i)` for every map.
fn invariant_radius(sys: &IfsSystem, c: &Point, uniform_ratio: Option<&Scalar>) -> Scalar {
    let one = Scalar::one(sys.mode());
    sys.maps()
        .iter()
        .map(|m| {
            let shift = m.map_point(c).sub(c).norm_upper();
            let rho = uniform_ratio.unwrap_or(m.ratio());
            shift / (&one - rho)
        })
        .reduce(|a, b| a.max_of(&b))
        .expect("nonempty system")
}

/// `B(c, R)` with `c` the fixed point of the first map and
/// `R = max_i |φ_i(c) − c| / (1 − ρ_max)`.
pub fn invariant_ball(sys: &IfsSystem) -> Ball {
    let c = sys.map(0).fixed_point();
    let rho_max = sys.max_ratio();
    let radius = invariant_radius(sys, &c, Some(&rho_max));
    Ball::new(c, radius)
}

/// A usually smaller invariant ball centred on the middle of the fixed points'
/// bounding box, with radius chosen map by map.
pub fn tight_ball(sys: &IfsSystem) -> Ball {
    let fixed = sys.fixed_points();
    let c = match sys.mode() {
        Mode::Exact => {
            let coords = (0..sys.dim())
                .map(|k| {
                    let lo = fixed.iter().map(|p| p.coords()[k].clone()).reduce(|a, b| a.min_of(&b));
                    let hi = fixed.iter().map(|p| p.coords()[k].clone()).reduce(|a, b| a.max_of(&b));
                    (lo.expect("nonempty") + hi.expect("nonempty")) / Scalar::integer(2)
                })
                .collect();
            Point::new(coords)
        }
        Mode::Interval => {
            // any center is valid; the radius below is computed rigorously
            let coords = (0..sys.dim())
                .map(|k| {
                    let lo = fixed.iter().map(|p| p.coords()[k].to_f64()).fold(f64::INFINITY, f64::min);
                    let hi = fixed.iter().map(|p| p.coords()[k].to_f64()).fold(f64::NEG_INFINITY, f64::max);
                    Scalar::Interval(crate::interval::Interval::point(lo + (hi - lo) / 2.0))
                })
                .collect();
            Point::new(coords)
        }
    };
    let radius = invariant_radius(sys, &c, None);
    Ball::new(c, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn formula_balls() {
        let b = invariant_ball(&catalog::touching_fifths());
        assert_eq!(b.center(), &Point::from_ratios(&[(0, 1)]));
        assert_eq!(b.radius(), &Scalar::integer(1));
        let b = invariant_ball(&catalog::cantor_quarters());
        assert_eq!(b.radius(), &Scalar::integer(1));
        let b = invariant_ball(&catalog::collapsed());
        assert_eq!(b.radius(), &Scalar::integer(0));
    }

    #[test]
    fn balls_are_invariant() {
        for sys in [catalog::touching_fifths(), catalog::cantor_quarters(), catalog::halves()] {
            for b in [invariant_ball(&sys), tight_ball(&sys)] {
                for m in sys.maps() {
                    assert!(b.contains_ball(&b.image(m)));
                }
            }
        }
    }

    #[test]
    fn tight_ball_is_the_hull_in_one_dimension() {
        let b = tight_ball(&catalog::touching_fifths());
        assert_eq!(b.center(), &Point::from_ratios(&[(1, 2)]));
        assert_eq!(b.radius(), &Scalar::ratio(1, 2));
    }
}
