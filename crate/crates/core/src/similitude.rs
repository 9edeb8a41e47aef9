use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{solve_exact, solve_f64, OrthogonalMap, Point};
use crate::scalar::{Mode, Scalar};
use std::fmt;

/// A contracting similitude `x ↦ ratio · R x + translation`.
#[derive(Clone, Debug, PartialEq)]
pub struct Similitude {
    ratio: Scalar,
    orthogonal: OrthogonalMap,
    translation: Point,
}

fn check_ratio(ratio: &Scalar) -> Result<()> {
    let positive = ratio.is_positive_certified();
    let below_one = ratio.lt_certified(&Scalar::one(ratio.mode()));
    if positive && below_one {
        Ok(())
    } else {
        Err(Error::InvalidRatio(ratio.to_string()))
    }
}

impl Similitude {
    pub fn new(ratio: Scalar, orthogonal: OrthogonalMap, translation: Point) -> Result<Self> {
        check_ratio(&ratio)?;
        if orthogonal.dim() != translation.dim() {
            return Err(Error::DimensionMismatch {
                expected: orthogonal.dim(),
                found: translation.dim(),
            });
        }
        let mode = if ratio.is_exact() && orthogonal.mode() == Mode::Exact && translation.is_exact() {
            Mode::Exact
        } else {
            Mode::Interval
        };
        Ok(Similitude {
            ratio: ratio.in_mode(mode),
            orthogonal: orthogonal.in_mode(mode),
            translation: translation.in_mode(mode),
        })
    }

    /// `x ↦ ratio·x + translation` (no rotation).
    pub fn homothety(ratio: Scalar, translation: Point) -> Result<Self> {
        let mode = if ratio.is_exact() && translation.is_exact() {
            Mode::Exact
        } else {
            Mode::Interval
        };
        let r = OrthogonalMap::identity(translation.dim(), mode);
        Similitude::new(ratio, r, translation)
    }

    /// One-dimensional exact map `x ↦ (num/den)·x + (tnum/tden)`.
    pub fn line(num: i64, den: i64, tnum: i64, tden: i64) -> Self {
        Similitude::homothety(Scalar::ratio(num, den), Point::from_ratios(&[(tnum, tden)]))
            .expect("valid one-dimensional similitude")
    }

    pub fn ratio(&self) -> &Scalar {
        &self.ratio
    }

    pub fn orthogonal(&self) -> &OrthogonalMap {
        &self.orthogonal
    }

    pub fn translation(&self) -> &Point {
        &self.translation
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn mode(&self) -> Mode {
        if self.ratio.is_exact() && self.translation.is_exact() && self.orthogonal.mode() == Mode::Exact {
            Mode::Exact
        } else {
            Mode::Interval
        }
    }

    pub fn in_mode(&self, mode: Mode) -> Similitude {
        Similitude {
            ratio: self.ratio.in_mode(mode),
            orthogonal: self.orthogonal.in_mode(mode),
            translation: self.translation.in_mode(mode),
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(self.map_point(x))
    }

    pub(crate) fn map_point(&self, x: &Point) -> Point {
        self.orthogonal
            .apply(x)
            .scale(&self.ratio)
            .add(&self.translation)
    }

    /// Image of a vector under the linear part `ratio · R`.
    pub(crate) fn map_vector(&self, v: &Point) -> Point {
        self.orthogonal.apply(v).scale(&self.ratio)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similitude) -> Result<Similitude> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Similitude {
            ratio: &self.ratio * &other.ratio,
            orthogonal: self.orthogonal.compose(&other.orthogonal),
            translation: self.map_point(&other.translation),
        })
    }

    /// `self⁻¹ ∘ other`, which must again contract.
    pub fn left_quotient(&self, other: &Similitude) -> Result<Similitude> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let ratio = &other.ratio / &self.ratio;
        check_ratio(&ratio).map_err(|_| Error::NotContracting(ratio.to_string()))?;
        let rt = self.orthogonal.transpose();
        let inv_ratio = self.ratio.recip();
        let translation = rt
            .apply(&other.translation.sub(&self.translation))
            .scale(&inv_ratio);
        Ok(Similitude {
            ratio,
            orthogonal: rt.compose(&other.orthogonal),
            translation,
        })
    }

    /// The unique fixed point, exactly in exact mode and as an enclosing box otherwise.
    pub fn fixed_point(&self) -> Point {
        let d = self.dim();
        if self.mode() == Mode::Exact {
            if let Some(perm) = self.orthogonal.signed_permutation() {
                if d == 1 {
                    let sign = if perm[0].1 { -Scalar::integer(1) } else { Scalar::integer(1) };
                    let denom = Scalar::integer(1) - &self.ratio * &sign;
                    return Point::new(vec![&self.translation.coords()[0] / &denom]);
                }
            }
            let a: Vec<Vec<Scalar>> = (0..d)
                .map(|r| {
                    (0..d)
                        .map(|c| {
                            let lin = &self.ratio * self.orthogonal.entry(r, c);
                            let id = Scalar::integer(if r == c { 1 } else { 0 });
                            id - lin
                        })
                        .collect()
                })
                .collect();
            let x = solve_exact(a, self.translation.coords().to_vec())
                .expect("I - ρR is invertible for ρ < 1");
            return Point::new(x);
        }
        self.fixed_point_enclosure()
    }

    /// Float solve plus the contraction bound |x* − x̃| ≤ |φ(x̃) − x̃| / (1 − ρ).
    fn fixed_point_enclosure(&self) -> Point {
        let d = self.dim();
        let rho = self.ratio.to_f64();
        let a: Vec<Vec<f64>> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| (if r == c { 1.0 } else { 0.0 }) - rho * self.orthogonal.entry(r, c).to_f64())
                    .collect()
            })
            .collect();
        let b = self.translation.to_f64();
        let approx = solve_f64(a, b).unwrap_or_else(|| vec![0.0; d]);
        let guess = Point::new(
            approx
                .iter()
                .map(|&v| Scalar::Interval(Interval::point(v)))
                .collect(),
        );
        let residual = self.map_point(&guess).sub(&guess).norm_upper().upper_f64();
        let slack = Interval::point(1.0).sub(&self.ratio.to_interval()).lo();
        let radius = Interval::point(residual).div(&Interval::point(slack)).hi();
        Point::new(
            approx
                .iter()
                .map(|&v| Scalar::Interval(Interval::point(v).inflate(radius)))
                .collect(),
        )
    }
}

impl fmt::Display for Similitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rot = if self.orthogonal.is_identity() { "" } else { "R" };
        write!(f, "x ↦ {}·{}x + {}", self.ratio, rot, self.translation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: i64, d: i64) -> Point {
        Point::from_ratios(&[(n, d)])
    }

    #[test]
    fn apply_examples() {
        let f = Similitude::line(1, 5, 0, 1);
        assert_eq!(f.apply(&pt(1, 1)).unwrap(), pt(1, 5));
        let g = Similitude::line(1, 5, 3, 5);
        assert_eq!(g.apply(&pt(0, 1)).unwrap(), pt(3, 5));
        let swap_neg = OrthogonalMap::from_rows(vec![
            vec![Scalar::integer(0), Scalar::integer(-1)],
            vec![Scalar::integer(1), Scalar::integer(0)],
        ])
        .unwrap();
        let h = Similitude::new(Scalar::ratio(1, 2), swap_neg, Point::from_ratios(&[(1, 1), (0, 1)])).unwrap();
        assert_eq!(
            h.apply(&Point::from_ratios(&[(0, 1), (0, 1)])).unwrap(),
            Point::from_ratios(&[(1, 1), (0, 1)])
        );
        assert!(matches!(
            h.apply(&pt(0, 1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let f = Similitude::line(1, 5, 0, 1);
        let g = Similitude::line(1, 5, 3, 5);
        assert_eq!(f.compose(&g).unwrap(), Similitude::line(1, 25, 3, 25));
        let f = Similitude::line(1, 5, 4, 5);
        let g = Similitude::line(1, 5, 0, 1);
        assert_eq!(f.compose(&g).unwrap(), Similitude::line(1, 25, 20, 25));
        let h = Similitude::line(1, 2, 0, 1);
        assert_eq!(h.compose(&h).unwrap(), Similitude::line(1, 4, 0, 1));
    }

    #[test]
    fn left_quotient_examples() {
        let f = Similitude::line(1, 4, 0, 1);
        let g = Similitude::line(1, 16, 0, 1);
        assert_eq!(f.left_quotient(&g).unwrap(), Similitude::line(1, 4, 0, 1));
        // f⁻¹(y) = 4y − 3, so f⁻¹((x+3)/16) = x/4 − 9/4 and f⁻¹((x+12)/16) = x/4
        let f = Similitude::line(1, 4, 3, 4);
        let g = Similitude::line(1, 16, 3, 16);
        assert_eq!(f.left_quotient(&g).unwrap(), Similitude::line(1, 4, -9, 4));
        let g = Similitude::line(1, 16, 12, 16);
        assert_eq!(f.left_quotient(&g).unwrap(), Similitude::line(1, 4, 0, 1));
        let f = Similitude::line(1, 4, 0, 1);
        let g = Similitude::line(1, 2, 0, 1);
        assert!(matches!(f.left_quotient(&g), Err(Error::NotContracting(_))));
    }

    #[test]
    fn ratio_validation() {
        let bad = Similitude::homothety(Scalar::ratio(5, 4), pt(0, 1));
        assert!(matches!(bad, Err(Error::InvalidRatio(_))));
        let bad = Similitude::homothety(Scalar::integer(1), pt(0, 1));
        assert!(bad.is_err());
    }

    #[test]
    fn fixed_points() {
        assert_eq!(Similitude::line(1, 5, 4, 5).fixed_point(), pt(1, 1));
        assert_eq!(Similitude::line(1, 4, 3, 4).fixed_point(), pt(1, 1));
        let r = OrthogonalMap::from_rows(vec![
            vec![Scalar::ratio(3, 5), Scalar::ratio(-4, 5)],
            vec![Scalar::ratio(4, 5), Scalar::ratio(3, 5)],
        ])
        .unwrap();
        let f = Similitude::new(Scalar::ratio(1, 2), r, Point::from_ratios(&[(1, 1), (1, 3)])).unwrap();
        let p = f.fixed_point();
        assert_eq!(f.apply(&p).unwrap(), p);
    }

    #[test]
    fn interval_fixed_point_encloses_exact() {
        let f = Similitude::line(1, 5, 3, 5);
        let fi = f.in_mode(Mode::Interval);
        let p = fi.fixed_point();
        let exact = f.fixed_point();
        assert!(p.coords()[0]
            .to_interval()
            .contains_rational(exact.coords()[0].as_rational().unwrap()));
    }
}
