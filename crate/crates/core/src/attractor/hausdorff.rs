use super::ball::tight_ball;
use super::cover::{adaptive_cover, SampledCylinder};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::Point;
use crate::scalar::{Mode, Scalar};
use crate::system::IfsSystem;
use num_rational::BigRational;

/// Two-sided enclosure of the Hausdorff distance between two attractors.
#[derive(Clone, Debug, PartialEq)]
pub struct HausdorffBounds {
    pub lower: Scalar,
    pub upper: Scalar,
    /// Ratio products of the cover cylinders are at most this.
    pub resolution: Scalar,
    pub cylinders: (usize, usize),
}

/// Upper bound on `d_H(E_Φ, E_Ψ)` from covers refined to ratio `ρ_max^depth`.
pub fn hausdorff_distance_bound(phi: &IfsSystem, psi: &IfsSystem, depth: usize) -> Result<Scalar> {
    Ok(hausdorff_bounds(phi, psi, depth, &Budget::default())?.upper)
}

/// Both bounds. Each side is covered by cylinders whose ratio product is at
/// most `ρ_max^depth`, with `ρ_max` taken over both systems, and each cylinder
/// carries the image of `fix φ_1` as a point of its attractor.
pub fn hausdorff_bounds(phi: &IfsSystem, psi: &IfsSystem, depth: usize, budget: &Budget) -> Result<HausdorffBounds> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    let rho = phi.max_ratio().max_of(&psi.max_ratio());
    let resolution = rho.pow(depth as u32);
    let cover = |sys: &IfsSystem| {
        let sample = sys.map(0).fixed_point();
        adaptive_cover(sys, &tight_ball(sys), &sample, &resolution, budget.max_cover)
    };
    let ca = cover(phi)?;
    let cb = cover(psi)?;
    let upper = directed_upper(&ca, &cb).max_of(&directed_upper(&cb, &ca));
    let lower = directed_lower(&ca, &cb).max(directed_lower(&cb, &ca)).max(0.0);
    let exact = phi.mode() == Mode::Exact && psi.mode() == Mode::Exact;
    let lower = if exact {
        Scalar::Exact(BigRational::from_float(lower).expect("finite"))
    } else {
        Scalar::Interval(Interval::point(lower))
    };
    let upper = match upper {
        Scalar::Interval(iv) => Scalar::Interval(Interval::point(iv.hi())),
        exact => exact,
    };
    Ok(HausdorffBounds {
        lower,
        upper,
        resolution,
        cylinders: (ca.len(), cb.len()),
    })
}

/// Points sorted by first coordinate for nearest-neighbour scans.
struct SortedSamples {
    order: Vec<usize>,
    keys: Vec<f64>,
    coords: Vec<Vec<f64>>,
}

impl SortedSamples {
    fn new(points: impl Iterator<Item = Vec<f64>>) -> Self {
        let coords: Vec<Vec<f64>> = points.collect();
        let mut order: Vec<usize> = (0..coords.len()).collect();
        order.sort_by(|&i, &j| coords[i][0].total_cmp(&coords[j][0]).then(i.cmp(&j)));
        let keys = order.iter().map(|&i| coords[i][0]).collect();
        SortedSamples { order, keys, coords }
    }

    /// Visits candidates outward from `x0` until `stop(|Δx0|)` says the rest cannot help.
    fn scan(&self, x0: f64, mut visit: impl FnMut(usize) -> f64, slack: f64) {
        let start = self.keys.partition_point(|&k| k < x0);
        let mut best = f64::INFINITY;
        let (mut lo, mut hi) = (start, start);
        loop {
            let left = (lo > 0).then(|| x0 - self.keys[lo - 1]);
            let right = (hi < self.keys.len()).then(|| self.keys[hi] - x0);
            let take_left = match (left, right) {
                (None, None) => break,
                (Some(l), Some(r)) => l <= r,
                (Some(_), None) => true,
                (None, Some(_)) => false,
            };
            let gap = if take_left { left.unwrap() } else { right.unwrap() };
            if gap - slack > best {
                break;
            }
            let idx = if take_left {
                lo -= 1;
                self.order[lo]
            } else {
                hi += 1;
                self.order[hi - 1]
            };
            best = best.min(visit(idx));
        }
    }

    fn nearest(&self, p: &[f64]) -> usize {
        let mut best = (f64::INFINITY, 0usize);
        self.scan(
            p[0],
            |i| {
                let d = dist_f64(p, &self.coords[i]);
                if d < best.0 || (d == best.0 && i < best.1) {
                    best = (d, i);
                }
                d
            },
            0.0,
        );
        best.1
    }
}

fn dist_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `sup_{x ∈ E_from} d(x, E_to)` from above: a point `x` of cylinder `w` is within
/// `r_w + |c_w − p_w|` of the sample `p_w`, which is within `|p_w − q|` of a sample of `E_to`.
fn directed_upper(from: &[SampledCylinder], to: &[SampledCylinder]) -> Scalar {
    let index = SortedSamples::new(to.iter().map(|c| c.sample.to_f64()));
    from.iter()
        .map(|c| {
            let q = &to[index.nearest(&c.sample.to_f64())].sample;
            let spread = c.ball.center().sub(&c.sample).norm_upper();
            c.ball.radius() + &spread + c.sample.sub(q).norm_upper()
        })
        .reduce(|a, b| a.max_of(&b))
        .expect("nonempty cover")
}

/// `sup_{x ∈ E_from} d(x, E_to)` from below, using sample points of `E_from`
/// against the balls covering `E_to`. Evaluated in interval arithmetic.
fn directed_lower(from: &[SampledCylinder], to: &[SampledCylinder]) -> f64 {
    let centers: Vec<Point> = to.iter().map(|c| c.ball.center().in_mode(Mode::Interval)).collect();
    let radii: Vec<Interval> = to.iter().map(|c| c.ball.radius().to_interval()).collect();
    let rmax = radii.iter().map(Interval::hi).fold(0.0, f64::max);
    let index = SortedSamples::new(centers.iter().map(Point::to_f64));
    let mut worst: f64 = 0.0;
    for c in from {
        let p = c.sample.in_mode(Mode::Interval);
        let pf = p.to_f64();
        let slack = rmax + 1e-9 * (1.0 + pf[0].abs());
        let mut best = f64::INFINITY;
        index.scan(
            pf[0],
            |i| {
                let d = p.sub(&centers[i]).norm_lower().to_interval().sub(&radii[i]).lo();
                best = best.min(d);
                best
            },
            slack,
        );
        worst = worst.max(best);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn same_attractor_bounds_shrink() {
        let f5 = catalog::touching_fifths();
        let f25 = f5.compose(&f5).unwrap();
        let mut prev = None;
        for depth in 1..=5 {
            let h = hausdorff_bounds(&f25, &f5, depth, &Budget::default()).unwrap();
            assert_eq!(h.lower, Scalar::integer(0));
            if let Some(p) = prev {
                assert!(h.upper.lt_certified(&p));
            }
            prev = Some(h.upper);
        }
    }

    #[test]
    fn different_attractors_stay_apart() {
        let h = hausdorff_bounds(&catalog::cantor_quarters(), &catalog::touching_fifths(), 4, &Budget::default()).unwrap();
        assert!(h.lower.is_positive_certified());
        assert!(h.lower.le_certified(&h.upper));
    }
}
