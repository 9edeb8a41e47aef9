//! Similarity dimension: the root `s` of `Σ ρ_i^s = 1`.

use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::system::IfsSystem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::fmt;

/// Default enclosure width for the bisection in the non-homogeneous case.
pub const DEFAULT_WIDTH: f64 = 1e-12;

const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub enum SimilarityDimension {
    /// `N` maps of common ratio `ρ`: `s = ln N / ln(1/ρ)` and `ρ^s = 1/N` exactly.
    Homogeneous {
        maps: usize,
        ratio: Scalar,
        enclosure: Interval,
        /// `s` itself when it happens to be rational.
        exact: Option<BigRational>,
    },
    /// Certified bisection enclosure.
    General { enclosure: Interval },
}

impl SimilarityDimension {
    pub fn enclosure(&self) -> Interval {
        match self {
            SimilarityDimension::Homogeneous { enclosure, .. }
            | SimilarityDimension::General { enclosure } => *enclosure,
        }
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        match self {
            SimilarityDimension::Homogeneous { exact, .. } => exact.as_ref(),
            SimilarityDimension::General { .. } => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, SimilarityDimension::Homogeneous { .. })
    }

    pub fn midpoint(&self) -> f64 {
        self.enclosure().mid()
    }

    /// `r^s` for a ratio `r`; exactly `1/N` for the common ratio of a homogeneous system.
    pub fn weight(&self, r: &Scalar) -> Scalar {
        match self {
            SimilarityDimension::Homogeneous { maps, ratio, .. } if same_ratio(r, ratio) => {
                let w = BigRational::new(BigInt::one(), BigInt::from(*maps));
                match ratio {
                    Scalar::Exact(_) => Scalar::Exact(w),
                    Scalar::Interval(_) => Scalar::Interval(Interval::from_rational(&w)),
                }
            }
            _ => Scalar::Interval(power_enclosure(&r.to_interval(), &self.enclosure())),
        }
    }

    /// `r^s` for a ratio that is a power of the common ratio, kept exact where possible.
    pub fn weight_of_power(&self, k: u32) -> Option<Scalar> {
        match self {
            SimilarityDimension::Homogeneous { maps, ratio: Scalar::Exact(_), .. } => Some(Scalar::Exact(
                BigRational::new(BigInt::one(), BigInt::from(*maps).pow(k)),
            )),
            _ => None,
        }
    }
}

impl fmt::Display for SimilarityDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimilarityDimension::Homogeneous { exact: Some(q), .. } => write!(f, "{q}"),
            SimilarityDimension::Homogeneous { maps, ratio, enclosure, .. } => {
                write!(f, "log {maps} / log(1/({ratio})) ≈ {:.12}", enclosure.mid())
            }
            SimilarityDimension::General { enclosure } => write!(f, "{:.12} ± {:.1e}", enclosure.mid(), enclosure.width() / 2.0),
        }
    }
}

fn same_ratio(a: &Scalar, b: &Scalar) -> bool {
    if a.is_exact() && b.is_exact() {
        a == b
    } else {
        a.possibly_equal(b)
    }
}

/// `r^s = exp(s ln r)` enclosed.
fn power_enclosure(r: &Interval, s: &Interval) -> Interval {
    r.ln().mul(s).exp()
}

pub fn similarity_dimension(sys: &IfsSystem, width: f64) -> SimilarityDimension {
    let n = sys.len();
    let ln_n = Interval::point(n as f64).ln();
    if let Some(ratio) = sys.common_ratio() {
        let neg_ln_rho = ratio.ln().neg();
        let enclosure = ln_n.div(&neg_ln_rho);
        let exact = ratio.as_rational().and_then(|rho| rational_dimension(n, rho, enclosure.mid()));
        let enclosure = match &exact {
            Some(q) => Interval::from_rational(q),
            None => enclosure,
        };
        return SimilarityDimension::Homogeneous {
            maps: n,
            ratio: ratio.clone(),
            enclosure,
            exact,
        };
    }
    let ratios: Vec<Interval> = sys.ratios().map(Scalar::to_interval).collect();
    let rmin = ratios.iter().fold(Interval::point(1.0), |a, r| a.min(r));
    let rmax = ratios.iter().fold(Interval::point(0.0), |a, r| a.max(r));
    let mut lo = ln_n.div(&rmin.ln().neg()).lo();
    let mut hi = ln_n.div(&rmax.ln().neg()).hi();
    // f(s) = Σ r_i^s − 1 is strictly decreasing
    let excess = |s: f64| {
        let s = Interval::point(s);
        ratios
            .iter()
            .fold(Interval::point(0.0), |acc, r| acc.add(&power_enclosure(r, &s)))
            .sub(&Interval::point(1.0))
    };
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= width {
            break;
        }
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let f = excess(mid);
        if f.lo() > 0.0 {
            lo = mid;
        } else if f.hi() < 0.0 {
            hi = mid;
        } else {
            break;
        }
    }
    SimilarityDimension::General {
        enclosure: Interval::new(lo, hi),
    }
}

/// Finds `s = a/b` with `ρ^a = N^{−b}` when such a small fraction exists.
fn rational_dimension(n: usize, rho: &BigRational, estimate: f64) -> Option<BigRational> {
    let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
    for b in 1..=12u32 {
        let a = (estimate * b as f64).round();
        if !(1.0..=64.0).contains(&a) {
            continue;
        }
        let a = a.to_u32()?;
        if num_traits::pow(rho.clone(), a as usize) == num_traits::pow(inv_n.clone(), b as usize) {
            let q = BigRational::new(BigInt::from(a), BigInt::from(b));
            debug_assert!(q.is_positive());
            return Some(q);
        }
    }
    None
}
