use super::ssc::SscVerdict;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::Point;
use crate::scalar::{Mode, Scalar};
use crate::similitude::Similitude;
use crate::system::IfsSystem;
use num_rational::BigRational;
use serde::Serialize;

/// Axis-aligned open box `∏ (lo_k, hi_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenBox {
    pub lo: Vec<Scalar>,
    pub hi: Vec<Scalar>,
}

impl OpenBox {
    pub fn new(lo: Vec<Scalar>, hi: Vec<Scalar>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !a.lt_certified(b)) {
            return Err(Error::Precondition("open box must be nonempty".into()));
        }
        Ok(OpenBox { lo, hi })
    }

    /// The open interval `(a, b)` on the line.
    pub fn interval(a: Scalar, b: Scalar) -> Result<Self> {
        OpenBox::new(vec![a], vec![b])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
struct RationalBox {
    lo: Vec<BigRational>,
    hi: Vec<BigRational>,
}

impl RationalBox {
    fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a >= b)
    }

    fn disjoint(&self, other: &RationalBox) -> bool {
        self.is_empty()
            || other.is_empty()
            || (0..self.lo.len()).any(|k| self.hi[k] <= other.lo[k] || other.hi[k] <= self.lo[k])
    }
}

fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite bound")
}

/// Largest rational box inside `b` (used for the target set).
fn inner(b: &OpenBox) -> RationalBox {
    let pick = |s: &Scalar, low: bool| match s {
        Scalar::Exact(q) => q.clone(),
        Scalar::Interval(iv) => to_rational(if low { iv.hi() } else { iv.lo() }),
    };
    RationalBox {
        lo: b.lo.iter().map(|s| pick(s, true)).collect(),
        hi: b.hi.iter().map(|s| pick(s, false)).collect(),
    }
}

/// Smallest rational box enclosing `b` (used for images).
fn outer(b: &OpenBox) -> RationalBox {
    let pick = |s: &Scalar, low: bool| match s {
        Scalar::Exact(q) => q.clone(),
        Scalar::Interval(iv) => to_rational(if low { iv.lo() } else { iv.hi() }),
    };
    RationalBox {
        lo: b.lo.iter().map(|s| pick(s, true)).collect(),
        hi: b.hi.iter().map(|s| pick(s, false)).collect(),
    }
}

/// Exact image of a box under a signed-permutation similitude.
fn exact_image(f: &Similitude, b: &RationalBox) -> RationalBox {
    let perm = f.orthogonal().signed_permutation().expect("checked by caller");
    let rho = f.ratio().as_rational().expect("exact").clone();
    let mut lo = Vec::with_capacity(perm.len());
    let mut hi = Vec::with_capacity(perm.len());
    for (r, &(c, neg)) in perm.iter().enumerate() {
        let a = f.translation().coords()[r].as_rational().expect("exact").clone();
        let (l, h) = if neg {
            (-b.hi[c].clone(), -b.lo[c].clone())
        } else {
            (b.lo[c].clone(), b.hi[c].clone())
        };
        lo.push(&rho * l + &a);
        hi.push(&rho * h + &a);
    }
    RationalBox { lo, hi }
}

/// Outward-rounded bounding box of the image under any similitude.
fn enclosing_image(f: &Similitude, b: &RationalBox) -> RationalBox {
    let d = b.lo.len();
    let half = Scalar::Interval(Interval::point(0.5));
    let mid: Vec<Scalar> = (0..d)
        .map(|k| {
            let lo = Scalar::Interval(Interval::from_rational(&b.lo[k]));
            let hi = Scalar::Interval(Interval::from_rational(&b.hi[k]));
            (&lo + &hi) * &half
        })
        .collect();
    let radius: Vec<Interval> = (0..d)
        .map(|k| {
            let lo = Interval::from_rational(&b.lo[k]);
            let hi = Interval::from_rational(&b.hi[k]);
            hi.sub(&lo).mul(&Interval::point(0.5))
        })
        .collect();
    let f = f.in_mode(Mode::Interval);
    let center = f.map_point(&Point::new(mid));
    let rho = f.ratio().to_interval();
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for r in 0..d {
        let mut spread = Interval::point(0.0);
        for (c, rad) in radius.iter().enumerate() {
            spread = spread.add(&f.orthogonal().entry(r, c).to_interval().abs().mul(rad));
        }
        let spread = spread.mul(&rho).hi();
        let c = center.coords()[r].to_interval();
        lo.push(to_rational(Interval::point(c.lo()).sub(&Interval::point(spread)).lo()));
        hi.push(to_rational(Interval::point(c.hi()).add(&Interval::point(spread)).hi()));
    }
    RationalBox { lo, hi }
}

/// Cells of the grid induced by all box faces inside `b`: open slabs between
/// consecutive coordinates and the coordinates themselves.
fn contained_in_union(b: &RationalBox, union: &[RationalBox]) -> bool {
    if b.is_empty() {
        return true;
    }
    let d = b.lo.len();
    let mut axes: Vec<Vec<(BigRational, BigRational, bool)>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut cuts = vec![b.lo[k].clone(), b.hi[k].clone()];
        for u in union {
            for v in [&u.lo[k], &u.hi[k]] {
                if *v > b.lo[k] && *v < b.hi[k] {
                    cuts.push(v.clone());
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut cells = Vec::new();
        for t in 0..cuts.len() - 1 {
            if t > 0 {
                cells.push((cuts[t].clone(), cuts[t].clone(), true));
            }
            cells.push((cuts[t].clone(), cuts[t + 1].clone(), false));
        }
        axes.push(cells);
    }
    let mut index = vec![0usize; d];
    loop {
        let covered = union.iter().any(|u| {
            (0..d).all(|k| {
                let (a, z, point) = &axes[k][index[k]];
                if *point {
                    u.lo[k] < *a && *a < u.hi[k]
                } else {
                    u.lo[k] <= *a && *z <= u.hi[k]
                }
            })
        });
        if !covered {
            return false;
        }
        let mut k = 0;
        loop {
            if k == d {
                return true;
            }
            index[k] += 1;
            if index[k] < axes[k].len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscCertificate {
    pub holds: bool,
    /// Human-readable reasons when `holds` is false.
    pub failures: Vec<String>,
}

/// Checks `φ_i(U) ⊆ U` and pairwise disjointness of the open images for a finite union of boxes.
pub fn check_osc_witness(sys: &IfsSystem, union: &[OpenBox]) -> Result<OscCertificate> {
    if union.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(b) = union.iter().find(|b| b.dim() != sys.dim()) {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: b.dim(),
        });
    }
    let exact = sys.mode() == Mode::Exact;
    if exact {
        if let Some(i) = sys.maps().iter().position(|m| !m.orthogonal().is_signed_permutation()) {
            return Err(Error::UnsupportedWitnessShape(format!(
                "map {} rotates boxes into non-boxes; use interval mode",
                i + 1
            )));
        }
    }
    let targets: Vec<RationalBox> = union.iter().map(inner).collect();
    let sources: Vec<RationalBox> = union.iter().map(outer).collect();
    let images: Vec<Vec<RationalBox>> = sys
        .maps()
        .iter()
        .map(|f| {
            sources
                .iter()
                .map(|b| if exact { exact_image(f, b) } else { enclosing_image(f, b) })
                .collect()
        })
        .collect();
    let mut failures = Vec::new();
    for (i, boxes) in images.iter().enumerate() {
        if !boxes.iter().all(|b| contained_in_union(b, &targets)) {
            failures.push(format!("φ_{}(U) is not contained in U", i + 1));
        }
    }
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let clash = images[i]
                .iter()
                .any(|a| images[j].iter().any(|b| !a.disjoint(b)));
            if clash {
                failures.push(format!("φ_{}(U) and φ_{}(U) overlap", i + 1, j + 1));
            }
        }
    }
    Ok(OscCertificate {
        holds: failures.is_empty(),
        failures,
    })
}

/// The open set `V_ε(E)` built from a certified SSC gap.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighbourhoodWitness {
    pub epsilon: Scalar,
    pub description: String,
}

/// `ε = δ/3`: then `φ_i(V_ε(E)) = V_{ρ_i ε}(φ_i(E)) ⊆ V_ε(E)`, and the images are
/// disjoint because `2ε < δ`.
pub fn osc_witness_from_ssc(sys: &IfsSystem, verdict: &SscVerdict) -> Result<NeighbourhoodWitness> {
    let delta = verdict.delta().ok_or(Error::NotSsc)?;
    if !delta.is_positive_certified() {
        return Err(Error::NotSsc);
    }
    let epsilon = delta / &Scalar::integer(3).in_mode(delta.mode());
    let description = format!(
        "U = V_ε(E) with ε = {epsilon}; φ_i(U) = V_(ρ_i·ε)(φ_i(E)) ⊆ U for all {} maps, \
         and images are pairwise disjoint since 2ε < δ = {delta}",
        sys.len()
    );
    Ok(NeighbourhoodWitness { epsilon, description })
}
