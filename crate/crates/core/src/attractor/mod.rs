//! Certified geometry of attractors: enclosing balls, cylinder covers,
//! periodic points and distance bounds.

mod ball;
mod cover;
mod distance;
mod evidence;
mod hausdorff;
mod hull;
mod periodic;

pub use ball::{invariant_ball, tight_ball, Ball};
pub use cover::{adaptive_cover, refine_cover, refine_cover_from, CoverEntry, CylinderCover, SampledCylinder};
pub use distance::{diameter_bounds, distance_between, set_distance, DiameterBounds, DistanceBounds};
pub use evidence::{same_attractor_evidence, AttractorEvidence, SAME_ATTRACTOR_TOLERANCE};
pub use hausdorff::{hausdorff_bounds, hausdorff_distance_bound, HausdorffBounds};
pub use hull::{affine_hull, conjugate_to_hull, AffineHull};
pub use periodic::{periodic_point, Address, AttractorContext, Witness};
