//! Certified computations for iterated function systems of similitudes.
//!
//! Scalars are either exact rationals or outward-rounded intervals; every
//! geometric answer is a certified bound or an explicit "undecided".

pub mod attractor;
pub mod budget;
pub mod catalog;
pub mod charvec;
pub mod dimension;
pub mod error;
pub mod harness;
pub mod interval;
pub mod linalg;
pub mod scalar;
pub mod separation;
pub mod similitude;
pub mod system;
pub mod word;

pub use budget::Budget;
pub use charvec::{compare, CharVec, OrderResult};
pub use error::{Error, Result};
pub use interval::Interval;
pub use linalg::{OrthogonalMap, Point};
pub use scalar::{Mode, Scalar};
pub use similitude::Similitude;
pub use system::{IfsSystem, OscAttribute};
pub use word::Word;
