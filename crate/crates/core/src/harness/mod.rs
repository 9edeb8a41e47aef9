//! The band-normalization pipeline: gap, band, cells, quotients, the
//! decomposition identity and monotone chains, assembled into a trace.

mod band;
mod cells;
mod chain;
mod decomposition;
mod quotient;
mod trace;

pub use band::{band_exponent, band_for, choose_band, normalize_into_band, BandParams, MAX_BAND_POWER, MAX_ELL};
pub use cells::{partition_cells, CellPartition};
pub use chain::{power_chain, ChainLink, PowerChain};
pub use decomposition::{decomposition_check, vector_residual, DecompositionReport};
pub use quotient::{quotient_ifs, quotients};
pub use trace::{contradiction_trace, CellTrace, HarnessReport, HarnessStatus, Stage, StageOutcome, MAXIMALITY_NOTE};
