//! Separable joint numerical range of two-qubit observables.

pub mod ppt;
pub mod seesaw;
pub mod sweep;
pub mod tangency;

pub use ppt::{ppt_margins, ppt_min, ppt_support};
pub use seesaw::{seesaw_min, seesaw_run, seesaw_support, ProductState, SeesawRun};
pub use sweep::{sample_sep_boundary, sep_support, PptOracle, SeesawOracle, SepSupportResult};
pub use tangency::{segment_probe, tangency_check, FlatKind, FlatRegion, ProbeThresholds, TangencyEntry, TangencyReport};
