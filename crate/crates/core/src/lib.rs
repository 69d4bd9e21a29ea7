//! Boundary structure of joint numerical ranges of hermitian matrix triples:
//! flat faces and their shapes, corner points, and the separable range for
//! two-qubit observables.

pub mod error;
pub mod linalg;
pub mod geometry;
pub mod separable;
pub mod faces;
pub mod classify;
pub mod corners;
pub mod fixtures;
pub mod settings;
pub mod report;
pub mod verify;

pub use error::{JnrError, Result};
pub use settings::Settings;
