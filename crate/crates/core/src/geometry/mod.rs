//! Support function, exposed faces, and boundary meshes of W.

pub mod direction;
pub mod hull;
pub mod mesh;
pub mod oracle;
pub mod support;

pub use direction::{fibonacci_sphere, jittered_sphere, random_directions, Direction};
pub use mesh::{sample_boundary, sample_with, BoundaryMesh};
pub use oracle::{oracle_by_name, oracle_names, OracleAnswer, SupportOracle, WOracle};
pub use support::{
    face_dimension, measure, measure_vector, min_eigenspace, support, support_value, SupportResult,
};
