//! Shape classes of 3×3 numerical ranges and the fifteen-class signature.

pub mod shape;
pub mod signature;

pub use shape::{classify_reducible, classify_shape, ellipse_test, is_unitarily_irreducible, loaf_test, EllipseShape, ShapeClass};
pub use signature::{classify_jnr, classify_with_census, ClassSignature, TABLE};
