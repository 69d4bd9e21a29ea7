//! Dense complex hermitian linear algebra for matrices of order at most five.

pub mod eigen;
pub mod hermitian;
pub mod ops;
pub mod poly;
pub mod real;

pub use eigen::{eigh, hermitian_eig, EigenDecomposition};
pub use hermitian::{fro_norm, CMatrix, CVector, DensityMatrix, HermitianMatrix, MatrixTriple};
pub use ops::{
    commutator, complement_basis, compress, frobenius_inner, kron, numerical_rank,
    partial_transpose, principal_minor, principal_minors,
};
