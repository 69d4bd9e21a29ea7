//! Proptest strategies shared by the property suites.
#![allow(dead_code)]

use jnr_core::geometry::direction::Direction;
use jnr_core::linalg::hermitian::{CMatrix, DensityMatrix, HermitianMatrix, MatrixTriple};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn cmatrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n)
        .prop_map(move |v| CMatrix::from_fn(n, n, |i, j| Complex64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1])))
}

pub fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    cmatrix(n).prop_map(|m| HermitianMatrix::new((&m + m.adjoint()) * Complex64::new(0.5, 0.0)).unwrap())
}

pub fn triple(n: usize) -> impl Strategy<Value = MatrixTriple> {
    (hermitian(n), hermitian(n), hermitian(n)).prop_map(|(a, b, c)| MatrixTriple::new(a, b, c).unwrap())
}

pub fn unitary(n: usize) -> impl Strategy<Value = CMatrix> {
    cmatrix(n).prop_map(move |m| (m + CMatrix::identity(n, n)).qr().q())
}

pub fn density(n: usize) -> impl Strategy<Value = DensityMatrix> {
    cmatrix(n).prop_map(|m| {
        let r = &m * m.adjoint();
        let t = r.trace().re;
        DensityMatrix::new(HermitianMatrix::new(r / Complex64::new(t, 0.0)).unwrap()).unwrap()
    })
}

pub fn direction() -> impl Strategy<Value = Direction> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
        .prop_filter("away from zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| Direction::new(v).unwrap())
}

/// `U* a U`.
pub fn conjugate(a: &HermitianMatrix, u: &CMatrix) -> HermitianMatrix {
    HermitianMatrix::new(u.adjoint() * a.matrix() * u).unwrap()
}
