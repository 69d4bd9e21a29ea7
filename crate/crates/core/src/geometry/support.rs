//! Measure map, support function and exposed faces of W.

use serde::{Deserialize, Serialize};

use super::direction::Direction;
use crate::error::{JnrError, Result};
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{CMatrix, CVector, DensityMatrix, MatrixTriple};
use crate::linalg::ops::{compress_unchecked, inner};
use crate::linalg::real::{relative_rank, traceless_basis, RMatrix};
use crate::settings::Settings;

/// `(tr ρA₁, tr ρA₂, tr ρA₃)`.
pub fn measure(triple: &MatrixTriple, rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.n() != triple.n() {
        return Err(JnrError::DimensionMismatch {
            expected: triple.n(),
            found: rho.n(),
        });
    }
    let r = rho.matrix().matrix();
    let mut x = [0.0; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = inner(r, triple.get(i).matrix());
    }
    Ok(x)
}

/// Image of the pure state of a unit vector.
pub fn measure_vector(triple: &MatrixTriple, v: &CVector) -> [f64; 3] {
    let mut x = [0.0; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = v.dotc(&(triple.get(i).matrix() * v)).re;
    }
    x
}

/// One supporting hyperplane of W together with its exposed face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportResult {
    pub direction: Direction,
    /// Minimum of `<x, u>` over W.
    pub support_value: f64,
    /// Dimension of the lowest eigenspace of the pencil.
    pub multiplicity: usize,
    /// Image of one minimizing pure state.
    pub point: [f64; 3],
    /// Affine dimension of the exposed face.
    pub face_dim: usize,
}

/// Lowest eigenvalue of `u·A` and an orthonormal basis of its cluster.
pub fn min_eigenspace(triple: &MatrixTriple, u: &Direction, settings: &Settings) -> (f64, CMatrix) {
    let p = triple.pencil(u.u());
    let e = eigh(p.matrix());
    let m = e.low_cluster(settings.cluster_tol, p.norm());
    (e.values[0], e.columns(0, m))
}

pub fn support(triple: &MatrixTriple, u: &Direction, settings: &Settings) -> SupportResult {
    let (value, basis) = min_eigenspace(triple, u, settings);
    let v = basis.column(0).into_owned();
    let face_dim = face_dimension(triple, &basis, settings.face_dim_tol).unwrap_or(0);
    SupportResult {
        direction: *u,
        support_value: value,
        multiplicity: basis.ncols(),
        point: measure_vector(triple, &v),
        face_dim,
    }
}

/// Lowest eigenvalue of the pencil only.
pub fn support_value(triple: &MatrixTriple, u: &Direction) -> f64 {
    eigh(triple.pencil(u.u()).matrix()).values[0]
}

/// Affine parametrization of `w(D)` for states supported on span(basis):
/// the image of `1/r + sum x_k E_k` is `center + map * x`.
pub fn face_map(triple: &MatrixTriple, basis: &CMatrix) -> ([f64; 3], RMatrix) {
    let r = basis.ncols();
    let comp: Vec<_> = (0..3).map(|i| compress_unchecked(triple.get(i), basis)).collect();
    let mut center = [0.0; 3];
    for i in 0..3 {
        center[i] = comp[i].trace() / r as f64;
    }
    let gm = traceless_basis(r);
    let mut map = RMatrix::zeros(3, gm.len());
    for (k, e) in gm.iter().enumerate() {
        for i in 0..3 {
            map[(i, k)] = inner(comp[i].matrix(), e.matrix());
        }
    }
    (center, map)
}

/// Affine dimension of the face `w(D)` for states supported on span(basis).
pub fn face_dimension(triple: &MatrixTriple, basis: &CMatrix, tol: f64) -> Result<usize> {
    if basis.ncols() == 0 {
        return Err(JnrError::Degenerate("empty eigenspace basis".into()));
    }
    if basis.ncols() == 1 {
        return Ok(0);
    }
    let (_, map) = face_map(triple, basis);
    Ok(relative_rank(&map, tol, triple.scale()))
}

/// Minimizer and maximizer of `<x, d>` over the face spanned by `basis`.
pub fn face_extremes(triple: &MatrixTriple, basis: &CMatrix, d: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let p = triple.pencil(d);
    let c = compress_unchecked(&p, basis);
    let e = eigh(c.matrix());
    let r = basis.ncols();
    let lo = basis * e.vector(0);
    let hi = basis * e.vector(r - 1);
    (measure_vector(triple, &lo), measure_vector(triple, &hi))
}

/// Endpoints of a one-dimensional face.
pub fn segment_endpoints(triple: &MatrixTriple, basis: &CMatrix) -> ([f64; 3], [f64; 3]) {
    let (_, map) = face_map(triple, basis);
    let svd = map.svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let (mut best, mut idx) = (-1.0, 0);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > best {
            best = s;
            idx = k;
        }
    }
    let d = [u[(0, idx)], u[(1, idx)], u[(2, idx)]];
    face_extremes(triple, basis, &d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::direction::dist;
    use crate::linalg::hermitian::HermitianMatrix;

    fn e14() -> MatrixTriple {
        MatrixTriple::new(
            HermitianMatrix::diag(&[1.0, 1.0, -1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, -1.0, 1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, -1.0, -1.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn measure_basis_and_mixed() {
        let t = e14();
        let mut v = CVector::zeros(4);
        v[0] = num_complex::Complex64::new(1.0, 0.0);
        let rho = DensityMatrix::pure(&v).unwrap();
        assert_eq!(measure(&t, &rho).unwrap(), [1.0, 1.0, 1.0]);
        let mixed = DensityMatrix::maximally_mixed(4);
        assert_eq!(measure(&t, &mixed).unwrap(), [0.0, 0.0, 0.0]);
        assert!(measure(&t, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn tetrahedron_edge_face() {
        let t = e14();
        let s = Settings::default();
        let r = support(&t, &Direction::axis(0), &s);
        assert_eq!(r.support_value, -1.0);
        assert_eq!(r.multiplicity, 2);
        assert_eq!(r.face_dim, 1);
        let (_, basis) = min_eigenspace(&t, &Direction::axis(0), &s);
        let (a, b) = segment_endpoints(&t, &basis);
        let want = [[-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
        assert!(want.iter().any(|w| dist(w, &a) < 1e-12));
        assert!(want.iter().any(|w| dist(w, &b) < 1e-12));
    }

    #[test]
    fn zero_triple_support() {
        let z = HermitianMatrix::zeros(4);
        let t = MatrixTriple::new(z.clone(), z.clone(), z).unwrap();
        let r = support(&t, &Direction::new([1.0, 2.0, 3.0]).unwrap(), &Settings::default());
        assert_eq!(r.support_value, 0.0);
        assert_eq!(r.point, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn singleton_face_dim() {
        let t = e14();
        let mut b = CMatrix::zeros(4, 1);
        b[(2, 0)] = num_complex::Complex64::new(1.0, 0.0);
        assert_eq!(face_dimension(&t, &b, 1e-7).unwrap(), 0);
        assert!(face_dimension(&t, &CMatrix::zeros(4, 0), 1e-7).is_err());
    }
}
