//! Small real dense helpers on top of nalgebra.

use nalgebra::DMatrix;

use super::hermitian::{c, CMatrix, HermitianMatrix};

pub type RMatrix = DMatrix<f64>;

/// Singular values in descending order.
pub fn singular_values(m: &RMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel * max(σ₁, floor)`.
pub fn relative_rank(m: &RMatrix, rel: f64, floor: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0).max(floor);
    s.iter().filter(|&&x| x > rel * top).count()
}

/// Orthonormal basis of the traceless hermitian r×r matrices with respect to
/// the Frobenius inner product (generalized Gell-Mann matrices).
pub fn traceless_basis(r: usize) -> Vec<HermitianMatrix> {
    let mut out = Vec::with_capacity(r * r - 1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..r {
        for j in (i + 1)..r {
            let mut m = CMatrix::zeros(r, r);
            m[(i, j)] = c(s, 0.0);
            m[(j, i)] = c(s, 0.0);
            out.push(HermitianMatrix::symmetrized(m));
            let mut m = CMatrix::zeros(r, r);
            m[(i, j)] = c(0.0, -s);
            m[(j, i)] = c(0.0, s);
            out.push(HermitianMatrix::symmetrized(m));
        }
    }
    for k in 1..r {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut d = vec![0.0; r];
        for x in d.iter_mut().take(k) {
            *x = 1.0 / norm;
        }
        d[k] = -(k as f64) / norm;
        out.push(HermitianMatrix::diag(&d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ops::frobenius_inner;

    #[test]
    fn gell_mann_orthonormal() {
        for r in 2..=4 {
            let b = traceless_basis(r);
            assert_eq!(b.len(), r * r - 1);
            for (i, x) in b.iter().enumerate() {
                assert!(x.trace().abs() < 1e-15);
                for (j, y) in b.iter().enumerate() {
                    let g = frobenius_inner(x, y).unwrap();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rank_of_outer_product() {
        let m = RMatrix::from_fn(3, 4, |i, j| (i + 1) as f64 * (j as f64 - 1.5));
        assert_eq!(relative_rank(&m, 1e-10, 1e-300), 1);
        assert_eq!(relative_rank(&RMatrix::zeros(3, 3), 1e-10, 1.0), 0);
    }
}
