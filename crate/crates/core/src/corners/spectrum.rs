//! Common eigenvectors of the three matrices.

use serde::Serialize;

use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{CMatrix, CVector, MatrixTriple};
use crate::linalg::ops::compress_unchecked;
use crate::settings::Settings;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointSpectrumPoint {
    pub lambda: [f64; 3],
    #[serde(skip)]
    pub vector: CVector,
    pub eigenspace_dim: usize,
    /// Orthonormal basis of the joint eigenspace.
    #[serde(skip)]
    pub basis: CMatrix,
}

impl JointSpectrumPoint {
    /// Largest of `‖A_i v − λ_i v‖ / ‖A_i‖` over the basis columns.
    pub fn residual(&self, triple: &MatrixTriple) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            let a = triple.get(i);
            let r = a.matrix() * &self.basis - &self.basis * crate::linalg::hermitian::c(self.lambda[i], 0.0);
            let nrm = a.norm();
            if nrm > 0.0 {
                worst = worst.max(crate::linalg::hermitian::fro_norm(&r) / nrm);
            }
        }
        worst
    }
}

/// Splits span(q) into the eigenspaces of the compression of `a`.
fn split(a: &crate::linalg::hermitian::HermitianMatrix, q: &CMatrix, tol: f64) -> Vec<(f64, CMatrix)> {
    let c = compress_unchecked(a, q);
    let e = eigh(c.matrix());
    let k = q.ncols();
    let mut out = Vec::new();
    let mut start = 0;
    for j in 1..=k {
        if j == k || e.values[j] - e.values[start] > tol {
            let v = q * e.columns(start, j);
            let mean = e.values[start..j].iter().sum::<f64>() / (j - start) as f64;
            out.push((mean, v));
            start = j;
        }
    }
    out
}

/// All joint eigenspaces, ordered by the eigenvalues of `A1`, then `A2`, then
/// `A3`. Each candidate is cut down to the exact joint eigenspace through the
/// null space of the stacked residual map.
pub fn joint_spectrum(triple: &MatrixTriple, settings: &Settings) -> Vec<JointSpectrumPoint> {
    let n = triple.n();
    let scale = triple.scale();
    let tol = settings.joint_tol * scale;
    let mut cands = vec![(Vec::<f64>::new(), CMatrix::identity(n, n))];
    for i in 0..3 {
        let mut next = Vec::new();
        for (lam, q) in cands {
            for (mu, v) in split(triple.get(i), &q, tol) {
                let mut l = lam.clone();
                l.push(mu);
                next.push((l, v));
            }
        }
        cands = next;
    }
    let mut out = Vec::new();
    for (lam, q) in cands {
        let lambda = [lam[0], lam[1], lam[2]];
        let k = q.ncols();
        let mut stacked = CMatrix::zeros(3 * n, k);
        for i in 0..3 {
            let r = triple.get(i).matrix() * &q - &q * crate::linalg::hermitian::c(lambda[i], 0.0);
            stacked.view_mut((i * n, 0), (n, k)).copy_from(&r);
        }
        let svd = stacked.svd(false, true);
        let vt = svd.v_t.expect("right singular vectors");
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&j| svd.singular_values[j] <= tol)
            .collect();
        if keep.is_empty() {
            continue;
        }
        let mut basis = CMatrix::zeros(n, keep.len());
        for (c, &j) in keep.iter().enumerate() {
            let coef = vt.row(j).adjoint();
            basis.set_column(c, &(&q * coef));
        }
        // Rayleigh quotients on the refined space.
        let mut refined = [0.0; 3];
        for (i, r) in refined.iter_mut().enumerate() {
            *r = compress_unchecked(triple.get(i), &basis).trace() / keep.len() as f64;
        }
        let p = JointSpectrumPoint {
            lambda: refined,
            vector: basis.column(0).into_owned(),
            eigenspace_dim: keep.len(),
            basis,
        };
        if p.residual(triple) <= settings.joint_tol {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian::HermitianMatrix;

    #[test]
    fn diagonal_triple() {
        let t = MatrixTriple::new(
            HermitianMatrix::diag(&[1.0, 1.0, -1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, -1.0, 1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, -1.0, -1.0, 1.0]),
        )
        .unwrap();
        let js = joint_spectrum(&t, &Settings::default());
        assert_eq!(js.len(), 4);
        for want in [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]] {
            assert!(js.iter().any(|p| p.lambda == want), "{want:?}");
        }
    }

    #[test]
    fn identity_triple_is_one_point() {
        let i = HermitianMatrix::identity(4);
        let t = MatrixTriple::new(i.clone(), i.clone(), i).unwrap();
        let js = joint_spectrum(&t, &Settings::default());
        assert_eq!(js.len(), 1);
        assert_eq!(js[0].eigenspace_dim, 4);
        assert_eq!(js[0].lambda, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn shared_eigenspace_is_refined() {
        // A1 = 0 puts everything in one eigenspace; only e3 is common to A2, A3.
        let z = HermitianMatrix::zeros(3);
        let a2 = HermitianMatrix::from_real_rows(&[&[0., 1., 0.], &[1., 0., 0.], &[0., 0., 2.]]).unwrap();
        let a3 = HermitianMatrix::diag(&[1.0, -1.0, 5.0]);
        let t = MatrixTriple::new(z, a2, a3).unwrap();
        let js = joint_spectrum(&t, &Settings::default());
        assert_eq!(js.len(), 1);
        assert!((js[0].lambda[1] - 2.0).abs() < 1e-12 && (js[0].lambda[2] - 5.0).abs() < 1e-12);
    }
}
