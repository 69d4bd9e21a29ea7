//! Cyclic complex Jacobi eigensolver for small hermitian matrices.

use num_complex::Complex64;

use super::hermitian::{c, CMatrix, CVector, HermitianMatrix};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    /// Columns `lo..hi` as an n×(hi-lo) matrix.
    pub fn columns(&self, lo: usize, hi: usize) -> CMatrix {
        self.vectors.columns(lo, hi - lo).into_owned()
    }

    /// Number of eigenvalues within `tol * max(1, scale)` of the smallest one.
    pub fn low_cluster(&self, tol: f64, scale: f64) -> usize {
        let thr = tol * scale.max(1.0);
        let l0 = self.values[0];
        self.values.iter().take_while(|&&l| l - l0 < thr).count()
    }
}

pub fn hermitian_eig(a: &HermitianMatrix) -> EigenDecomposition {
    eigh(a.matrix())
}

/// Eigendecomposition of a matrix the caller knows to be hermitian.
pub fn eigh(a: &CMatrix) -> EigenDecomposition {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = CMatrix::identity(n, n);
    let total: f64 = m.iter().map(|z| z.norm_sqr()).sum();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if off <= 1e-34 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &v.column(i));
    }

    let scale = values.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    reorthonormalize_clusters(&values, &mut vectors, 1e-10 * scale);
    for k in 0..n {
        normalize_phase(&mut vectors, k);
    }
    EigenDecomposition { values, vectors }
}

/// One complex Jacobi rotation zeroing entry (p, q).
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if r < 1e-300 || (app.abs() + aqq.abs() > 0.0 && r < 1e-18 * (app.abs() + aqq.abs())) {
        m[(p, q)] = c(0.0, 0.0);
        m[(q, p)] = c(0.0, 0.0);
        return;
    }
    // Phase-rotate the block to a real symmetric one, then apply a real rotation.
    let phase = apq / r;
    let zeta = (aqq - app) / (2.0 * r);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let t = if zeta == 0.0 { 1.0 } else { t };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    // V = diag(1, conj(phase)) * [[cs, sn], [-sn, cs]] on columns p, q.
    let vpp = c(cs, 0.0);
    let vpq = c(sn, 0.0);
    let vqp = phase.conj() * (-sn);
    let vqq = phase.conj() * cs;
    apply(m, v, p, q, [vpp, vpq, vqp, vqq]);
    m[(p, q)] = c(0.0, 0.0);
    m[(q, p)] = c(0.0, 0.0);
    let (a, b) = (m[(p, p)].re, m[(q, q)].re);
    m[(p, p)] = c(a, 0.0);
    m[(q, q)] = c(b, 0.0);
}

fn apply(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, r: [Complex64; 4]) {
    let n = m.nrows();
    let [vpp, vpq, vqp, vqq] = r;
    for k in 0..n {
        let (x, y) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = x * vpp + y * vqp;
        m[(k, q)] = x * vpq + y * vqq;
    }
    for k in 0..n {
        let (x, y) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = vpp.conj() * x + vqp.conj() * y;
        m[(q, k)] = vpq.conj() * x + vqq.conj() * y;
    }
    for k in 0..n {
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * vpp + y * vqp;
        v[(k, q)] = x * vpq + y * vqq;
    }
}

/// Modified Gram–Schmidt in index order inside each cluster of nearly equal
/// eigenvalues.
fn reorthonormalize_clusters(values: &[f64], vecs: &mut CMatrix, tol: f64) {
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] < tol {
            end += 1;
        }
        if end - start > 1 {
            for k in start..end {
                let mut col = vecs.column(k).into_owned();
                for j in start..k {
                    let prev = vecs.column(j).into_owned();
                    let proj = prev.dotc(&col);
                    col -= prev * proj;
                }
                let nrm = col.norm();
                vecs.set_column(k, &(col / c(nrm, 0.0)));
            }
        }
        start = end;
    }
}

/// Rotates column `k` so its largest component (first one on ties) is real
/// and positive.
fn normalize_phase(vecs: &mut CMatrix, k: usize) {
    let col = vecs.column(k);
    let big = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return;
    }
    let idx = col.iter().position(|z| z.norm() >= big * (1.0 - 1e-9)).unwrap();
    let ph = col[idx] / col[idx].norm();
    let fixed = col.into_owned() * ph.conj();
    vecs.set_column(k, &fixed);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &CMatrix, e: &EigenDecomposition) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..a.nrows() {
            let v = e.vector(i);
            let r = a * &v - &v * c(e.values[i], 0.0);
            worst = worst.max(r.norm());
        }
        worst
    }

    #[test]
    fn diagonal_sorted() {
        let e = hermitian_eig(&HermitianMatrix::diag(&[1.0, 1.0, -1.0, -1.0]));
        assert_eq!(e.values, vec![-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&HermitianMatrix::zeros(4));
        assert_eq!(e.values, vec![0.0; 4]);
    }

    #[test]
    fn smallest_of_diag_with_negative_corner() {
        let e = hermitian_eig(&HermitianMatrix::diag(&[0.0, 0.0, 0.0, -4.0]));
        assert_eq!(e.values[0], -4.0);
        let v = e.vector(0);
        assert!((v[3].re - 1.0).abs() < 1e-15 && v[3].im == 0.0);
    }

    #[test]
    fn complex_two_by_two() {
        // Pauli y has eigenvalues -1, 1.
        let m = HermitianMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eig(&m);
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(residual(m.matrix(), &e) < 1e-14);
    }

    #[test]
    fn five_by_five_dense() {
        let mut m = CMatrix::zeros(5, 5);
        for i in 0..5 {
            for j in 0..5 {
                let x = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                let y = ((i * 5 + j * 2) % 7) as f64 - 3.0;
                m[(i, j)] = c(x, y);
            }
        }
        let h = HermitianMatrix::symmetrized(&m + m.adjoint());
        let e = hermitian_eig(&h);
        assert!(residual(h.matrix(), &e) < 1e-12 * h.norm());
        let g = e.vectors.adjoint() * &e.vectors;
        assert!((g - CMatrix::identity(5, 5)).norm() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
