use super::eigen::hermitian_eig;
use super::hermitian::{fro_norm, CMatrix, HermitianMatrix};
use crate::error::{JnrError, Result};

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(JnrError::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

/// `tr(a b)`.
pub fn frobenius_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    same_dim(a, b)?;
    Ok(inner(a.matrix(), b.matrix()))
}

/// `Re tr(a* b)` for same-shape complex matrices.
pub(crate) fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Determinant of the principal submatrix on the 0-based index set `rows`.
pub fn principal_minor(a: &HermitianMatrix, rows: &[usize]) -> Result<f64> {
    let n = a.n();
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if rows.is_empty() || sorted.len() != rows.len() || sorted.iter().any(|&i| i >= n) {
        return Err(JnrError::InvalidIndexSet(rows.to_vec()));
    }
    let k = sorted.len();
    let sub = CMatrix::from_fn(k, k, |i, j| a.get(sorted[i], sorted[j]));
    Ok(sub.determinant().re)
}

/// All principal minors of order `k`, in lexicographic index order.
pub fn principal_minors(a: &HermitianMatrix, k: usize) -> Vec<f64> {
    subsets(a.n(), k)
        .iter()
        .map(|s| principal_minor(a, s).expect("valid subset"))
        .collect()
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Number of eigenvalues with `|λ| > tol * max(1, ‖a‖)`.
pub fn numerical_rank(a: &HermitianMatrix, tol: f64) -> usize {
    let thr = tol * a.norm().max(1.0);
    hermitian_eig(a)
        .values
        .iter()
        .filter(|l| l.abs() > thr)
        .count()
}

/// `xy - yx`.
pub fn commutator(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<CMatrix> {
    same_dim(x, y)?;
    Ok(x.matrix() * y.matrix() - y.matrix() * x.matrix())
}

/// Defect `‖Q*Q - 1‖` of a set of columns.
pub fn orthonormality_defect(basis: &CMatrix) -> f64 {
    let r = basis.ncols();
    fro_norm(&(basis.adjoint() * basis - CMatrix::identity(r, r)))
}

/// `Q* a Q` for orthonormal columns `Q`.
pub fn compress(a: &HermitianMatrix, basis: &CMatrix) -> Result<HermitianMatrix> {
    if basis.nrows() != a.n() {
        return Err(JnrError::DimensionMismatch {
            expected: a.n(),
            found: basis.nrows(),
        });
    }
    if basis.ncols() == 0 {
        return Err(JnrError::Degenerate("empty basis".into()));
    }
    let d = orthonormality_defect(basis);
    if d > 1e-10 {
        return Err(JnrError::NotOrthonormal(d));
    }
    Ok(compress_unchecked(a, basis))
}

pub(crate) fn compress_unchecked(a: &HermitianMatrix, basis: &CMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrized(basis.adjoint() * a.matrix() * basis)
}

/// Kronecker product of two 2×2 matrices, `|ij>` at index `2i + j`.
pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.n() != 2 || b.n() != 2 {
        return Err(JnrError::UnsupportedSize(a.n().max(b.n()), "2"));
    }
    Ok(HermitianMatrix::symmetrized(a.matrix().kronecker(b.matrix())))
}

/// Transposes each 2×2 block of a 4×4 matrix (second tensor factor).
pub fn partial_transpose(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.n() != 4 {
        return Err(JnrError::UnsupportedSize(x.n(), "4"));
    }
    Ok(HermitianMatrix::symmetrized(partial_transpose_raw(x.matrix())))
}

pub(crate) fn partial_transpose_raw(m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(4, 4);
    for bi in 0..2 {
        for bj in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * bi + k, 2 * bj + l)] = m[(2 * bi + l, 2 * bj + k)];
                }
            }
        }
    }
    out
}

/// Orthonormal basis (columns) of the orthogonal complement of `basis` in ℂⁿ.
pub fn complement_basis(basis: &CMatrix) -> CMatrix {
    let n = basis.nrows();
    let r = basis.ncols();
    let proj = CMatrix::identity(n, n) - basis * basis.adjoint();
    let e = super::eigen::eigh(&proj);
    e.columns(r, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian::{c, CVector};

    fn sx() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    #[test]
    fn inner_examples() {
        let i4 = HermitianMatrix::identity(4);
        assert_eq!(frobenius_inner(&i4, &i4).unwrap(), 4.0);
        let a = HermitianMatrix::diag(&[1.0, 1.0, -1.0, -1.0]);
        let b = HermitianMatrix::diag(&[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(frobenius_inner(&a, &b).unwrap(), 0.0);
        assert!(frobenius_inner(&a, &HermitianMatrix::identity(3)).is_err());
    }

    #[test]
    fn minors() {
        let a = HermitianMatrix::diag(&[2.0, 3.0, 5.0, 7.0]);
        assert!((principal_minor(&a, &[0, 2]).unwrap() - 10.0).abs() < 1e-12);
        let e1 = HermitianMatrix::diag(&[0.0, 0.0, 0.0, -4.0]);
        for s in [[0, 1], [0, 3], [1, 3], [2, 3]] {
            assert_eq!(principal_minor(&e1, &s).unwrap(), 0.0);
        }
        let i4 = HermitianMatrix::identity(4);
        assert!((principal_minor(&i4, &[0, 1, 2]).unwrap() - 1.0).abs() < 1e-14);
        assert!(principal_minor(&i4, &[]).is_err());
        assert!(principal_minor(&i4, &[4]).is_err());
        assert!(principal_minor(&i4, &[1, 1]).is_err());
        assert_eq!(principal_minors(&i4, 2).len(), 6);
        assert_eq!(principal_minors(&i4, 3).len(), 4);
    }

    #[test]
    fn ranks() {
        assert_eq!(numerical_rank(&HermitianMatrix::diag(&[0.0, 0.0, 0.0, -4.0]), 1e-8), 1);
        assert_eq!(numerical_rank(&HermitianMatrix::zeros(4), 1e-8), 0);
        assert_eq!(numerical_rank(&HermitianMatrix::identity(4), 1e-8), 4);
    }

    #[test]
    fn commutators() {
        let a = HermitianMatrix::diag(&[1.0, 2.0, 3.0]);
        let b = HermitianMatrix::diag(&[0.0, -1.0, 5.0]);
        assert_eq!(fro_norm(&commutator(&a, &b).unwrap()), 0.0);
        assert_eq!(fro_norm(&commutator(&a, &a).unwrap()), 0.0);
        let x = HermitianMatrix::from_real_rows(&[&[0., 1., 0.], &[1., 0., 0.], &[0., 0., 0.]]).unwrap();
        let z = HermitianMatrix::diag(&[1.0, -1.0, 0.0]);
        let k = commutator(&x, &z).unwrap();
        // [σx, σz] = -2iσy
        assert_eq!(k[(0, 1)], c(-2.0, 0.0));
        assert_eq!(k[(1, 0)], c(2.0, 0.0));
        assert!(fro_norm(&(&k + k.adjoint())) == 0.0);
        for i in 0..3 {
            assert_eq!(k[(2, i)], c(0.0, 0.0));
            assert_eq!(k[(i, 2)], c(0.0, 0.0));
        }
    }

    #[test]
    fn compression() {
        let a = HermitianMatrix::diag(&[1.0, 2.0, 3.0, 4.0]);
        let q = CMatrix::identity(4, 2);
        assert_eq!(compress(&a, &q).unwrap(), HermitianMatrix::diag(&[1.0, 2.0]));
        let mut bad = CMatrix::identity(4, 2);
        bad[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(compress(&a, &bad), Err(JnrError::NotOrthonormal(_))));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut q2 = CMatrix::zeros(4, 1);
        q2[(0, 0)] = c(s, 0.0);
        q2[(1, 0)] = c(0.0, s);
        let id = compress(&HermitianMatrix::identity(4), &q2).unwrap();
        assert!((id.get(0, 0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kron_examples() {
        let i2 = HermitianMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), HermitianMatrix::identity(4));
        let z = HermitianMatrix::diag(&[1.0, -1.0]);
        assert_eq!(kron(&z, &z).unwrap(), HermitianMatrix::diag(&[1.0, -1.0, -1.0, 1.0]));
        let p0 = HermitianMatrix::diag(&[1.0, 0.0]);
        let p1 = HermitianMatrix::diag(&[0.0, 1.0]);
        assert_eq!(kron(&p0, &p1).unwrap(), HermitianMatrix::diag(&[0.0, 1.0, 0.0, 0.0]));
        assert!(kron(&HermitianMatrix::identity(3), &i2).is_err());
        let _ = sx();
    }

    #[test]
    fn partial_transpose_examples() {
        let i4 = HermitianMatrix::identity(4).scale(0.25);
        assert_eq!(partial_transpose(&i4).unwrap(), i4);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = CVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        let bell = HermitianMatrix::outer(&phi);
        let e = hermitian_eig(&partial_transpose(&bell).unwrap());
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in e.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(partial_transpose(&HermitianMatrix::identity(3)).is_err());
    }

    #[test]
    fn complement_is_orthogonal() {
        let mut q = CMatrix::zeros(4, 1);
        q[(1, 0)] = c(0.6, 0.0);
        q[(2, 0)] = c(0.0, 0.8);
        let p = complement_basis(&q);
        assert_eq!(p.ncols(), 3);
        assert!((q.adjoint() * &p).norm() < 1e-14);
        assert!(orthonormality_defect(&p) < 1e-13);
    }
}
