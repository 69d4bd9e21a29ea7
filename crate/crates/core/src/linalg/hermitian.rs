use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{JnrError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const MAX_DIM: usize = 5;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense complex hermitian matrix of order 1 to 5.
///
/// The stored entries are exactly hermitian: the constructor symmetrizes its
/// input after checking that the asymmetry is small.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    /// Validates and symmetrizes `m` with the default relative tolerance.
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, 1e-9)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        let n = m.nrows();
        if n != m.ncols() {
            return Err(JnrError::DimensionMismatch {
                expected: n,
                found: m.ncols(),
            });
        }
        if n == 0 || n > MAX_DIM {
            return Err(JnrError::UnsupportedSize(n, "1..=5"));
        }
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(JnrError::NonFinite { row: i, col: j });
                }
            }
        }
        let asym = fro_norm(&(&m - m.adjoint()));
        let limit = tol * fro_norm(&m);
        if asym > limit {
            return Err(JnrError::NotHermitian {
                asymmetry: asym,
                limit,
            });
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without checking. Callers guarantee the input is hermitian
    /// up to rounding.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let n = m.nrows();
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = c(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        Self { m: h }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(JnrError::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = c(x, 0.0);
            }
        }
        Self::new(m)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(JnrError::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            for (j, &z) in r.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Self::new(m)
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: CMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: CMatrix::zeros(n, n),
        }
    }

    /// Projector `v v*` onto a (not necessarily normalized) vector.
    pub fn outer(v: &CVector) -> Self {
        Self::symmetrized(v * v.adjoint())
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        fro_norm(&self.m)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: &self.m * c(s, 0.0) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        Ok(Self {
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        Ok(Self {
            m: &self.m - &other.m,
        })
    }

    /// Traceless part `X - tr(X)/n 1`.
    pub fn traceless(&self) -> Self {
        let n = self.n();
        let t = self.trace() / n as f64;
        let mut m = self.m.clone();
        for i in 0..n {
            m[(i, i)] -= c(t, 0.0);
        }
        Self { m }
    }

    /// Real linear combination `sum coefs[k] * mats[k]`.
    pub fn combination(coefs: &[f64], mats: &[&Self]) -> Self {
        let n = mats[0].n();
        let mut m = CMatrix::zeros(n, n);
        for (&a, x) in coefs.iter().zip(mats) {
            if a != 0.0 {
                m += &x.m * c(a, 0.0);
            }
        }
        Self { m }
    }

    /// Hermitian part `(B + B*)/2` and "imaginary part" `(B - B*)/(2i)` of an
    /// arbitrary square matrix.
    pub fn cartesian_parts(b: &CMatrix) -> (Self, Self) {
        let bs = b.adjoint();
        let re = (b + &bs) * c(0.5, 0.0);
        let im = (b - &bs) * c(0.0, -0.5);
        (Self::symmetrized(re), Self::symmetrized(im))
    }
}

fn check_same(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(JnrError::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n();
        let rows: Vec<Vec<[f64; 2]>> = (0..n)
            .map(|i| (0..n).map(|j| [self.m[(i, j)].re, self.m[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[a, b]| c(a, b)).collect())
            .collect();
        HermitianMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Ordered triple of equal-size hermitian matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixTriple {
    mats: [HermitianMatrix; 3],
}

impl MatrixTriple {
    pub fn new(a1: HermitianMatrix, a2: HermitianMatrix, a3: HermitianMatrix) -> Result<Self> {
        for x in [&a2, &a3] {
            check_same(&a1, x)?;
        }
        Ok(Self { mats: [a1, a2, a3] })
    }

    pub fn n(&self) -> usize {
        self.mats[0].n()
    }

    pub fn get(&self, i: usize) -> &HermitianMatrix {
        &self.mats[i]
    }

    pub fn mats(&self) -> &[HermitianMatrix; 3] {
        &self.mats
    }

    /// Largest Frobenius norm of the three matrices, at least 1.
    pub fn scale(&self) -> f64 {
        self.mats.iter().map(|m| m.norm()).fold(1.0, f64::max)
    }

    /// `u1 A1 + u2 A2 + u3 A3`.
    pub fn pencil(&self, u: &[f64; 3]) -> HermitianMatrix {
        HermitianMatrix::combination(u, &[&self.mats[0], &self.mats[1], &self.mats[2]])
    }

    /// Applies `f` to each matrix.
    pub fn map<F: Fn(&HermitianMatrix) -> HermitianMatrix>(&self, f: F) -> Self {
        Self {
            mats: [f(&self.mats[0]), f(&self.mats[1]), f(&self.mats[2])],
        }
    }
}

/// Positive semidefinite hermitian matrix of unit trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    rho: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(rho: HermitianMatrix) -> Result<Self> {
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(JnrError::NotDensity(format!("trace {tr}")));
        }
        let low = super::eigen::hermitian_eig(&rho).values[0];
        if low < -1e-10 {
            return Err(JnrError::NotDensity(format!("eigenvalue {low:.3e}")));
        }
        Ok(Self { rho })
    }

    /// Pure state of a nonzero vector.
    pub fn pure(v: &CVector) -> Result<Self> {
        let nrm = v.norm();
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(JnrError::NotDensity("zero vector".into()));
        }
        Ok(Self {
            rho: HermitianMatrix::outer(&(v / c(nrm, 0.0))),
        })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            rho: HermitianMatrix::identity(n).scale(1.0 / n as f64),
        }
    }

    pub(crate) fn unchecked(rho: HermitianMatrix) -> Self {
        Self { rho }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.rho
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }
}
