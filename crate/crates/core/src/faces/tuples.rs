//! Rank-one pencils `u0·1 + u·A` and the rank-3 faces they expose.

use serde::Serialize;

use super::search::cluster_minima;
use crate::error::{JnrError, Result};
use crate::geometry::direction::Direction;
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{CMatrix, HermitianMatrix, MatrixTriple};
use crate::linalg::ops::{compress_unchecked, inner, numerical_rank, principal_minors};
use crate::settings::Settings;

/// Positive semidefinite rank-one pencil `u0 + u1 A1 + u2 A2 + u3 A3` with
/// `(u1,u2,u3)` a unit vector; the kernel is the support of a rank-3 face
/// exposed by `u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOneTuple {
    pub u0: f64,
    pub direction: Direction,
    /// `(λ3 − λ1) / ‖u·A‖` at the direction.
    pub residual: f64,
    #[serde(skip)]
    pub kernel_basis: CMatrix,
}

impl RankOneTuple {
    /// Tuple for a direction where the three lowest eigenvalues coalesce.
    pub fn from_direction(triple: &MatrixTriple, u: &Direction) -> Result<Self> {
        if triple.n() != 4 {
            return Err(JnrError::UnsupportedSize(triple.n(), "4"));
        }
        let p = triple.pencil(u.u());
        let e = eigh(p.matrix());
        Ok(Self {
            u0: -e.values[0],
            direction: *u,
            residual: (e.values[2] - e.values[0]) / p.norm().max(1e-300),
            kernel_basis: e.columns(0, 3),
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        let u = self.direction.u();
        [self.u0, u[0], u[1], u[2]]
    }

    /// Display form: first nonzero entry of `(u1,u2,u3)` made positive.
    pub fn normalized(&self) -> [f64; 4] {
        let a = self.as_array();
        let first = a[1..].iter().copied().find(|x| x.abs() > 1e-9).unwrap_or(1.0);
        if first < 0.0 {
            a.map(|x| -x)
        } else {
            a
        }
    }

    /// The pencil `u0 + u·A`.
    pub fn pencil(&self, triple: &MatrixTriple) -> HermitianMatrix {
        let p = triple.pencil(self.direction.u());
        p.add(&HermitianMatrix::identity(p.n()).scale(self.u0)).expect("same size")
    }

    /// Projective equality with `t` (any nonzero real multiple).
    pub fn matches(&self, t: &[f64; 4], tol: f64) -> bool {
        let nt = (t[1] * t[1] + t[2] * t[2] + t[3] * t[3]).sqrt();
        if nt == 0.0 {
            return false;
        }
        let a = self.as_array();
        [1.0, -1.0].iter().any(|s| (0..4).all(|k| (a[k] - s * t[k] / nt).abs() < tol))
    }

    /// Rank one, positive semidefinite, and all ten principal minors of
    /// orders two and three vanish.
    pub fn verify(&self, triple: &MatrixTriple, settings: &Settings) -> TupleCheck {
        let p = self.pencil(triple);
        let scale = p.norm().max(1e-300);
        let e = eigh(p.matrix());
        let tol = settings.minor_tol;
        let m2 = principal_minors(&p, 2).iter().fold(0.0f64, |a, x| a.max(x.abs())) / (scale * scale);
        let m3 = principal_minors(&p, 3).iter().fold(0.0f64, |a, x| a.max(x.abs())) / scale.powi(3);
        TupleCheck {
            rank: numerical_rank(&p, tol),
            psd: e.values[0] >= -tol * scale,
            max_minor2: m2,
            max_minor3: m3,
            ok: numerical_rank(&p, tol) == 1 && e.values[0] >= -tol * scale && m2 < tol && m3 < tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TupleCheck {
    pub rank: usize,
    pub psd: bool,
    /// Largest order-2 minor divided by `‖pencil‖²`.
    pub max_minor2: f64,
    /// Largest order-3 minor divided by `‖pencil‖³`.
    pub max_minor3: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TupleSearch {
    pub tuples: Vec<RankOneTuple>,
    /// Candidates that passed the gap test but failed minor verification.
    pub rejected: usize,
    pub continuum_suspected: bool,
}

/// All rank-one tuples found by the spectral-gap search.
pub fn find_rank1_tuples(triple: &MatrixTriple, settings: &Settings) -> Result<TupleSearch> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let mut out = TupleSearch::default();
    for m in cluster_minima(triple, 3, settings) {
        let t = RankOneTuple::from_direction(triple, &m.direction)?;
        if t.verify(triple, settings).ok {
            out.tuples.push(t);
        } else {
            out.rejected += 1;
        }
    }
    out.continuum_suspected = out.tuples.len() > settings.continuum_limit;
    if out.continuum_suspected {
        log::warn!("{} rank-one tuples accepted; a continuum is suspected", out.tuples.len());
    }
    Ok(out)
}

/// Orthonormal traceless pair spanning the compressions of a face together
/// with the affine map back to ℝ³.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacePair {
    pub b1: HermitianMatrix,
    pub b2: HermitianMatrix,
    /// Image of the maximally mixed state on the face.
    pub center: [f64; 3],
    /// `axes[k][i] = <T_i, B_k>` where `T_i` is the traceless compression of `A_i`.
    pub axes: [[f64; 3]; 2],
    #[serde(skip)]
    pub basis: CMatrix,
}

impl FacePair {
    /// Point of ℝ³ for the point `(x, y)` of W(B1, B2).
    pub fn lift(&self, x: f64, y: f64) -> [f64; 3] {
        let mut p = self.center;
        for i in 0..3 {
            p[i] += self.axes[0][i] * x + self.axes[1][i] * y;
        }
        p
    }
}

/// Pair for the face supported on the columns of `basis` (r = 3).
pub fn face_pair(triple: &MatrixTriple, basis: &CMatrix, settings: &Settings) -> Result<FacePair> {
    let r = basis.ncols();
    let comp: Vec<HermitianMatrix> = (0..3).map(|i| compress_unchecked(triple.get(i), basis)).collect();
    let t: Vec<HermitianMatrix> = comp.iter().map(|x| x.traceless()).collect();
    let mut g = CMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            g[(i, j)] = crate::linalg::hermitian::c(inner(t[i].matrix(), t[j].matrix()), 0.0);
        }
    }
    let e = eigh(&g);
    let top = e.values[2];
    let thr = settings.face_dim_tol * settings.face_dim_tol * top.max(triple.scale().powi(2));
    let rank = e.values.iter().filter(|&&v| v > thr).count();
    if rank < 2 {
        return Err(JnrError::FaceTooThin(rank));
    }
    let make = |k: usize| {
        let w = e.vector(k);
        let s = e.values[k].sqrt();
        HermitianMatrix::combination(&[w[0].re / s, w[1].re / s, w[2].re / s], &[&t[0], &t[1], &t[2]])
    };
    let b1 = make(2);
    let b2 = make(1);
    let mut center = [0.0; 3];
    let mut axes = [[0.0; 3]; 2];
    for i in 0..3 {
        center[i] = comp[i].trace() / r as f64;
        axes[0][i] = inner(t[i].matrix(), b1.matrix());
        axes[1][i] = inner(t[i].matrix(), b2.matrix());
    }
    Ok(FacePair {
        b1,
        b2,
        center,
        axes,
        basis: basis.clone(),
    })
}

/// The hermitian pair `(B1, B2)` whose numerical range is affinely
/// isomorphic to the face of `t`.
pub fn compress_to_pair(
    triple: &MatrixTriple,
    t: &RankOneTuple,
    settings: &Settings,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    face_pair(triple, &t.kernel_basis, settings).map(|p| (p.b1, p.b2))
}
