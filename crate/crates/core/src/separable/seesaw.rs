//! Alternating minimization of `<a⊗b|H|a⊗b>` over pure product states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{JnrError, Result};
use crate::geometry::direction::Direction;
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{c, fro_norm, CMatrix, CVector, MatrixTriple};

/// Pure product state `a ⊗ b` of two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductState {
    pub a: [Complex64; 2],
    pub b: [Complex64; 2],
}

impl ProductState {
    /// Normalizes both factors.
    pub fn new(a: [Complex64; 2], b: [Complex64; 2]) -> Result<Self> {
        let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
        let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
        if !(na > 0.0 && nb > 0.0 && na.is_finite() && nb.is_finite()) {
            return Err(JnrError::Degenerate("zero tensor factor".into()));
        }
        Ok(Self {
            a: [a[0] / na, a[1] / na],
            b: [b[0] / nb, b[1] / nb],
        })
    }

    /// The 4-vector with `|ij>` at index `2i + j`.
    pub fn vector(&self) -> CVector {
        CVector::from_fn(4, |k, _| self.a[k / 2] * self.b[k % 2])
    }
}

/// Outcome of one alternating run.
#[derive(Debug, Clone)]
pub struct SeesawRun {
    pub value: f64,
    pub state: ProductState,
    /// Objective after each half-step.
    pub history: Vec<f64>,
    /// False if some half-step increased the objective beyond rounding.
    pub monotone: bool,
}

/// 2×2 matrix `<e_i ⊗ b| H |e_j ⊗ b>`.
fn reduce_on_b(h: &CMatrix, b: &[Complex64; 2]) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| {
        let mut s = c(0.0, 0.0);
        for k in 0..2 {
            for l in 0..2 {
                s += b[k].conj() * h[(2 * i + k, 2 * j + l)] * b[l];
            }
        }
        s
    })
}

/// 2×2 matrix `<a ⊗ e_k| H |a ⊗ e_l>`.
fn reduce_on_a(h: &CMatrix, a: &[Complex64; 2]) -> CMatrix {
    CMatrix::from_fn(2, 2, |k, l| {
        let mut s = c(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                s += a[i].conj() * h[(2 * i + k, 2 * j + l)] * a[j];
            }
        }
        s
    })
}

/// Lowest eigenpair, or `None` when the matrix is a multiple of the identity.
fn lowest(m: &CMatrix, scale: f64) -> (f64, Option<[Complex64; 2]>) {
    let e = eigh(m);
    if e.values[1] - e.values[0] <= 1e-14 * scale {
        return (e.values[0], None);
    }
    let v = e.vector(0);
    (e.values[0], Some([v[0], v[1]]))
}

fn expectation(h: &CMatrix, s: &ProductState) -> f64 {
    let v = s.vector();
    v.dotc(&(h * &v)).re
}

/// Runs the alternation from the initial second factor `b0` (normalized
/// here; a zero vector starts from `|0>`).
pub fn seesaw_run(h: &CMatrix, b0: [Complex64; 2], tol: f64, max_iter: usize) -> SeesawRun {
    let scale = fro_norm(h).max(1.0);
    let slack = 1e-13 * scale;
    let nb = (b0[0].norm_sqr() + b0[1].norm_sqr()).sqrt();
    let b = if nb > 0.0 && nb.is_finite() {
        b0.map(|x| x / nb)
    } else {
        [c(1.0, 0.0), c(0.0, 0.0)]
    };
    let mut state = ProductState {
        a: [c(1.0, 0.0), c(0.0, 0.0)],
        b,
    };
    let (_, a0) = lowest(&reduce_on_b(h, &state.b), scale);
    if let Some(a) = a0 {
        state.a = a;
    }
    let mut value = expectation(h, &state);
    let mut history = vec![value];
    let mut monotone = true;
    for _ in 0..max_iter {
        let before = value;
        let (_, b) = lowest(&reduce_on_a(h, &state.a), scale);
        if let Some(b) = b {
            state.b = b;
        }
        let mid = expectation(h, &state);
        let (_, a) = lowest(&reduce_on_b(h, &state.b), scale);
        if let Some(a) = a {
            state.a = a;
        }
        value = expectation(h, &state);
        monotone &= mid <= before + slack && value <= mid + slack;
        history.push(mid);
        history.push(value);
        if before - value < tol * scale {
            break;
        }
    }
    SeesawRun {
        value,
        state,
        history,
        monotone,
    }
}

/// Uniformly random unit vector of ℂ² up to phase (a Bloch-sphere sample).
pub(crate) fn random_qubit(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let theta = z.acos();
    [
        c((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Best of `restarts` runs from seeded random initial factors.
pub fn seesaw_min(h: &CMatrix, restarts: usize, seed: u64, stream: u64, tol: f64, max_iter: usize) -> SeesawRun {
    let mut rng = rng_for(seed, stream);
    let mut best: Option<SeesawRun> = None;
    for _ in 0..restarts.max(1) {
        let b0 = random_qubit(&mut rng);
        let run = seesaw_run(h, b0, tol, max_iter);
        let monotone = best.as_ref().is_none_or(|b| b.monotone) && run.monotone;
        let better = best.as_ref().is_none_or(|b| run.value < b.value);
        if better {
            best = Some(SeesawRun { monotone, ..run });
        } else if let Some(b) = best.as_mut() {
            b.monotone = monotone;
        }
    }
    best.expect("at least one restart")
}

/// See-saw estimate of the separable support value in direction `u`.
pub fn seesaw_support(
    triple: &MatrixTriple,
    u: &Direction,
    restarts: usize,
    seed: u64,
) -> Result<(f64, ProductState)> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let h = triple.pencil(u.u());
    let run = seesaw_min(h.matrix(), restarts, seed, 0, 1e-12, 2000);
    Ok((run.value, run.state))
}
