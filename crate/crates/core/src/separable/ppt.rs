//! Minimum of `tr(ρH)` over two-qubit states with positive partial transpose,
//! by a primal log-barrier method in the 15 real coordinates of the
//! trace-one slice.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{JnrError, Result};
use crate::geometry::direction::Direction;
use crate::linalg::hermitian::{c, CMatrix, DensityMatrix, HermitianMatrix, MatrixTriple};
use crate::linalg::ops::inner;
use crate::settings::Settings;

const DIM: usize = 15;

/// Orthonormal traceless basis `σ_i ⊗ σ_j / 2` and the sign each element
/// picks up under the partial transpose.
fn pauli_basis() -> Vec<(CMatrix, f64)> {
    let paulis = [
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    ];
    let mut out = Vec::with_capacity(DIM);
    for i in 0..4 {
        for j in 0..4 {
            if i == 0 && j == 0 {
                continue;
            }
            let g = paulis[i].kronecker(&paulis[j]) * c(0.5, 0.0);
            let sign = if j == 2 { -1.0 } else { 1.0 };
            out.push((g, sign));
        }
    }
    out
}

struct Barrier {
    basis: Vec<(CMatrix, f64)>,
    cost: DVector<f64>,
    t: f64,
}

fn assemble(basis: &[(CMatrix, f64)], x: &DVector<f64>, transposed: bool) -> CMatrix {
    let mut m = CMatrix::identity(4, 4) * c(0.25, 0.0);
    for (k, (g, s)) in basis.iter().enumerate() {
        let w = if transposed { x[k] * s } else { x[k] };
        m += g * c(w, 0.0);
    }
    m
}

fn chol(m: &CMatrix) -> Option<Cholesky<num_complex::Complex64, nalgebra::Dyn>> {
    Cholesky::new(m.clone())
}

fn logdet(ch: &Cholesky<num_complex::Complex64, nalgebra::Dyn>) -> f64 {
    let l = ch.l_dirty();
    (0..4).map(|i| 2.0 * l[(i, i)].re.ln()).sum()
}

impl Barrier {
    fn value(&self, x: &DVector<f64>) -> Option<f64> {
        let r = chol(&assemble(&self.basis, x, false))?;
        let rt = chol(&assemble(&self.basis, x, true))?;
        Some(self.t * self.cost.dot(x) - logdet(&r) - logdet(&rt))
    }

    fn grad_hess(&self, x: &DVector<f64>) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let mut g = &self.cost * self.t;
        let mut h = DMatrix::<f64>::zeros(DIM, DIM);
        for transposed in [false, true] {
            let m = assemble(&self.basis, x, transposed);
            let inv = chol(&m)?.inverse();
            let signs: Vec<f64> = self.basis.iter().map(|(_, s)| if transposed { *s } else { 1.0 }).collect();
            let prods: Vec<CMatrix> = self.basis.iter().map(|(b, _)| &inv * b).collect();
            for k in 0..DIM {
                g[k] -= signs[k] * trace_re(&prods[k]);
                for l in k..DIM {
                    let v = signs[k] * signs[l] * trace_prod_re(&prods[k], &prods[l]);
                    h[(k, l)] += v;
                    if l != k {
                        h[(l, k)] += v;
                    }
                }
            }
        }
        Some((g, h))
    }
}

fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

fn trace_prod_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    s
}

/// Solves `min tr(ρH)` over PPT states; returns the value and minimizer.
pub fn ppt_min(h: &HermitianMatrix, settings: &Settings) -> Result<(f64, DensityMatrix)> {
    if h.n() != 4 {
        return Err(JnrError::UnsupportedSize(h.n(), "4"));
    }
    let shifted = h.traceless();
    let s = shifted.norm();
    if s <= 1e-14 * h.norm().max(1.0) {
        let rho = DensityMatrix::maximally_mixed(4);
        return Ok((h.trace() / 4.0, rho));
    }
    let basis = pauli_basis();
    let hn = shifted.matrix() * c(1.0 / s, 0.0);
    let cost = DVector::from_iterator(DIM, basis.iter().map(|(g, _)| inner(g, &hn)));
    let mut bar = Barrier {
        basis,
        cost,
        t: 1.0 / settings.barrier_mu0,
    };
    let mut x = DVector::<f64>::zeros(DIM);
    let mut mu = settings.barrier_mu0;
    loop {
        bar.t = 1.0 / mu;
        if let Err(reason) = newton_stage(&bar, &mut x) {
            if mu > 1e-7 {
                return Err(JnrError::SolverFailure { mu, reason });
            }
            log::debug!("barrier stopped early at mu = {mu:.1e}: {reason}");
            break;
        }
        if mu <= settings.barrier_mu_min {
            break;
        }
        mu /= settings.barrier_shrink;
    }
    let rho = HermitianMatrix::symmetrized(assemble(&bar.basis, &x, false));
    let value = inner(rho.matrix(), h.matrix());
    Ok((value, DensityMatrix::unchecked(rho)))
}

fn newton_stage(bar: &Barrier, x: &mut DVector<f64>) -> std::result::Result<(), String> {
    let mut f = bar.value(x).ok_or("iterate left the feasible set")?;
    for _ in 0..100 {
        let (g, hess) = bar.grad_hess(x).ok_or("singular iterate")?;
        let step = match Cholesky::new(hess.clone()) {
            Some(ch) => ch.solve(&(-&g)),
            None => {
                let reg = &hess + DMatrix::<f64>::identity(DIM, DIM) * (1e-12 * hess.norm());
                Cholesky::new(reg).ok_or("hessian not positive definite")?.solve(&(-&g))
            }
        };
        let decrement = -g.dot(&step);
        if !decrement.is_finite() {
            return Err("non-finite Newton step".into());
        }
        if decrement / 2.0 < 1e-11 {
            return Ok(());
        }
        let mut alpha = 1.0;
        loop {
            let cand = &*x + &step * alpha;
            if let Some(fc) = bar.value(&cand) {
                if fc <= f - 0.25 * alpha * decrement {
                    *x = cand;
                    f = fc;
                    break;
                }
            }
            alpha *= 0.5;
            if alpha < 1e-14 {
                // No further progress is possible at this precision.
                return Ok(());
            }
        }
    }
    Ok(())
}

/// PPT support value of W in direction `u`.
pub fn ppt_support(triple: &MatrixTriple, u: &Direction, settings: &Settings) -> Result<(f64, DensityMatrix)> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    ppt_min(&triple.pencil(u.u()), settings)
}

/// Smallest eigenvalues of ρ and of its partial transpose.
pub fn ppt_margins(rho: &DensityMatrix) -> (f64, f64) {
    let m = rho.matrix().matrix();
    let e = crate::linalg::eigen::eigh(m).values[0];
    let pt = crate::linalg::ops::partial_transpose_raw(m);
    let et = crate::linalg::eigen::eigh(&pt).values[0];
    (e, et)
}
