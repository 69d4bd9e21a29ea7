//! Eigenvalues of small non-hermitian matrices through their characteristic
//! polynomials.

use num_complex::Complex64;

use super::hermitian::{c, CMatrix};

/// Roots of the monic polynomial `z^d + coefs[0] z^(d-1) + ... + coefs[d-1]`
/// by Aberth–Ehrlich iteration followed by Newton polishing.
pub fn monic_roots(coefs: &[Complex64]) -> Vec<Complex64> {
    let d = coefs.len();
    if d == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = c(1.0, 0.0);
        let mut dp = c(0.0, 0.0);
        for &a in coefs {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    let radius = 1.0 + coefs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            c(radius * 0.5 * t.cos(), radius * 0.5 * t.sin())
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = c(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += c(1.0, 0.0) / diff;
                    }
                }
            }
            let w = ratio / (c(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let cand = *zi - step;
            if eval(cand).0.norm() < p.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    z
}

/// Eigenvalues of a 2×2 complex matrix.
pub fn eig2(m: &CMatrix) -> [Complex64; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let half = tr * 0.5;
    let disc = (half * half - det).sqrt();
    let (a, b) = (half + disc, half - disc);
    // Avoid cancellation for the smaller root.
    if a.norm() > b.norm() && a.norm() > 0.0 {
        [a, det / a]
    } else if b.norm() > 0.0 {
        [det / b, b]
    } else {
        [a, b]
    }
}

/// Eigenvalues of a 3×3 complex matrix, sorted by real then imaginary part.
pub fn eig3(m: &CMatrix) -> [Complex64; 3] {
    let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let det = m.determinant();
    let mut r = monic_roots(&[-tr, minors, -det]);
    r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    [r[0], r[1], r[2]]
}
