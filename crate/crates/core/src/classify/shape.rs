//! Shape class of the numerical range of a 3×3 matrix `B = B1 + i B2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{JnrError, Result};
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{c, fro_norm, CMatrix, CVector, HermitianMatrix};
use crate::linalg::ops::{complement_basis, inner};
use crate::linalg::poly::{eig2, eig3};
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeClass {
    Oval,
    Loaf,
    Droplet,
    Triangle,
    Ellipse,
    Segment,
    Point,
}

impl ShapeClass {
    /// Non-elliptic type 0..=3 (oval, loaf, droplet, triangle).
    pub fn type_index(self) -> Option<usize> {
        match self {
            Self::Oval => Some(0),
            Self::Loaf => Some(1),
            Self::Droplet => Some(2),
            Self::Triangle => Some(3),
            _ => None,
        }
    }

    pub fn is_non_elliptic(self) -> bool {
        self.type_index().is_some()
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Oval => "oval",
            Self::Loaf => "loaf",
            Self::Droplet => "droplet",
            Self::Triangle => "triangle",
            Self::Ellipse => "ellipse",
            Self::Segment => "segment",
            Self::Point => "point",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Self::Oval,
            Self::Loaf,
            Self::Droplet,
            Self::Triangle,
            Self::Ellipse,
            Self::Segment,
            Self::Point,
        ]
        .into_iter()
        .find(|x| x.name() == s)
    }

    /// Number of boundary segments of the shape.
    pub fn segment_count(self) -> usize {
        match self {
            Self::Triangle => 3,
            Self::Droplet => 2,
            Self::Loaf => 1,
            _ => 0,
        }
    }
}

impl std::fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ellipse in the complex plane given by its foci and minor axis length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseShape {
    pub foci: [Complex64; 2],
    pub minor_axis: f64,
}

impl EllipseShape {
    pub fn major_axis(&self) -> f64 {
        ((self.foci[0] - self.foci[1]).norm_sqr() + self.minor_axis * self.minor_axis).sqrt()
    }

    /// Sum of focal distances minus the major axis; positive outside.
    pub fn excess(&self, z: Complex64) -> f64 {
        (z - self.foci[0]).norm() + (z - self.foci[1]).norm() - self.major_axis()
    }
}

fn complex_of(b1: &HermitianMatrix, b2: &HermitianMatrix) -> CMatrix {
    b1.matrix() + b2.matrix() * c(0.0, 1.0)
}

/// `sum [X,Y]*[X,Y]` over `(X,Y)` in `{B1,B1²} × {B2,B2²}`.
pub fn irreducibility_gram(b1: &HermitianMatrix, b2: &HermitianMatrix) -> CMatrix {
    let x1 = b1.matrix();
    let y1 = b2.matrix();
    let x2 = x1 * x1;
    let y2 = y1 * y1;
    let mut s = CMatrix::zeros(x1.nrows(), x1.nrows());
    for x in [x1, &x2] {
        for y in [y1, &y2] {
            let k = x * y - y * x;
            s += k.adjoint() * &k;
        }
    }
    s
}

/// Leading principal minors of the irreducibility Gram matrix, each divided
/// by the matching power of its norm.
pub fn irreducibility_minors(b1: &HermitianMatrix, b2: &HermitianMatrix) -> [f64; 3] {
    let s = irreducibility_gram(b1, b2);
    let nrm = fro_norm(&s);
    if nrm == 0.0 {
        return [0.0; 3];
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let sub = s.view((0, 0), (k + 1, k + 1)).into_owned();
        *o = sub.determinant().re / nrm.powi(k as i32 + 1);
    }
    out
}

/// Sylvester test on the irreducibility Gram matrix of the normalized pair.
pub fn is_unitarily_irreducible(b1: &HermitianMatrix, b2: &HermitianMatrix, settings: &Settings) -> bool {
    let Some((n1, n2)) = normalize_pair(b1, b2) else {
        return false;
    };
    // The pair has unit norm, so a commuting pair leaves only rounding noise
    // here; the minors below are scale-free and would not see that.
    if fro_norm(&irreducibility_gram(&n1, &n2)) <= settings.irreducible_tol {
        return false;
    }
    irreducibility_minors(&n1, &n2)
        .iter()
        .all(|&m| m > settings.irreducible_tol)
}

/// Orthonormalized traceless parts `(T1, T2)` with the same affine span as
/// `(1, b1, b2)`, or `None` when that span has dimension below 3.
pub fn normalize_pair(b1: &HermitianMatrix, b2: &HermitianMatrix) -> Option<(HermitianMatrix, HermitianMatrix)> {
    let t = [b1.traceless(), b2.traceless()];
    let scale = b1.norm().max(b2.norm()).max(1e-300);
    let (i, j) = if t[0].norm() >= t[1].norm() { (0, 1) } else { (1, 0) };
    let n0 = t[i].norm();
    if n0 <= 1e-12 * scale {
        return None;
    }
    let e0 = t[i].scale(1.0 / n0);
    let proj = inner(e0.matrix(), t[j].matrix());
    let rest = t[j].sub(&e0.scale(proj)).expect("same size");
    let n1 = rest.norm();
    if n1 <= 1e-9 * n0.max(t[j].norm()) {
        return None;
    }
    Some((e0, rest.scale(1.0 / n1)))
}

/// Dimension of the affine span of the numerical range (0, 1 or 2).
pub fn span_dimension(b1: &HermitianMatrix, b2: &HermitianMatrix) -> usize {
    let scale = b1.norm().max(b2.norm()).max(1e-300);
    let t1 = b1.traceless();
    let t2 = b2.traceless();
    if t1.norm() <= 1e-12 * scale && t2.norm() <= 1e-12 * scale {
        return 0;
    }
    if normalize_pair(b1, b2).is_some() {
        2
    } else {
        1
    }
}

/// Shape decision for a unitarily reducible pair.
pub fn classify_reducible(b1: &HermitianMatrix, b2: &HermitianMatrix, settings: &Settings) -> Result<ShapeClass> {
    let Some((n1, n2)) = normalize_pair(b1, b2) else {
        return Ok(if span_dimension(b1, b2) == 0 {
            ShapeClass::Point
        } else {
            ShapeClass::Segment
        });
    };
    let b = complex_of(&n1, &n2);
    let comm = n1.matrix() * n2.matrix() - n2.matrix() * n1.matrix();
    if fro_norm(&comm) < 1e-9 {
        // Normal: the range is the convex hull of the eigenvalues.
        let golden = 0.618_033_988_749_894_9;
        let g = HermitianMatrix::combination(&[1.0, golden], &[&n1, &n2]);
        let e = eigh(g.matrix());
        let pts: Vec<Complex64> = (0..3)
            .map(|k| {
                let v = e.vector(k);
                v.dotc(&(&b * &v))
            })
            .collect();
        return Ok(hull_of_three(&pts, settings));
    }
    let s = irreducibility_gram(&n1, &n2);
    let v = eigh(&s).vector(0);
    let lambda = common_eigenvalue(&b, &v, settings.common_eigvec_tol).ok_or(JnrError::NoCommonEigenvector)?;
    let (ell, _) = complement_ellipse(&b, &v);
    let tol = settings.droplet_tol * ell.major_axis().max(1.0);
    Ok(if ell.excess(lambda) > tol {
        ShapeClass::Droplet
    } else {
        ShapeClass::Ellipse
    })
}

fn hull_of_three(p: &[Complex64], settings: &Settings) -> ShapeClass {
    let diam = (p[0] - p[1]).norm().max((p[0] - p[2]).norm()).max((p[1] - p[2]).norm());
    if diam < 1e-9 {
        return ShapeClass::Point;
    }
    let d1 = p[1] - p[0];
    let d2 = p[2] - p[0];
    let area = 0.5 * (d1.re * d2.im - d1.im * d2.re).abs();
    if area > settings.triangle_area_tol * diam * diam {
        ShapeClass::Triangle
    } else {
        ShapeClass::Segment
    }
}

/// `v* B v` if `v` is an eigenvector of both hermitian parts of `B`.
fn common_eigenvalue(b: &CMatrix, v: &CVector, tol: f64) -> Option<Complex64> {
    let bs = b.adjoint();
    let h1 = (b + &bs) * c(0.5, 0.0);
    let h2 = (b - &bs) * c(0.0, -0.5);
    for h in [&h1, &h2] {
        let hv = h * v;
        let mu = v.dotc(&hv);
        if (hv - v * mu).norm() > tol {
            return None;
        }
    }
    Some(v.dotc(&(b * v)))
}

/// Numerical range of the compression of `B` to the complement of `v`.
fn complement_ellipse(b: &CMatrix, v: &CVector) -> (EllipseShape, CMatrix) {
    let vm = CMatrix::from_column_slice(3, 1, v.as_slice());
    let p = complement_basis(&vm);
    let bp = p.adjoint() * b * &p;
    let f = eig2(&bp);
    let delta = (fro_norm(&bp).powi(2) - f[0].norm_sqr() - f[1].norm_sqr()).max(0.0);
    (
        EllipseShape {
            foci: f,
            minor_axis: delta.sqrt(),
        },
        bp,
    )
}

/// Ellipticity criterion for a 3×3 pair: returns the ellipse when the
/// numerical range of `B1 + i B2` is one.
pub fn ellipse_test(b1: &HermitianMatrix, b2: &HermitianMatrix, settings: &Settings) -> Option<EllipseShape> {
    let b = complex_of(b1, b2);
    let lam = eig3(&b);
    let sq: f64 = lam.iter().map(|z| z.norm_sqr()).sum();
    let trbb = fro_norm(&b).powi(2);
    let delta = trbb - sq;
    let bnorm = fro_norm(&b);
    let diam = (lam[0] - lam[1]).norm().max((lam[0] - lam[2]).norm()).max((lam[1] - lam[2]).norm());
    let scale = diam.max(bnorm).max(1e-300);
    if delta <= 1e-10 * scale * scale {
        return None;
    }
    let tr = b[(0, 0)] + b[(1, 1)] + b[(2, 2)];
    let weighted: Complex64 = lam.iter().map(|z| z * z.norm_sqr()).sum();
    let b2m = &b * &b;
    let tr_bs_b2: Complex64 = (b.adjoint() * &b2m).trace();
    let point = tr + (weighted - tr_bs_b2) / delta;
    let tol = settings.ellipse_coincide_tol * scale;
    let k = (0..3).min_by(|&i, &j| (lam[i] - point).norm().total_cmp(&(lam[j] - point).norm()))?;
    // Clustered eigenvalues carry errors near eps^(1/3); the characteristic
    // polynomial from traces and the determinant stays accurate there.
    let c1 = 0.5 * (tr * tr - b2m.trace());
    let p = ((point - tr) * point + c1) * point - b.determinant();
    if (lam[k] - point).norm() > tol && p.norm() > tol * scale * scale {
        return None;
    }
    let others: Vec<Complex64> = (0..3).filter(|&i| i != k).map(|i| lam[i]).collect();
    Some(EllipseShape {
        foci: [others[0], others[1]],
        minor_axis: delta.sqrt(),
    })
}

fn pencil_gap(b1: &HermitianMatrix, b2: &HermitianMatrix, theta: f64) -> f64 {
    let p = HermitianMatrix::combination(&[theta.cos(), theta.sin()], &[b1, b2]);
    let e = eigh(p.matrix());
    e.values[1] - e.values[0]
}

/// Angles in `[0, 2π)` where the lowest eigenvalue of `cos θ B1 + sin θ B2`
/// is double, found by a scan with golden-section refinement.
pub fn double_min_angles(b1: &HermitianMatrix, b2: &HermitianMatrix, samples: usize, accept: f64) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let h = tau / samples as f64;
    let g: Vec<f64> = (0..samples).map(|k| pencil_gap(b1, b2, k as f64 * h)).collect();
    let mut out: Vec<f64> = Vec::new();
    for k in 0..samples {
        let prev = g[(k + samples - 1) % samples];
        let next = g[(k + 1) % samples];
        if g[k] > prev || g[k] > next {
            continue;
        }
        let (mut a, mut b) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - r * (b - a);
        let mut x2 = a + r * (b - a);
        let mut f1 = pencil_gap(b1, b2, x1);
        let mut f2 = pencil_gap(b1, b2, x2);
        for _ in 0..80 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = pencil_gap(b1, b2, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = pencil_gap(b1, b2, x2);
            }
        }
        let (t, f) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
        let t = t.rem_euclid(tau);
        if f < accept && !out.iter().any(|&s| circ_dist(s, t) < 1e-6) {
            out.push(t);
        }
    }
    out
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// Whether some pencil `u0 + u1 B1 + u2 B2` has rank one, verified through
/// its principal minors.
pub fn loaf_test(b1: &HermitianMatrix, b2: &HermitianMatrix, settings: &Settings) -> bool {
    let Some((n1, n2)) = normalize_pair(b1, b2) else {
        return false;
    };
    for t in double_min_angles(&n1, &n2, settings.loaf_scan, 1e-7) {
        let p = HermitianMatrix::combination(&[t.cos(), t.sin()], &[&n1, &n2]);
        let e = eigh(p.matrix());
        let shifted = p.sub(&HermitianMatrix::identity(3).scale(e.values[0])).expect("3x3");
        let scale = shifted.norm().max(1e-300);
        if e.values[2] - e.values[0] < 1e-6 {
            continue;
        }
        let m2 = crate::linalg::ops::principal_minors(&shifted, 2);
        let det = crate::linalg::ops::principal_minor(&shifted, &[0, 1, 2]).expect("3x3");
        let tol = settings.minor_tol;
        if m2.iter().all(|m| m.abs() < tol * scale * scale) && det.abs() < tol * scale.powi(3) {
            return true;
        }
    }
    false
}

/// Full shape decision.
pub fn classify_shape(b1: &HermitianMatrix, b2: &HermitianMatrix, settings: &Settings) -> Result<ShapeClass> {
    if b1.n() != 3 || b2.n() != 3 {
        return Err(JnrError::UnsupportedSize(b1.n().max(b2.n()), "3"));
    }
    let Some((n1, n2)) = normalize_pair(b1, b2) else {
        return classify_reducible(b1, b2, settings);
    };
    if !is_unitarily_irreducible(&n1, &n2, settings) {
        return classify_reducible(&n1, &n2, settings);
    }
    if ellipse_test(&n1, &n2, settings).is_some() {
        return Ok(ShapeClass::Ellipse);
    }
    if loaf_test(&n1, &n2, settings) {
        return Ok(ShapeClass::Loaf);
    }
    Ok(ShapeClass::Oval)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(rows: [[(f64, f64); 3]; 3]) -> (HermitianMatrix, HermitianMatrix) {
        let b = CMatrix::from_fn(3, 3, |i, j| c(rows[i][j].0, rows[i][j].1));
        HermitianMatrix::cartesian_parts(&b)
    }

    fn oval() -> (HermitianMatrix, HermitianMatrix) {
        pair([
            [(-1.0, 0.0), (1.0, 0.0), (1.0, 0.0)],
            [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)],
            [(0.0, 0.0), (0.0, 0.0), (0.5, 0.0)],
        ])
    }

    fn loaf() -> (HermitianMatrix, HermitianMatrix) {
        pair([
            [(0.5, 0.0), (0.0, 0.0), (0.0, -0.5)],
            [(0.0, 0.0), (-0.5, 0.0), (0.0, -0.5)],
            [(0.0, 0.5), (0.0, 0.5), (0.0, 1.0)],
        ])
    }

    fn droplet() -> (HermitianMatrix, HermitianMatrix) {
        pair([
            [(1.0, 0.0), (2.0, 0.0), (0.0, 0.0)],
            [(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
            [(0.0, 0.0), (0.0, 0.0), (0.0, 1.0)],
        ])
    }

    fn bordered() -> (HermitianMatrix, HermitianMatrix) {
        (
            HermitianMatrix::diag(&[1.0, 0.0, 0.0]),
            HermitianMatrix::from_real_rows(&[&[0., 0., 1.], &[0., 0., 0.], &[1., 0., 0.]]).unwrap(),
        )
    }

    #[test]
    fn exemplars() {
        let s = Settings::default();
        let (a, b) = oval();
        assert_eq!(classify_shape(&a, &b, &s).unwrap(), ShapeClass::Oval);
        let (a, b) = loaf();
        assert_eq!(classify_shape(&a, &b, &s).unwrap(), ShapeClass::Loaf);
        let (a, b) = droplet();
        assert_eq!(classify_shape(&a, &b, &s).unwrap(), ShapeClass::Droplet);
        let a = HermitianMatrix::diag(&[-1.0, 1.0, 0.0]);
        let b = HermitianMatrix::diag(&[0.0, 0.0, 1.0]);
        assert_eq!(classify_shape(&a, &b, &s).unwrap(), ShapeClass::Triangle);
        let (a, b) = bordered();
        assert_eq!(classify_shape(&a, &b, &s).unwrap(), ShapeClass::Ellipse);
    }

    #[test]
    fn rotated_commuting_pair_is_reducible() {
        let s = Settings::default();
        let q = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64 * 0.3, (i * j) as f64 * 0.2) + if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
            .qr()
            .q();
        let rot = |a: &HermitianMatrix| HermitianMatrix::new(q.adjoint() * a.matrix() * &q).unwrap();
        let a = rot(&HermitianMatrix::diag(&[-1.0, 1.0, 0.0]));
        let b = rot(&HermitianMatrix::diag(&[0.0, 0.0, 1.0]));
        assert!(!is_unitarily_irreducible(&a, &b, &s));
        assert_eq!(classify_shape(&a, &b, &s).unwrap(), ShapeClass::Triangle);
    }

    #[test]
    fn degenerate_shapes() {
        let s = Settings::default();
        let z = HermitianMatrix::zeros(3);
        let d = HermitianMatrix::diag(&[0.0, 1.0, 2.0]);
        assert_eq!(classify_shape(&d, &z, &s).unwrap(), ShapeClass::Segment);
        let i = HermitianMatrix::identity(3);
        assert_eq!(classify_shape(&i, &i, &s).unwrap(), ShapeClass::Point);
    }

    #[test]
    fn irreducibility() {
        let s = Settings::default();
        let a = HermitianMatrix::diag(&[1.0, 2.0, 3.0]);
        let b = HermitianMatrix::diag(&[3.0, -1.0, 0.0]);
        assert!(!is_unitarily_irreducible(&a, &b, &s));
        let x = HermitianMatrix::from_real_rows(&[&[0., 1., 0.], &[1., 0., 0.], &[0., 0., 0.]]).unwrap();
        let z = HermitianMatrix::diag(&[1.0, -1.0, 0.0]);
        assert!(!is_unitarily_irreducible(&x, &z, &s));
        let (a, b) = loaf();
        assert!(is_unitarily_irreducible(&a, &b, &s));
        assert!(irreducibility_minors(&a, &b).iter().all(|&m| m > 1e-6));
    }

    #[test]
    fn ellipse_criterion() {
        let s = Settings::default();
        let (a, b) = bordered();
        let e = ellipse_test(&a, &b, &s).expect("bordered pair is elliptic");
        assert!((e.minor_axis - 1.0).abs() < 1e-12);
        assert!((e.major_axis() - 2.0).abs() < 1e-12);
        let d1 = HermitianMatrix::diag(&[1.0, 2.0, -1.0]);
        let d2 = HermitianMatrix::diag(&[0.0, 1.0, 4.0]);
        assert!(ellipse_test(&d1, &d2, &s).is_none());
        let (a, b) = oval();
        assert!(ellipse_test(&a, &b, &s).is_none());
    }

    #[test]
    fn nilpotent_disc_is_an_ellipse() {
        // Triple eigenvalue 0; the range is the disc of radius 1/√2.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = pair([
            [(0.0, 0.0), (r, 0.0), (0.0, 0.0)],
            [(r, 0.0), (0.0, 0.0), (0.0, r)],
            [(0.0, 0.0), (0.0, r), (0.0, 0.0)],
        ]);
        let s = Settings::default();
        let e = ellipse_test(&a, &b, &s).expect("disc");
        assert!((e.minor_axis - 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(classify_shape(&a, &b, &s).unwrap(), ShapeClass::Ellipse);
    }

    #[test]
    fn loaf_criterion() {
        let s = Settings::default();
        let (a, b) = loaf();
        assert!(loaf_test(&a, &b, &s));
        let (a, b) = oval();
        assert!(!loaf_test(&a, &b, &s));
    }

    #[test]
    fn reducible_branch() {
        let s = Settings::default();
        let a = HermitianMatrix::diag(&[-1.0, 1.0, 0.0]);
        let b = HermitianMatrix::diag(&[0.0, 0.0, 1.0]);
        assert_eq!(classify_reducible(&a, &b, &s).unwrap(), ShapeClass::Triangle);
        let (a, b) = droplet();
        assert_eq!(classify_reducible(&a, &b, &s).unwrap(), ShapeClass::Droplet);
        let i = HermitianMatrix::identity(3);
        assert_eq!(classify_reducible(&i, &i, &s).unwrap(), ShapeClass::Point);
    }

    #[test]
    fn segment_counts_by_shape() {
        let (a, b) = droplet();
        let (n1, n2) = normalize_pair(&a, &b).unwrap();
        assert_eq!(double_min_angles(&n1, &n2, 720, 1e-7).len(), 2);
        let (a, b) = loaf();
        let (n1, n2) = normalize_pair(&a, &b).unwrap();
        assert_eq!(double_min_angles(&n1, &n2, 720, 1e-7).len(), 1);
        let (a, b) = oval();
        let (n1, n2) = normalize_pair(&a, &b).unwrap();
        assert_eq!(double_min_angles(&n1, &n2, 720, 1e-7).len(), 0);
        let a = HermitianMatrix::diag(&[-1.0, 1.0, 0.0]);
        let b = HermitianMatrix::diag(&[0.0, 0.0, 1.0]);
        let (n1, n2) = normalize_pair(&a, &b).unwrap();
        assert_eq!(double_min_angles(&n1, &n2, 720, 1e-7).len(), 3);
    }
}
