//! Intersections of exposed faces through their support subspaces.
//!
//! The face of W exposed by `u` is the image of the states supported on the
//! lowest eigenspace of `u·A`, so two faces meet exactly in the image of the
//! states supported on the intersection of their subspaces.

use serde::Serialize;

use super::census::{FaceRecord, Segment};
use crate::geometry::direction::{dist, sub, Direction};
use crate::geometry::support::{face_dimension, measure_vector, min_eigenspace, segment_endpoints};
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{CMatrix, MatrixTriple};
use crate::linalg::ops::compress_unchecked;
use crate::settings::Settings;

/// Orthonormal basis of `span(q1) ∩ span(q2)` from the principal angles with
/// sine below `tol`, and the smallest sine seen.
pub fn subspace_intersection(q1: &CMatrix, q2: &CMatrix, tol: f64) -> (CMatrix, f64) {
    let m = q1.adjoint() * q2;
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let mut cols = Vec::new();
    let mut min_sine = f64::INFINITY;
    for (k, &s) in svd.singular_values.iter().enumerate() {
        let s = s.min(1.0);
        let sine = ((1.0 - s) * (1.0 + s)).max(0.0).sqrt();
        min_sine = min_sine.min(sine);
        if sine < tol {
            cols.push(q1 * u.column(k));
        }
    }
    let n = q1.nrows();
    let mut basis = CMatrix::zeros(n, cols.len());
    for (k, v) in cols.iter().enumerate() {
        basis.set_column(k, v);
    }
    // Re-orthonormalize.
    if !cols.is_empty() {
        let qr = basis.clone().qr();
        basis = qr.q().columns(0, cols.len()).into_owned();
    }
    (basis, min_sine)
}

/// Shape of `F ∩ G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IntersectionKind {
    Empty,
    Point { p: [f64; 3] },
    Segment { segment: Segment },
    Larger { dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceIntersection {
    pub kind: IntersectionKind,
    /// Dimension of the intersection of the support subspaces.
    pub subspace_dim: usize,
    /// Whether the lowest eigenspace of the summed direction is exactly the
    /// intersection subspace (so the intersection is an exposed face).
    pub exposed: bool,
    pub min_sine: f64,
}

/// Intersection of two faces decided at principal-angle tolerance `tol`.
pub fn intersect_faces(
    triple: &MatrixTriple,
    f: &FaceRecord,
    g: &FaceRecord,
    tol: f64,
    settings: &Settings,
) -> FaceIntersection {
    let (r, min_sine) = subspace_intersection(&f.basis, &g.basis, tol);
    let k = r.ncols();
    if k == 0 {
        return FaceIntersection {
            kind: IntersectionKind::Empty,
            subspace_dim: 0,
            exposed: false,
            min_sine,
        };
    }
    let dim = if k == 1 {
        0
    } else {
        face_dimension(triple, &r, settings.face_dim_tol).unwrap_or(0)
    };
    let kind = match dim {
        0 => IntersectionKind::Point {
            p: measure_vector(triple, &r.column(0).into_owned()),
        },
        1 => {
            let (a, b) = segment_endpoints(triple, &r);
            IntersectionKind::Segment {
                segment: Segment { a, b },
            }
        }
        d => IntersectionKind::Larger { dim: d },
    };
    let exposed = exposes_subspace(triple, &f.direction, &g.direction, &r, tol, settings);
    FaceIntersection {
        kind,
        subspace_dim: k,
        exposed,
        min_sine,
    }
}

/// The direction `normalize(u + v)` has lowest eigenspace equal to `r`.
pub fn exposes_subspace(
    triple: &MatrixTriple,
    u: &Direction,
    v: &Direction,
    r: &CMatrix,
    tol: f64,
    settings: &Settings,
) -> bool {
    let w = [u.u()[0] + v.u()[0], u.u()[1] + v.u()[1], u.u()[2] + v.u()[2]];
    let Ok(d) = Direction::new(w) else {
        return false;
    };
    let (_, q) = min_eigenspace(triple, &d, settings);
    if q.ncols() != r.ncols() {
        return false;
    }
    let (common, _) = subspace_intersection(&q, r, tol);
    common.ncols() == r.ncols()
}

/// Upper and lower bounds on the Euclidean distance between two faces from
/// Frank–Wolfe on pairs of states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaceDistance {
    pub upper: f64,
    pub lower: f64,
}

pub fn face_distance(triple: &MatrixTriple, f: &CMatrix, g: &CMatrix, iters: usize) -> FaceDistance {
    let image = |basis: &CMatrix, v: &CMatrix| measure_vector(triple, &(basis * v).column(0).into_owned());
    let lmo = |basis: &CMatrix, d: &[f64; 3]| {
        let p = compress_unchecked(&triple.pencil(d), basis);
        let e = eigh(p.matrix());
        image(basis, &e.columns(0, 1))
    };
    let mut x = measure_vector(triple, &f.column(0).into_owned());
    let mut y = measure_vector(triple, &g.column(0).into_owned());
    let mut lower = 0.0f64;
    for _ in 0..iters {
        let d = sub(&x, &y);
        // Gradient of |x - y|^2 / 2 is (d, -d).
        let sx = lmo(f, &d);
        let sy = lmo(g, &d.map(|t| -t));
        let dx = sub(&sx, &x);
        let dy = sub(&sy, &y);
        let gap = -(dot3(&d, &dx) - dot3(&d, &dy));
        let fval = 0.5 * dot3(&d, &d);
        lower = lower.max(fval - gap);
        let step_dir = sub(&dx, &dy);
        let den = dot3(&step_dir, &step_dir);
        if gap <= 1e-18 || den == 0.0 {
            break;
        }
        let t = (gap / den).min(1.0);
        for i in 0..3 {
            x[i] += t * dx[i];
            y[i] += t * dy[i];
        }
    }
    FaceDistance {
        upper: dist(&x, &y),
        lower: (2.0 * lower).max(0.0).sqrt(),
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faces::census::detect_faces;
    use crate::linalg::hermitian::c;
    use crate::linalg::hermitian::HermitianMatrix;

    fn tetra() -> MatrixTriple {
        MatrixTriple::new(
            HermitianMatrix::diag(&[1.0, 1.0, -1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, -1.0, 1.0, -1.0]),
            HermitianMatrix::diag(&[1.0, -1.0, -1.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn coordinate_subspaces() {
        let q1 = CMatrix::identity(4, 3);
        let mut q2 = CMatrix::zeros(4, 3);
        q2[(1, 0)] = c(1.0, 0.0);
        q2[(2, 1)] = c(1.0, 0.0);
        q2[(3, 2)] = c(1.0, 0.0);
        let (r, _) = subspace_intersection(&q1, &q2, 1e-8);
        assert_eq!(r.ncols(), 2);
        let q3 = CMatrix::identity(4, 4).columns(3, 1).into_owned();
        let (r, s) = subspace_intersection(&q1, &q3, 1e-8);
        assert_eq!(r.ncols(), 0);
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_facets_share_exposed_edges() {
        let s = Settings {
            search_grid: 128,
            ..Settings::default()
        };
        let t = tetra();
        let c = detect_faces(&t, &s).unwrap();
        for i in 0..c.faces.len() {
            for j in (i + 1)..c.faces.len() {
                let x = intersect_faces(&t, &c.faces[i], &c.faces[j], 1e-5, &s);
                assert!(x.exposed);
                match x.kind {
                    IntersectionKind::Segment { segment } => assert!((segment.length() - 8f64.sqrt()).abs() < 1e-9),
                    k => panic!("{k:?}"),
                }
            }
        }
    }

    #[test]
    fn distance_between_opposite_points() {
        let t = tetra();
        let e = CMatrix::identity(4, 4);
        let f = e.columns(0, 1).into_owned();
        let g = e.columns(1, 2).into_owned();
        // Vertex (1,1,1) against the edge (1,-1,-1)-(-1,1,-1).
        let d = face_distance(&t, &f, &g, 200);
        let want = 6f64.sqrt();
        assert!((d.upper - want).abs() < 1e-6, "{d:?}");
        assert!(d.lower <= d.upper + 1e-12 && d.lower > want - 1e-3);
    }
}
