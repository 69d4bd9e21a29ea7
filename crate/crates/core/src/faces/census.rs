//! Face records: rank-3 faces from rank-one tuples and rank-2 elliptic discs.

use serde::Serialize;

use super::search::cluster_minima;
use super::tuples::{face_pair, find_rank1_tuples, FacePair, RankOneTuple};
use crate::classify::shape::{classify_shape, double_min_angles, ShapeClass};
use crate::error::{JnrError, Result};
use crate::geometry::direction::{dist, dot, norm, sub, Direction};
use crate::geometry::support::{face_dimension, face_extremes, face_map, segment_endpoints};
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{CMatrix, HermitianMatrix, MatrixTriple};
use crate::linalg::real::RMatrix;
use crate::settings::Settings;

/// A line segment in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl Segment {
    pub fn length(&self) -> f64 {
        dist(&self.a, &self.b)
    }

    /// Distance from `p` to the segment.
    pub fn distance_to(&self, p: &[f64; 3]) -> f64 {
        let d = sub(&self.b, &self.a);
        let l2 = dot(&d, &d);
        if l2 == 0.0 {
            return dist(p, &self.a);
        }
        let t = (dot(&sub(p, &self.a), &d) / l2).clamp(0.0, 1.0);
        let q = [self.a[0] + t * d[0], self.a[1] + t * d[1], self.a[2] + t * d[2]];
        dist(p, &q)
    }

    /// Same endpoints in either order, within `tol`.
    pub fn same_as(&self, o: &Segment, tol: f64) -> bool {
        (dist(&self.a, &o.a) < tol && dist(&self.b, &o.b) < tol) || (dist(&self.a, &o.b) < tol && dist(&self.b, &o.a) < tol)
    }
}

/// Planar ellipse in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipseParams {
    pub center: [f64; 3],
    /// Semi-axis vectors, longer first.
    pub semi_axes: [[f64; 3]; 2],
    /// Relative residual of a conic fitted to sampled boundary points.
    pub fit_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceRecord {
    pub direction: Direction,
    pub support_value: f64,
    /// Rank of the face projection (dimension of the lowest eigenspace).
    pub rank: usize,
    pub dim: usize,
    pub shape: ShapeClass,
    pub compressed_pair: Option<(HermitianMatrix, HermitianMatrix)>,
    /// One-dimensional exposed sub-faces of a rank-3 face.
    pub segments: Vec<Segment>,
    pub ellipse: Option<EllipseParams>,
    #[serde(skip)]
    pub basis: CMatrix,
    #[serde(skip)]
    pub pair: Option<FacePair>,
}

impl FaceRecord {
    pub fn is_non_elliptic(&self) -> bool {
        self.rank == 3 && self.dim == 2 && self.shape.is_non_elliptic()
    }

    pub fn is_elliptic(&self) -> bool {
        self.dim == 2 && self.shape == ShapeClass::Ellipse
    }
}

/// Record for the face exposed by the rank-one tuple `t`.
pub fn rank3_face(triple: &MatrixTriple, t: &RankOneTuple, settings: &Settings) -> Result<FaceRecord> {
    let basis = t.kernel_basis.clone();
    let dim = face_dimension(triple, &basis, settings.face_dim_tol)?;
    let mut rec = FaceRecord {
        direction: t.direction,
        support_value: -t.u0,
        rank: 3,
        dim,
        shape: match dim {
            0 => ShapeClass::Point,
            1 => ShapeClass::Segment,
            _ => ShapeClass::Oval,
        },
        compressed_pair: None,
        segments: Vec::new(),
        ellipse: None,
        basis,
        pair: None,
    };
    if dim == 2 {
        let pair = face_pair(triple, &rec.basis, settings)?;
        rec.shape = classify_shape(&pair.b1, &pair.b2, settings)?;
        rec.segments = face_segments(triple, &pair, settings);
        rec.compressed_pair = Some((pair.b1.clone(), pair.b2.clone()));
        rec.pair = Some(pair);
    }
    Ok(rec)
}

/// Boundary segments of a rank-3 face, found where the lowest eigenvalue of
/// `cos θ B1 + sin θ B2` is double.
pub fn face_segments(triple: &MatrixTriple, pair: &FacePair, settings: &Settings) -> Vec<Segment> {
    let scale = triple.scale();
    let mut out: Vec<Segment> = Vec::new();
    for th in double_min_angles(&pair.b1, &pair.b2, settings.loaf_scan, 1e-7) {
        let p = HermitianMatrix::combination(&[th.cos(), th.sin()], &[&pair.b1, &pair.b2]);
        let e = eigh(p.matrix());
        let lifted = &pair.basis * e.columns(0, 2);
        let (a, b) = segment_endpoints(triple, &lifted);
        let s = Segment { a, b };
        if s.length() > 1e-6 * scale && !out.iter().any(|o| o.same_as(&s, 1e-6 * scale)) {
            out.push(s);
        }
    }
    out
}

/// Ellipse of a rank-2 face from its 2×2 compression, checked by a conic fit
/// through boundary points computed from the face's own support function.
pub fn rank2_ellipse(triple: &MatrixTriple, basis: &CMatrix) -> Option<EllipseParams> {
    let (center, map) = face_map(triple, basis);
    // States 1/2 + x·E with |x| ≤ 1/√2 cover the 2×2 density matrices.
    let m = &map * std::f64::consts::FRAC_1_SQRT_2;
    let svd = m.clone().svd(true, false);
    let u = svd.u?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let axis = |k: usize| {
        let s = svd.singular_values[idx[k]];
        [u[(0, idx[k])] * s, u[(1, idx[k])] * s, u[(2, idx[k])] * s]
    };
    let (a1, a2) = (axis(0), axis(1));
    let (n1, n2) = (norm(&a1), norm(&a2));
    if n2 <= 1e-9 * n1.max(1e-300) {
        return None;
    }
    let e1 = a1.map(|x| x / n1);
    let e2 = a2.map(|x| x / n2);
    let k = 16;
    let mut design = RMatrix::zeros(k, 6);
    for j in 0..k {
        let t = std::f64::consts::TAU * (j as f64 + 0.25) / k as f64;
        let d = [
            t.cos() * e1[0] + t.sin() * e2[0],
            t.cos() * e1[1] + t.sin() * e2[1],
            t.cos() * e1[2] + t.sin() * e2[2],
        ];
        let (_, hi) = face_extremes(triple, basis, &d);
        let q = sub(&hi, &center);
        let x = dot(&q, &e1) / n1;
        let y = dot(&q, &e2) / n1;
        let row = [x * x, x * y, y * y, x, y, 1.0];
        for (c, v) in row.iter().enumerate() {
            design[(j, c)] = *v;
        }
    }
    let sv = crate::linalg::real::singular_values(&design);
    let residual = sv[5] / sv[0].max(1e-300);
    Some(EllipseParams {
        center,
        semi_axes: [a1, a2],
        fit_residual: residual,
    })
}

/// Rank-2 faces of dimension two, found by minimizing `λ2 − λ1`.
pub fn elliptic_census(triple: &MatrixTriple, settings: &Settings) -> Result<Vec<FaceRecord>> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let mut out = Vec::new();
    for m in cluster_minima(triple, 2, settings) {
        let p = triple.pencil(m.direction.u());
        let e = eigh(p.matrix());
        if e.low_cluster(settings.cluster_tol, p.norm()) != 2 {
            continue;
        }
        let basis = e.columns(0, 2);
        if face_dimension(triple, &basis, settings.face_dim_tol)? != 2 {
            continue;
        }
        let Some(ell) = rank2_ellipse(triple, &basis) else {
            continue;
        };
        if ell.fit_residual > settings.ellipse_fit_tol {
            log::warn!("ellipse fit residual {:.2e} above tolerance", ell.fit_residual);
        }
        out.push(FaceRecord {
            direction: m.direction,
            support_value: e.values[0],
            rank: 2,
            dim: 2,
            shape: ShapeClass::Ellipse,
            compressed_pair: None,
            segments: Vec::new(),
            ellipse: Some(ell),
            basis,
            pair: None,
        });
    }
    Ok(out)
}

/// All detected faces of rank 3 and the rank-2 elliptic discs.
#[derive(Debug, Clone, Serialize)]
pub struct FaceCensus {
    pub tuples: Vec<RankOneTuple>,
    pub faces: Vec<FaceRecord>,
    pub rejected_candidates: usize,
    pub continuum_suspected: bool,
}

impl FaceCensus {
    pub fn non_elliptic(&self) -> impl Iterator<Item = &FaceRecord> {
        self.faces.iter().filter(|f| f.is_non_elliptic())
    }

    pub fn elliptic(&self) -> impl Iterator<Item = &FaceRecord> {
        self.faces.iter().filter(|f| f.is_elliptic())
    }

    /// Faces of dimension at least one.
    pub fn non_singleton(&self) -> impl Iterator<Item = &FaceRecord> {
        self.faces.iter().filter(|f| f.dim >= 1)
    }
}

/// Rank-3 faces only (no elliptic search).
pub fn rank3_census(triple: &MatrixTriple, settings: &Settings) -> Result<FaceCensus> {
    let search = find_rank1_tuples(triple, settings)?;
    let faces = search
        .tuples
        .iter()
        .map(|t| rank3_face(triple, t, settings))
        .collect::<Result<Vec<_>>>()?;
    Ok(FaceCensus {
        tuples: search.tuples,
        faces,
        rejected_candidates: search.rejected,
        continuum_suspected: search.continuum_suspected,
    })
}

/// Rank-3 faces followed by the rank-2 elliptic faces.
pub fn detect_faces(triple: &MatrixTriple, settings: &Settings) -> Result<FaceCensus> {
    let mut census = rank3_census(triple, settings)?;
    census.faces.extend(elliptic_census(triple, settings)?);
    Ok(census)
}
