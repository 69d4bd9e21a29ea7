//! Corner points of W: joint spectrum, normal-cone dimension from support
//! probes, and the block structure a corner forces on the matrices.

pub mod spectrum;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{JnrError, Result};
use crate::faces::census::Segment;
use crate::faces::search::nelder_mead_sphere;
use crate::geometry::direction::{dist, dot, fibonacci_sphere, jittered_sphere, Direction};
use crate::geometry::support::support;
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::{c, fro_norm, CMatrix, MatrixTriple};
use crate::linalg::ops::{complement_basis, compress_unchecked};
use crate::linalg::real::{singular_values, RMatrix};
use crate::settings::Settings;
pub use spectrum::{joint_spectrum, JointSpectrumPoint};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerVerdict {
    pub point: [f64; 3],
    pub is_corner: bool,
    /// Linear rank of the supporting directions found (0 when none was).
    pub normal_cone_dim: usize,
    pub supporting_directions: Vec<Direction>,
    /// Largest `h(u) − <p, u>` over the probes; positive values mean `p`
    /// lies outside the probed halfspaces.
    pub max_violation: f64,
}

/// Normal-cone test at `p` from `probes` jittered lattice directions.
pub fn is_corner_point(
    triple: &MatrixTriple,
    p: &[f64; 3],
    probes: usize,
    seed: u64,
    settings: &Settings,
) -> Result<CornerVerdict> {
    let dirs = jittered_sphere(probes.max(4), seed);
    let tol = settings.corner_point_tol * triple.scale();
    let rows: Vec<(f64, bool, Direction)> = dirs
        .par_iter()
        .map(|u| {
            let s = support(triple, u, settings);
            let gap = s.support_value - u.dot(p);
            let hit = dist(&s.point, p) <= tol || gap.abs() <= tol;
            (gap, hit, *u)
        })
        .collect();
    let max_violation = rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    if max_violation > tol {
        return Err(JnrError::NotInRange(max_violation));
    }
    let supporting: Vec<Direction> = rows.iter().filter(|r| r.1).map(|r| r.2).collect();
    let rank = direction_rank(&supporting, settings.cone_rank_tol);
    Ok(CornerVerdict {
        point: *p,
        is_corner: rank == 3,
        normal_cone_dim: rank,
        supporting_directions: supporting,
        max_violation,
    })
}

/// Linear rank of a set of unit vectors, singular values relative to the
/// largest.
pub fn direction_rank(dirs: &[Direction], rel: f64) -> usize {
    if dirs.is_empty() {
        return 0;
    }
    let mut m = RMatrix::zeros(dirs.len(), 3);
    for (k, d) in dirs.iter().enumerate() {
        for j in 0..3 {
            m[(k, j)] = d.u()[j];
        }
    }
    let sv = singular_values(&m);
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel * top).count()
}

fn projector(q: &CMatrix) -> CMatrix {
    q * q.adjoint()
}

/// `A_i ∈ ℂP ⊕ P'𝕄P'` for the projector onto the joint eigenspace of `p`,
/// after confirming that the image of `p` is a corner.
pub fn verify_corner_block_structure(triple: &MatrixTriple, p: &JointSpectrumPoint, settings: &Settings) -> Result<bool> {
    let v = is_corner_point(triple, &p.lambda, settings.corner_probes, settings.seed, settings)?;
    if !v.is_corner {
        return Err(JnrError::Degenerate(format!("{:?} is not a corner point", p.lambda)));
    }
    Ok(block_defect(triple, p) <= settings.joint_tol)
}

/// Largest of `‖P'A_iP‖` and `‖PA_iP − λ_iP‖` relative to `‖A_i‖`.
pub fn block_defect(triple: &MatrixTriple, p: &JointSpectrumPoint) -> f64 {
    let n = triple.n();
    let pp = projector(&p.basis);
    let qq = CMatrix::identity(n, n) - &pp;
    let mut worst = 0.0f64;
    for i in 0..3 {
        let a = triple.get(i).matrix();
        let nrm = fro_norm(a);
        if nrm == 0.0 {
            continue;
        }
        let off = &qq * a * &pp;
        let diag = &pp * a * &pp - &pp * c(p.lambda[i], 0.0);
        worst = worst.max(fro_norm(&off) / nrm).max(fro_norm(&diag) / nrm);
    }
    worst
}

/// The triple compressed to the orthogonal complement of the joint
/// eigenspace, so that W = conv({λ} ∪ W(compressed)).
pub fn split_at_corner(triple: &MatrixTriple, p: &JointSpectrumPoint, settings: &Settings) -> Result<MatrixTriple> {
    let defect = block_defect(triple, p);
    if defect > settings.joint_tol {
        return Err(JnrError::BlockStructure(defect));
    }
    if p.eigenspace_dim >= triple.n() {
        return Err(JnrError::Degenerate("joint eigenspace is the whole space".into()));
    }
    let comp = complement_basis(&p.basis);
    Ok(triple.map(|a| compress_unchecked(a, &comp)))
}

/// Smallest `<x, u> − h(u)` summed over the endpoints, minimized over `u`:
/// zero when some supporting plane of W contains the whole segment.
pub fn supporting_plane_gap(triple: &MatrixTriple, s: &Segment) -> (Direction, f64) {
    let f = |u: &Direction| {
        let h = eigh(triple.pencil(u.u()).matrix()).values[0];
        (u.dot(&s.a) - h).max(0.0) + (u.dot(&s.b) - h).max(0.0)
    };
    let starts = fibonacci_sphere(64);
    let step = 0.5 * (4.0 * std::f64::consts::PI / 64.0f64).sqrt();
    starts
        .par_iter()
        .map(|d| nelder_mead_sphere(f, d, step, 400))
        .collect::<Vec<_>>()
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeSegmentCheck {
    pub point: [f64; 3],
    /// The order is four, so the point must be a corner.
    pub theorem_applies: bool,
    pub verdict: CornerVerdict,
    /// A validated configuration in order four that is not a corner.
    pub falsified: bool,
}

/// Three distinct boundary segments through a common endpoint; for order four
/// the common point must be a corner.
pub fn check_three_segment_corner(
    triple: &MatrixTriple,
    segments: &[Segment; 3],
    settings: &Settings,
) -> Result<ThreeSegmentCheck> {
    let scale = triple.scale();
    let tol = 1e-6 * scale;
    for s in segments {
        if s.length() <= tol {
            return Err(JnrError::InvalidSegments(format!("segment {s:?} is degenerate")));
        }
        let (_, gap) = supporting_plane_gap(triple, s);
        if gap > tol {
            return Err(JnrError::InvalidSegments(format!("segment {s:?} is not in a supporting plane (gap {gap:.2e})")));
        }
    }
    for i in 0..3 {
        for j in 0..i {
            if segments[i].same_as(&segments[j], tol) {
                return Err(JnrError::InvalidSegments("segments are not distinct".into()));
            }
        }
    }
    let p = common_endpoint(segments, tol)
        .ok_or_else(|| JnrError::InvalidSegments("segments do not share an endpoint".into()))?;
    let verdict = is_corner_point(triple, &p, settings.corner_probes, settings.seed, settings)?;
    let theorem_applies = triple.n() == 4;
    let falsified = theorem_applies && !verdict.is_corner;
    if falsified {
        log::warn!("three boundary segments meet at {p:?} in order four but no corner was detected");
    }
    Ok(ThreeSegmentCheck {
        point: p,
        theorem_applies,
        verdict,
        falsified,
    })
}

fn common_endpoint(segments: &[Segment; 3], tol: f64) -> Option<[f64; 3]> {
    for cand in [segments[0].a, segments[0].b] {
        if segments[1..]
            .iter()
            .all(|s| dist(&s.a, &cand) <= tol || dist(&s.b, &cand) <= tol)
        {
            return Some(cand);
        }
    }
    None
}

/// Distinct segments of `faces` with an endpoint at `p`, oriented to start
/// at `p`.
pub fn segments_through(segments: &[Segment], p: &[f64; 3], tol: f64) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    for s in segments {
        let oriented = if dist(&s.a, p) <= tol {
            Segment { a: s.a, b: s.b }
        } else if dist(&s.b, p) <= tol {
            Segment { a: s.b, b: s.a }
        } else {
            continue;
        };
        if !out.iter().any(|o| o.same_as(&oriented, tol)) {
            out.push(oriented);
        }
    }
    out
}

/// Whether `<p, u>` attains the support value at `u`.
pub fn supports(triple: &MatrixTriple, p: &[f64; 3], u: &Direction, tol: f64) -> bool {
    let h = eigh(triple.pencil(u.u()).matrix()).values[0];
    (dot(p, u.u()) - h).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn tetrahedron_vertices_are_corners() {
        let s = Settings::default();
        let t = tetra();
        let v = is_corner_point(&t, &[1.0, 1.0, 1.0], 2000, 1, &s).unwrap();
        assert!(v.is_corner);
        assert_eq!(v.normal_cone_dim, 3);
        // Edge midpoint and facet centroid.
        let e = is_corner_point(&t, &[1.0, 0.0, 0.0], 2000, 1, &s).unwrap();
        assert!(!e.is_corner && e.normal_cone_dim <= 2, "{}", e.normal_cone_dim);
        let f = is_corner_point(&t, &[-1.0 / 3.0; 3], 2000, 1, &s).unwrap();
        assert!(!f.is_corner && f.normal_cone_dim <= 1);
    }

    #[test]
    fn outside_point_is_rejected() {
        let r = is_corner_point(&tetra(), &[1.0, 1.0, 1.5], 500, 1, &Settings::default());
        assert!(matches!(r, Err(JnrError::NotInRange(_))));
    }

    #[test]
    fn block_structure_and_split() {
        let s = Settings::default();
        let t = tetra();
        let js = joint_spectrum(&t, &s);
        let p = js.iter().find(|p| p.lambda == [1.0, 1.0, 1.0]).unwrap();
        assert!(verify_corner_block_structure(&t, p, &s).unwrap());
        let rest = split_at_corner(&t, p, &s).unwrap();
        assert_eq!(rest.n(), 3);
        let rest_js = joint_spectrum(&rest, &s);
        assert_eq!(rest_js.len(), 3);
        for q in rest_js {
            assert!((q.lambda.iter().sum::<f64>() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn whole_space_cannot_split() {
        let i = HermitianMatrix::identity(4);
        let t = MatrixTriple::new(i.clone(), i.clone(), i).unwrap();
        let s = Settings::default();
        let p = &joint_spectrum(&t, &s)[0];
        assert!(matches!(split_at_corner(&t, p, &s), Err(JnrError::Degenerate(_))));
    }

    #[test]
    fn three_edges_at_a_vertex() {
        let s = Settings::default();
        let t = tetra();
        let v = [1.0, 1.0, 1.0];
        let seg = |b: [f64; 3]| Segment { a: v, b };
        let chk = check_three_segment_corner(&t, &[seg([1.0, -1.0, -1.0]), seg([-1.0, 1.0, -1.0]), seg([-1.0, -1.0, 1.0])], &s).unwrap();
        assert!(chk.theorem_applies && chk.verdict.is_corner && !chk.falsified);
        // A chord through the interior is not in a supporting plane.
        let bad = [seg([-1.0, -1.0, 1.0]), seg([1.0, -1.0, -1.0]), Segment { a: v, b: [-1.0 / 3.0; 3] }];
        assert!(matches!(check_three_segment_corner(&t, &bad, &s), Err(JnrError::InvalidSegments(_))));
    }
}
