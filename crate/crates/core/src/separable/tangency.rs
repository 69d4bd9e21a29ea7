//! Product states on the flat faces of W, and flat or ruled patches of a
//! sampled separable boundary.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::seesaw::seesaw_min;
use crate::classify::shape::ShapeClass;
use crate::error::{JnrError, Result};
use crate::faces::census::FaceCensus;
use crate::geometry::direction::{cross, dot, norm, sub, Direction};
use crate::geometry::mesh::BoundaryMesh;
use crate::geometry::support::measure_vector;
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::MatrixTriple;
use crate::settings::Settings;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencyEntry {
    pub direction: Direction,
    pub rank: usize,
    pub dim: usize,
    pub shape: ShapeClass,
    /// `<ψ|H|ψ> − λ_min(H)` for the best product vector `ψ`; zero exactly
    /// when the image of `ψ` lies in the face.
    pub excess: f64,
    pub point: [f64; 3],
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencyReport {
    pub faces: Vec<TangencyEntry>,
    pub all_pass: bool,
}

/// Searches each non-singleton face of the census for a product state.
/// A face that fails with the configured restarts is retried with eight
/// times as many before it is reported.
pub fn tangency_check(triple: &MatrixTriple, census: &FaceCensus, tol: f64, settings: &Settings) -> Result<TangencyReport> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let mut faces = Vec::new();
    for (k, f) in census.non_singleton().enumerate() {
        let h = triple.pencil(f.direction.u());
        let lmin = eigh(h.matrix()).values[0];
        let mut entry = None;
        for restarts in [settings.seesaw_restarts, 8 * settings.seesaw_restarts] {
            let run = seesaw_min(h.matrix(), restarts, settings.seed, k as u64, settings.seesaw_tol, settings.seesaw_max_iter);
            let excess = (run.value - lmin).max(0.0);
            let e = TangencyEntry {
                direction: f.direction,
                rank: f.rank,
                dim: f.dim,
                shape: f.shape,
                excess,
                point: measure_vector(triple, &run.state.vector()),
                pass: excess <= tol,
            };
            let done = e.pass;
            entry = Some(e);
            if done {
                break;
            }
        }
        let e = entry.expect("at least one attempt");
        if !e.pass {
            log::warn!("no product state found on the face exposed by {:?} (excess {:.2e})", e.direction.u(), e.excess);
        }
        faces.push(e);
    }
    let all_pass = faces.iter().all(|f| f.pass);
    Ok(TangencyReport { faces, all_pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatKind {
    /// Long thin region of nearly parallel facets.
    RuledCandidate,
    /// Region holding a noticeable share of the surface area.
    FlatFace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatRegion {
    pub normal: [f64; 3],
    pub triangles: usize,
    pub area: f64,
    pub area_fraction: f64,
    pub aspect_ratio: f64,
    pub kinds: Vec<FlatKind>,
}

/// Thresholds for [`segment_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeThresholds {
    pub angle: f64,
    pub aspect: f64,
    pub area_fraction: f64,
}

impl Default for ProbeThresholds {
    fn default() -> Self {
        Self {
            angle: 1e-3,
            aspect: 5.0,
            area_fraction: 0.01,
        }
    }
}

/// Groups edge-adjacent hull triangles whose normals agree within
/// `angle` and flags thin or large groups. Diagnostic only.
///
/// Slivers (area below 10⁻⁶ of the total) have unreliable normals; they join
/// any neighbouring group and never start one.
pub fn segment_probe(mesh: &BoundaryMesh, th: &ProbeThresholds) -> Vec<FlatRegion> {
    let nt = mesh.triangles.len();
    if nt == 0 {
        return Vec::new();
    }
    let normals: Vec<[f64; 3]> = mesh
        .triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|i| mesh.vertices[i]);
            let n = cross(&sub(&b, &a), &sub(&c, &a));
            let l = norm(&n).max(1e-300);
            n.map(|x| x / l)
        })
        .collect();
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, t) in mesh.triangles.iter().enumerate() {
        for e in 0..3 {
            let (i, j) = (t[e], t[(e + 1) % 3]);
            by_edge.entry((i.min(j), i.max(j))).or_default().push(k);
        }
    }
    let total = mesh.total_area().max(1e-300);
    let cos_tol = th.angle.cos();
    let sliver: Vec<bool> = mesh.triangles.iter().map(|t| mesh.triangle_area(t) < 1e-6 * total).collect();
    let mut label = vec![usize::MAX; nt];
    let mut out = Vec::new();
    for seed in 0..nt {
        if label[seed] != usize::MAX || sliver[seed] {
            continue;
        }
        let id = out.len();
        label[seed] = id;
        let mut members = vec![seed];
        let mut stack = vec![seed];
        // Slivers may bridge several groups, so they are tracked per group.
        let mut crossed = HashSet::new();
        while let Some(k) = stack.pop() {
            let t = mesh.triangles[k];
            for e in 0..3 {
                let (i, j) = (t[e], t[(e + 1) % 3]);
                for &m in &by_edge[&(i.min(j), i.max(j))] {
                    if sliver[m] {
                        if crossed.insert(m) {
                            stack.push(m);
                        }
                    } else if label[m] == usize::MAX && dot(&normals[m], &normals[seed]) >= cos_tol {
                        label[m] = id;
                        members.push(m);
                        stack.push(m);
                    }
                }
            }
        }
        let area: f64 = members.iter().map(|&m| mesh.triangle_area(&mesh.triangles[m])).sum();
        let aspect = region_aspect(mesh, &members, &normals[seed]);
        let mut kinds = Vec::new();
        if members.len() >= 2 && aspect > th.aspect {
            kinds.push(FlatKind::RuledCandidate);
        }
        if area / total > th.area_fraction {
            kinds.push(FlatKind::FlatFace);
        }
        out.push(FlatRegion {
            normal: normals[seed],
            triangles: members.len(),
            area,
            area_fraction: area / total,
            aspect_ratio: aspect,
            kinds,
        });
    }
    out.retain(|r| !r.kinds.is_empty());
    out
}

/// Ratio of the principal extents of the region's vertices in its plane.
fn region_aspect(mesh: &BoundaryMesh, members: &[usize], normal: &[f64; 3]) -> f64 {
    let mut idx: Vec<usize> = members.iter().flat_map(|&m| mesh.triangles[m]).collect();
    idx.sort_unstable();
    idx.dedup();
    let pts: Vec<[f64; 3]> = idx.iter().map(|&i| mesh.vertices[i]).collect();
    let d = Direction::new(*normal).unwrap_or(Direction::axis(2));
    let (e1, e2) = d.tangent_frame();
    let xy: Vec<(f64, f64)> = pts.iter().map(|p| (dot(p, &e1), dot(p, &e2))).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &xy {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let axes = [(theta.cos(), theta.sin()), (-theta.sin(), theta.cos())];
    let extent = |a: (f64, f64)| {
        let proj = xy.iter().map(|(x, y)| x * a.0 + y * a.1);
        let (lo, hi) = proj.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    };
    let (w1, w2) = (extent(axes[0]), extent(axes[1]));
    w1.max(w2) / w1.min(w2).max(1e-12 * w1.max(w2)).max(1e-300)
}
