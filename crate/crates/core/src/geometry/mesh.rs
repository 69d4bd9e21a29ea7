use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::direction::{jittered_sphere, Direction};
use super::hull::{convex_hull, dedup_points, diameter_bound};
use super::oracle::{OracleAnswer, SupportOracle, WOracle};
use crate::error::{JnrError, Result};
use crate::linalg::hermitian::MatrixTriple;
use crate::settings::Settings;

/// Triangulated boundary approximation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    /// Set when the sampled points span fewer than three dimensions; the
    /// triangle list is then empty and `vertices` holds the distinct points.
    pub degenerate: bool,
}

impl BoundaryMesh {
    pub fn from_points(points: &[[f64; 3]], settings: &Settings) -> Self {
        match convex_hull(points, settings.hull_tol) {
            Some(h) => Self {
                vertices: h.vertices,
                triangles: h.triangles,
                degenerate: false,
            },
            None => {
                let tol = settings.hull_tol * diameter_bound(points).max(1e-300);
                Self {
                    vertices: dedup_points(points, tol),
                    triangles: Vec::new(),
                    degenerate: true,
                }
            }
        }
    }

    /// Wavefront OBJ text: `v` lines then 1-based `f` lines, 9 significant
    /// digits.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", sig9(v[0]), sig9(v[1]), sig9(v[2]));
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }

    pub fn triangle_area(&self, t: &[usize; 3]) -> f64 {
        use super::direction::{cross, norm, sub};
        let [a, b, c] = t.map(|i| self.vertices[i]);
        0.5 * norm(&cross(&sub(&b, &a), &sub(&c, &a)))
    }

    pub fn total_area(&self) -> f64 {
        self.triangles.iter().map(|t| self.triangle_area(t)).sum()
    }
}

fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{:.8e}", x)
}

/// Queries `oracle` in every direction, keeping results in direction order.
pub fn query_all(
    oracle: &dyn SupportOracle,
    triple: &MatrixTriple,
    dirs: &[Direction],
    settings: &Settings,
) -> Vec<Result<OracleAnswer>> {
    dirs.par_iter()
        .enumerate()
        .map(|(i, d)| oracle.query(triple, d, settings, i as u64))
        .collect()
}

/// Mesh of the boundary of W from `num_dirs` seeded lattice directions.
pub fn sample_boundary(
    triple: &MatrixTriple,
    num_dirs: usize,
    seed: u64,
    settings: &Settings,
) -> Result<BoundaryMesh> {
    sample_with(&WOracle, triple, num_dirs, seed, settings).map(|(m, _)| m)
}

/// Mesh of the points returned by any support oracle; failed directions are
/// logged and skipped. Also returns the per-direction answers.
pub fn sample_with(
    oracle: &dyn SupportOracle,
    triple: &MatrixTriple,
    num_dirs: usize,
    seed: u64,
    settings: &Settings,
) -> Result<(BoundaryMesh, Vec<(Direction, Result<OracleAnswer>)>)> {
    if num_dirs < 4 {
        return Err(JnrError::Degenerate(format!(
            "at least 4 directions are needed, got {num_dirs}"
        )));
    }
    let dirs = jittered_sphere(num_dirs, seed);
    let answers = query_all(oracle, triple, &dirs, settings);
    let mut points = Vec::with_capacity(num_dirs);
    for (i, a) in answers.iter().enumerate() {
        match a {
            Ok(a) => points.push(a.point),
            Err(e) => log::warn!("{} oracle failed at direction {i}: {e}", oracle.name()),
        }
    }
    let mesh = BoundaryMesh::from_points(&points, settings);
    Ok((mesh, dirs.into_iter().zip(answers).collect()))
}
