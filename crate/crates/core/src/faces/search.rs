//! Multistart search for directions where the lowest `m` eigenvalues of the
//! pencil `u·A` coalesce.

use rayon::prelude::*;

use crate::geometry::direction::{fibonacci_sphere, Direction};
use crate::linalg::eigen::eigh;
use crate::linalg::hermitian::MatrixTriple;
use crate::linalg::ops::{compress_unchecked, inner};
use crate::settings::Settings;

/// `λ_m − λ_1` of the pencil.
pub fn cluster_gap(triple: &MatrixTriple, u: &Direction, m: usize) -> f64 {
    let e = eigh(triple.pencil(u.u()).matrix());
    e.values[m - 1] - e.values[0]
}

/// Nelder–Mead on the tangent chart at `start`, simplex edge `step`.
pub fn nelder_mead_sphere<F: Fn(&Direction) -> f64>(
    f: F,
    start: &Direction,
    step: f64,
    iters: usize,
) -> (Direction, f64) {
    let frame = start.tangent_frame();
    let eval = |p: [f64; 2]| f(&start.chart(&frame, p[0], p[1]));
    let mut simplex = [[0.0, 0.0], [step, 0.0], [0.0, step]];
    let mut vals = simplex.map(eval);
    for _ in 0..iters {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = idx.map(|i| simplex[i]);
        vals = idx.map(|i| vals[i]);
        let size = dist2(&simplex[0], &simplex[1]).max(dist2(&simplex[0], &simplex[2]));
        if size < 1e-24 || vals[2] - vals[0] <= 1e-15 * vals[0].abs().max(1e-300) {
            break;
        }
        let cen = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| [cen[0] + t * (simplex[2][0] - cen[0]), cen[1] + t * (simplex[2][1] - cen[1])];
        let xr = along(-1.0);
        let fr = eval(xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = eval(xe);
            if fe < fr {
                simplex[2] = xe;
                vals[2] = fe;
            } else {
                simplex[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr < vals[2] {
                let x = along(-0.5);
                (x, eval(x))
            } else {
                let x = along(0.5);
                (x, eval(x))
            };
            if fc < vals[2].min(fr) {
                simplex[2] = xc;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        0.5 * (simplex[0][0] + simplex[k][0]),
                        0.5 * (simplex[0][1] + simplex[k][1]),
                    ];
                    vals[k] = eval(simplex[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    (start.chart(&frame, simplex[best][0], simplex[best][1]), vals[best])
}

fn dist2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Gauss–Newton on the traceless part of the pencil compressed to its lowest
/// `m` eigenvectors; stops when a step no longer reduces the gap.
pub fn refine_cluster(triple: &MatrixTriple, u: &Direction, m: usize, iters: usize) -> (Direction, f64) {
    let mut cur = *u;
    let mut gap = cluster_gap(triple, &cur, m);
    for _ in 0..iters {
        if gap == 0.0 {
            break;
        }
        let e = eigh(triple.pencil(cur.u()).matrix());
        let q = e.columns(0, m);
        let t: Vec<_> = (0..3).map(|i| compress_unchecked(triple.get(i), &q).traceless()).collect();
        let comb = |w: &[f64; 3]| {
            let mut s = t[0].matrix() * crate::linalg::hermitian::c(w[0], 0.0);
            s += t[1].matrix() * crate::linalg::hermitian::c(w[1], 0.0);
            s += t[2].matrix() * crate::linalg::hermitian::c(w[2], 0.0);
            s
        };
        let (e1, e2) = cur.tangent_frame();
        let r = comb(cur.u());
        let j1 = comb(&e1);
        let j2 = comb(&e2);
        let g11 = inner(&j1, &j1);
        let g12 = inner(&j1, &j2);
        let g22 = inner(&j2, &j2);
        let b1 = -inner(&j1, &r);
        let b2 = -inner(&j2, &r);
        let det = g11 * g22 - g12 * g12;
        if det.abs() <= 1e-14 * (g11 * g22).max(1e-300) {
            break;
        }
        let a = (b1 * g22 - b2 * g12) / det;
        let b = (g11 * b2 - g12 * b1) / det;
        let next = cur.chart(&(e1, e2), a, b);
        let ng = cluster_gap(triple, &next, m);
        if ng < gap {
            cur = next;
            gap = ng;
        } else {
            break;
        }
    }
    (cur, gap)
}

/// One accepted coalescence direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterMinimum {
    pub direction: Direction,
    /// `λ_m − λ_1` at the direction.
    pub gap: f64,
    /// Index of the start that produced it.
    pub start: usize,
}

/// Local minima of `λ_m − λ_1` from `settings.search_grid` lattice starts,
/// accepted below `accept_gap · ‖pencil‖` and merged within `dedup_angle`.
pub fn cluster_minima(triple: &MatrixTriple, m: usize, settings: &Settings) -> Vec<ClusterMinimum> {
    let starts = fibonacci_sphere(settings.search_grid.max(1));
    let step = 0.5 * (4.0 * std::f64::consts::PI / starts.len() as f64).sqrt();
    let results: Vec<(Direction, f64)> = starts
        .par_iter()
        .map(|s| {
            let (d, _) = nelder_mead_sphere(|u| cluster_gap(triple, u, m), s, step, settings.nelder_mead_iters);
            refine_cluster(triple, &d, m, 30)
        })
        .collect();
    let mut out: Vec<ClusterMinimum> = Vec::new();
    for (k, (d, gap)) in results.into_iter().enumerate() {
        let scale = triple.pencil(d.u()).norm().max(1e-300);
        if gap >= settings.accept_gap * scale {
            continue;
        }
        match out.iter_mut().find(|c| c.direction.angle_to(&d) < settings.dedup_angle) {
            Some(c) => {
                if gap < c.gap {
                    c.direction = d;
                    c.gap = gap;
                }
            }
            None => out.push(ClusterMinimum {
                direction: d,
                gap,
                start: k,
            }),
        }
    }
    out
}
