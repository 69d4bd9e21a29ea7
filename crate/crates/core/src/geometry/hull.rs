//! Incremental 3D convex hull.
//!
//! Visibility is decided by the exact orientation predicate only, so the
//! visible region of every inserted point is consistent and the horizon is a
//! simple loop. `rel_tol` merges near-duplicate input points and detects flat
//! clouds; points closer than that to the hull may still become vertices.

use std::collections::HashMap;

use robust::{orient3d, Coord3D};

use super::direction::{cross, dist, dot, norm, sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Hull {
    pub vertices: Vec<[f64; 3]>,
    /// Outward-oriented (counterclockwise seen from outside) triangles.
    pub triangles: Vec<[usize; 3]>,
}

struct Face {
    v: [usize; 3],
    alive: bool,
}

fn coord(p: &[f64; 3]) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

/// Removes points closer than `tol` to an earlier point.
pub fn dedup_points(points: &[[f64; 3]], tol: f64) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = Vec::new();
    for p in points {
        if !out.iter().any(|q| dist(p, q) <= tol) {
            out.push(*p);
        }
    }
    out
}

pub fn diameter_bound(points: &[[f64; 3]]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    dist(&lo, &hi)
}

/// Convex hull of a point cloud, or `None` if the points span fewer than
/// three dimensions.
pub fn convex_hull(points: &[[f64; 3]], rel_tol: f64) -> Option<Hull> {
    let diam = diameter_bound(points);
    if diam == 0.0 {
        return None;
    }
    let tol = rel_tol * diam;
    let pts = dedup_points(points, tol);
    if pts.len() < 4 {
        return None;
    }
    let simplex = initial_simplex(&pts, tol)?;

    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let [a, b, c, d] = simplex;
    let tet = if orient3d(coord(&pts[a]), coord(&pts[b]), coord(&pts[c]), coord(&pts[d])) > 0.0 {
        [[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    } else {
        [[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    };
    for f in tet {
        add_face(&mut faces, &mut edges, f);
    }

    for (pi, p) in pts.iter().enumerate() {
        if simplex.contains(&pi) {
            continue;
        }
        let Some(seed) = (0..faces.len()).find(|&f| faces[f].alive && visible(&pts, &faces[f], p)) else {
            continue;
        };
        // Flood fill the visible region from the seed face.
        let mut vis = vec![seed];
        let mut mark = HashMap::new();
        mark.insert(seed, true);
        let mut k = 0;
        while k < vis.len() {
            let f = vis[k];
            k += 1;
            let v = faces[f].v;
            for e in 0..3 {
                let (x, y) = (v[e], v[(e + 1) % 3]);
                if let Some(&g) = edges.get(&(y, x)) {
                    if mark.contains_key(&g) {
                        continue;
                    }
                    let is_vis = visible(&pts, &faces[g], p);
                    mark.insert(g, is_vis);
                    if is_vis {
                        vis.push(g);
                    }
                }
            }
        }
        let mut horizon = Vec::new();
        for &f in &vis {
            let v = faces[f].v;
            for e in 0..3 {
                let (x, y) = (v[e], v[(e + 1) % 3]);
                let across = edges.get(&(y, x)).copied();
                if across.is_none_or(|g| !mark.get(&g).copied().unwrap_or(false)) {
                    horizon.push((x, y));
                }
            }
        }
        for &f in &vis {
            let v = faces[f].v;
            faces[f].alive = false;
            for e in 0..3 {
                edges.remove(&(v[e], v[(e + 1) % 3]));
            }
        }
        for (x, y) in horizon {
            add_face(&mut faces, &mut edges, [x, y, pi]);
        }
    }

    let mut remap = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        let mut t = [0; 3];
        for (k, &i) in f.v.iter().enumerate() {
            if remap[i] == usize::MAX {
                remap[i] = vertices.len();
                vertices.push(pts[i]);
            }
            t[k] = remap[i];
        }
        triangles.push(t);
    }
    Some(Hull {
        vertices,
        triangles,
    })
}

fn add_face(
    faces: &mut Vec<Face>,
    edges: &mut HashMap<(usize, usize), usize>,
    v: [usize; 3],
) {
    let idx = faces.len();
    faces.push(Face { v, alive: true });
    for e in 0..3 {
        edges.insert((v[e], v[(e + 1) % 3]), idx);
    }
}

fn visible(pts: &[[f64; 3]], f: &Face, p: &[f64; 3]) -> bool {
    orient3d(coord(&pts[f.v[0]]), coord(&pts[f.v[1]]), coord(&pts[f.v[2]]), coord(p)) < 0.0
}

fn initial_simplex(pts: &[[f64; 3]], tol: f64) -> Option<[usize; 4]> {
    let a = (0..pts.len()).min_by(|&i, &j| pts[i][0].total_cmp(&pts[j][0]))?;
    let b = argmax(pts, |p| dist(p, &pts[a]));
    if dist(&pts[a], &pts[b]) <= tol {
        return None;
    }
    let ab = sub(&pts[b], &pts[a]);
    let c = argmax(pts, |p| norm(&cross(&ab, &sub(p, &pts[a]))) / norm(&ab));
    let n = cross(&ab, &sub(&pts[c], &pts[a]));
    if norm(&n) / norm(&ab) <= tol {
        return None;
    }
    let d = argmax(pts, |p| (dot(&n, &sub(p, &pts[a])) / norm(&n)).abs());
    if (dot(&n, &sub(&pts[d], &pts[a])) / norm(&n)).abs() <= tol {
        return None;
    }
    Some([a, b, c, d])
}

fn argmax<F: Fn(&[f64; 3]) -> f64>(pts: &[[f64; 3]], f: F) -> usize {
    let mut best = 0;
    let mut val = f64::NEG_INFINITY;
    for (i, p) in pts.iter().enumerate() {
        let v = f(p);
        if v > val {
            val = v;
            best = i;
        }
    }
    best
}

/// Area-weighted check that every triangle faces away from the centroid.
pub fn is_outward(h: &Hull) -> bool {
    let n = h.vertices.len() as f64;
    let mut c = [0.0; 3];
    for v in &h.vertices {
        for k in 0..3 {
            c[k] += v[k] / n;
        }
    }
    h.triangles.iter().all(|t| {
        let [a, b, cc] = t.map(|i| h.vertices[i]);
        let nrm = cross(&sub(&b, &a), &sub(&cc, &a));
        dot(&nrm, &sub(&a, &c)) >= -1e-12
    })
}
