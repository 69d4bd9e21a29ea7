use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{JnrError, Result};

/// Unit vector in ℝ³, the coefficients of the pencil `u·A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction([f64; 3]);

impl Direction {
    /// Normalizes a nonzero finite vector.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(JnrError::InvalidDirection(format!("{v:?} is not finite")));
        }
        let n = norm(&v);
        if n < 1e-300 {
            return Err(JnrError::InvalidDirection("zero vector".into()));
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn axis(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Self(v)
    }

    pub fn u(&self) -> &[f64; 3] {
        &self.0
    }

    pub fn dot(&self, x: &[f64; 3]) -> f64 {
        dot(&self.0, x)
    }

    pub fn neg(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// Angle in radians to another direction.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let d = sub(&self.0, &other.0);
        2.0 * (norm(&d) / 2.0).min(1.0).asin()
    }

    /// Orthonormal pair spanning the tangent plane.
    pub fn tangent_frame(&self) -> ([f64; 3], [f64; 3]) {
        let u = self.0;
        let pick = if u[0].abs() < 0.6 {
            [1.0, 0.0, 0.0]
        } else if u[1].abs() < 0.6 {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let e1 = normalize(&sub(&pick, &scale(&u, dot(&pick, &u))));
        let e2 = cross(&u, &e1);
        (e1, e2)
    }

    /// Point `normalize(u + x e1 + y e2)` of the tangent chart.
    pub fn chart(&self, frame: &([f64; 3], [f64; 3]), x: f64, y: f64) -> Self {
        let v = add(&add(&self.0, &scale(&frame.0, x)), &scale(&frame.1, y));
        Self(normalize(&v))
    }
}

/// Deterministic Fibonacci lattice of `n` directions.
pub fn fibonacci_sphere(n: usize) -> Vec<Direction> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * i as f64;
            Direction([r * t.cos(), r * t.sin(), z])
        })
        .collect()
}

/// Fibonacci lattice with every point displaced by a seeded random tangent
/// offset of at most half the lattice spacing.
pub fn jittered_sphere(n: usize, seed: u64) -> Vec<Direction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spacing = (4.0 * std::f64::consts::PI / n.max(1) as f64).sqrt();
    fibonacci_sphere(n)
        .into_iter()
        .map(|d| {
            let frame = d.tangent_frame();
            let r = 0.5 * spacing * rng.gen::<f64>().sqrt();
            let a = rng.gen::<f64>() * std::f64::consts::TAU;
            d.chart(&frame, r * a.cos(), r * a.sin())
        })
        .collect()
}

/// Uniformly distributed random directions.
pub fn random_directions(n: usize, seed: u64) -> Vec<Direction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let a: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let r = (1.0 - z * z).sqrt();
            Direction([r * a.cos(), r * a.sin(), z])
        })
        .collect()
}

pub fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: &[f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm(&sub(a, b))
}

fn normalize(a: &[f64; 3]) -> [f64; 3] {
    scale(a, 1.0 / norm(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_and_nan() {
        assert!(Direction::new([0.0; 3]).is_err());
        assert!(Direction::new([f64::NAN, 0.0, 1.0]).is_err());
        let d = Direction::new([3.0, 0.0, 4.0]).unwrap();
        assert!((norm(d.u()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lattice_is_unit_and_balanced() {
        let dirs = fibonacci_sphere(500);
        let mut c = [0.0; 3];
        for d in &dirs {
            assert!((norm(d.u()) - 1.0).abs() < 1e-12);
            c = add(&c, d.u());
        }
        assert!(norm(&c) / 500.0 < 1e-2);
    }

    #[test]
    fn jitter_is_seeded() {
        let a = jittered_sphere(50, 7);
        let b = jittered_sphere(50, 7);
        let c = jittered_sphere(50, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        for d in &a {
            assert!((norm(d.u()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chart_and_angles() {
        let d = Direction::axis(2);
        let f = d.tangent_frame();
        assert!(dot(&f.0, d.u()).abs() < 1e-15 && dot(&f.1, d.u()).abs() < 1e-15);
        let e = d.chart(&f, 1.0, 0.0);
        assert!((d.angle_to(&e) - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!((d.angle_to(&d.neg()) - std::f64::consts::PI).abs() < 1e-12);
    }
}
