//! Unit-sphere sampling and angles.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::classifier::dot;

pub fn norm(x: &[f64]) -> f64 {
    libm::sqrt(dot(x, x))
}

/// Scales `x` to unit length in place; returns false for (near) zero vectors.
pub fn normalize(x: &mut [f64]) -> bool {
    let n = norm(x);
    if n.is_nan() || n <= 1e-300 {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= n);
    true
}

/// Uniform point on `S^{d-1}`: isotropic normal, then normalized.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if normalize(&mut x) {
            return x;
        }
    }
}

/// Uniform unit vector orthogonal to the unit vector `x`.
pub fn random_orthogonal_unit<R: Rng + ?Sized>(x: &[f64], rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..x.len()).map(|_| rng.sample(StandardNormal)).collect();
        let along = dot(&v, x);
        v.iter_mut().zip(x).for_each(|(vi, xi)| *vi -= along * xi);
        if normalize(&mut v) {
            return v;
        }
    }
}

/// `cos(φ) x + sin(φ) v` for unit `x` and unit `v ⟂ x`: the point at angle
/// `φ` from `x` along `v`.
pub fn rotate_towards(x: &[f64], v: &[f64], phi: f64) -> Vec<f64> {
    let (s, c) = (libm::sin(phi), libm::cos(phi));
    let mut y: Vec<f64> = x.iter().zip(v).map(|(a, b)| c * a + s * b).collect();
    normalize(&mut y);
    y
}

/// Angle in `[0, π]` between two non-zero vectors.
pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let c = dot(a, b) / (norm(a) * norm(b));
    libm::acos(c.clamp(-1.0, 1.0))
}
