//! Shared finite-difference oracles and random fixtures for the test suite.
//!
//! Everything here is deliberately independent of the jet/backprop
//! implementation path it is used to check: derivatives come from central
//! difference stencils applied to plain value evaluations.

#![allow(dead_code)]

use ddlearn::diffnet::{DenseNetwork, ScalarField};
use ddlearn::geometry::PointCloud;
use ddlearn::losses::CompositeLoss;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Central-difference gradient of `f` at `x` with step `h`.
pub fn fd_gradient(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for k in 0..x.len() {
        xp[k] = x[k] + h;
        let fp = f(&xp);
        xp[k] = x[k] - h;
        let fm = f(&xp);
        xp[k] = x[k];
        g[k] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Central-difference Laplacian of `f` at `x` with step `h`.
pub fn fd_laplacian(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let f0 = f(x);
    let mut acc = 0.0;
    let mut xp = x.to_vec();
    for k in 0..x.len() {
        xp[k] = x[k] + h;
        let fp = f(&xp);
        xp[k] = x[k] - h;
        let fm = f(&xp);
        xp[k] = x[k];
        acc += (fp - 2.0 * f0 + fm) / (h * h);
    }
    acc
}

/// Central-difference gradient of a composite loss with respect to the
/// network parameters at `coords`, step scaled per coordinate.
pub fn fd_param_gradient(
    loss: &CompositeLoss,
    net: &DenseNetwork,
    coords: &[usize],
    h0: f64,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(coords.len());
    for &i in coords {
        let mut plus = net.clone();
        let mut minus = net.clone();
        let h = h0 * plus.params()[i].abs().max(1.0);
        plus.params_mut()[i] += h;
        minus.params_mut()[i] -= h;
        let fp = loss.value_for_network(&plus, None).unwrap();
        let fm = loss.value_for_network(&minus, None).unwrap();
        out.push((fp - fm) / (2.0 * h));
    }
    out
}

/// A random tanh network with the given input dimension, depth, and width.
pub fn random_net(dim: usize, depth: usize, width: usize, seed: u64) -> DenseNetwork {
    let mut sizes = vec![dim];
    sizes.extend(std::iter::repeat_n(width, depth));
    sizes.push(1);
    DenseNetwork::init(&sizes, seed).unwrap()
}

/// `n` uniform points in the unit cube.
pub fn random_points(dim: usize, n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pc = PointCloud::with_capacity(dim, n);
    let mut buf = vec![0.0; dim];
    for _ in 0..n {
        for b in buf.iter_mut() {
            *b = rng.random_range(0.0..1.0);
        }
        pc.push(&buf);
    }
    pc
}

/// `n` uniform values in `[lo, hi)`.
pub fn random_values(n: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// `n` random unit vectors in d dimensions (flat).
pub fn random_normals(dim: usize, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n * dim);
    for _ in 0..n {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 {
                out.extend(v.iter().map(|x| x / norm));
                break;
            }
        }
    }
    out
}

/// Relative l2 distance between two vectors.
pub fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den.max(1e-300)
}

/// Evaluate a field's value at a point (value-only closure for FD stencils).
pub fn value_fn<'a>(field: &'a dyn ScalarField) -> impl Fn(&[f64]) -> f64 + 'a {
    move |x: &[f64]| field.value(x)
}
