//! Monte Carlo Crofton estimator for the length of PL curves in the plane:
//! the 1-dimensional Hausdorff measure as a constant times the expected
//! number of transversal line crossings.
//!
//! Lines are sampled by uniform angle and uniform signed offset against a
//! reference disk containing the input; the universal constant is fixed once
//! by calibrating against the unit segment, and the calibration seed and
//! sample count are part of the result manifest.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::shapes;

const BLOCK: u64 = 65_536;

/// Default calibration parameters; recorded in every estimate.
pub const DEFAULT_CALIBRATION_SEED: u64 = 0x5e9_3e47;
pub const DEFAULT_CALIBRATION_SAMPLES: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Calibration {
    pub constant: f64,
    /// Relative standard error of the constant; propagated into estimates.
    pub rel_std_error: f64,
    pub seed: u64,
    pub samples: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CroftonEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub calibration: Calibration,
}

struct LineStats {
    sum: u64,
    sum_sq: u128,
    n: u64,
}

/// Reference disk: center of the bounding box and a radius strictly
/// containing every vertex.
fn reference_disk(cx: &SimplicialComplex) -> ([f64; 2], f64) {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in cx.vertices() {
        for k in 0..2 {
            lo[k] = lo[k].min(p.coords()[k]);
            hi[k] = hi[k].max(p.coords()[k]);
        }
    }
    let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let mut radius: f64 = 0.0;
    for p in cx.vertices() {
        let dx = p.coords()[0] - center[0];
        let dy = p.coords()[1] - center[1];
        radius = radius.max((dx * dx + dy * dy).sqrt());
    }
    (center, radius * 1.0001 + 1e-12)
}

/// Mean and variance of the transversal crossing count over random lines.
fn crossing_stats(cx: &SimplicialComplex, samples: u64, seed: u64) -> (f64, f64, f64) {
    let (center, radius) = reference_disk(cx);
    let tie = cx.tie_eps().max(1e-15);
    // Signed distances of vertices from the line are compared against the
    // per-vertex value; store vertex offsets once.
    let verts: Vec<[f64; 2]> = cx
        .vertices()
        .iter()
        .map(|p| [p.coords()[0] - center[0], p.coords()[1] - center[1]])
        .collect();
    let edges: Vec<(usize, usize)> = cx
        .cells()
        .iter()
        .filter(|s| s.dim() == 1)
        .map(|s| (s.vertices()[0] as usize, s.vertices()[1] as usize))
        .collect();

    let blocks: u64 = samples.div_ceil(BLOCK);
    let stats: Vec<LineStats> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block.wrapping_add(1));
            let count = BLOCK.min(samples - block * BLOCK);
            let mut sum = 0u64;
            let mut sum_sq = 0u128;
            let mut values = vec![0.0f64; verts.len()];
            for _ in 0..count {
                // Rejection loop: lines passing within the tie tolerance of
                // any vertex are re-sampled.
                let crossings = loop {
                    let theta = rng.gen_range(0.0..std::f64::consts::PI);
                    let offset = rng.gen_range(-radius..radius);
                    let (nx, ny) = (theta.cos(), theta.sin());
                    let mut near_vertex = false;
                    for (value, v) in values.iter_mut().zip(&verts) {
                        *value = nx * v[0] + ny * v[1] - offset;
                        if value.abs() <= tie {
                            near_vertex = true;
                            break;
                        }
                    }
                    if near_vertex {
                        continue;
                    }
                    let mut c = 0u64;
                    for &(a, b) in &edges {
                        if values[a] * values[b] < 0.0 {
                            c += 1;
                        }
                    }
                    break c;
                };
                sum += crossings;
                sum_sq += (crossings * crossings) as u128;
            }
            LineStats { sum, sum_sq, n: count }
        })
        .collect();

    let n: u64 = stats.iter().map(|s| s.n).sum();
    let sum: u64 = stats.iter().map(|s| s.sum).sum();
    let sum_sq: u128 = stats.iter().map(|s| s.sum_sq).sum();
    let mean = sum as f64 / n as f64;
    let var = (sum_sq as f64 / n as f64 - mean * mean).max(0.0);
    (mean, (var / n as f64).sqrt(), radius)
}

/// Calibrates the universal constant against the unit segment:
/// `length = C * R * E[crossings]`, so `C = 1 / (R * E)` for the unit
/// segment. The analytic value is `π`.
pub fn crofton_calibrate(samples: u64, seed: u64) -> Calibration {
    let segment = shapes::segment(2);
    let (mean, mean_se, radius) = crossing_stats(&segment, samples, seed);
    Calibration {
        constant: 1.0 / (radius * mean),
        rel_std_error: mean_se / mean,
        seed,
        samples,
    }
}

/// Estimates the k-dimensional Hausdorff measure of `cx` by random lines.
/// Version 1 supports `k = 1` for 1-dimensional complexes in the plane.
pub fn crofton_estimate(
    cx: &SimplicialComplex,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<CroftonEstimate> {
    let cal = crofton_calibrate(DEFAULT_CALIBRATION_SAMPLES, DEFAULT_CALIBRATION_SEED);
    crofton_estimate_with(cx, k, samples, seed, cal)
}

pub fn crofton_estimate_with(
    cx: &SimplicialComplex,
    k: usize,
    samples: u64,
    seed: u64,
    calibration: Calibration,
) -> Result<CroftonEstimate> {
    if cx.ambient_dim() != 2 || k != 1 {
        return Err(Error::UnsupportedDimension(
            "the Crofton estimator supports curves in the plane (n = 2, k = 1)".into(),
        ));
    }
    if cx.intrinsic_dim() != 1 {
        return Err(Error::UnsupportedDimension(format!(
            "input must be a 1-dimensional complex, got dimension {}",
            cx.intrinsic_dim()
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one line sample".into()));
    }
    let (mean, mean_se, radius) = crossing_stats(cx, samples, seed);
    let estimate = calibration.constant * radius * mean;
    // Both the crossing mean and the calibration constant carry Monte Carlo
    // noise; the relative errors combine in quadrature.
    let rel = ((mean_se / mean).powi(2) + calibration.rel_std_error.powi(2)).sqrt();
    Ok(CroftonEstimate {
        estimate,
        std_error: estimate.abs() * rel,
        samples,
        seed,
        calibration,
    })
}
