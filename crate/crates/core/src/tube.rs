//! Tube volumes by Monte Carlo and the polynomial fit recovering intrinsic
//! volumes:
//!
//! `V_X(r) = Σ_{k=0..m} μ_{m-k}(X) ω_{n-m+k} r^{n-m+k}`
//!
//! Sampling is uniform in the bounding box inflated by the radius; a point
//! counts when its exact Euclidean distance to the realization is at most
//! `r`. Blocks of fixed size run in parallel with per-block seeded
//! generators, so results are deterministic for a fixed seed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::volumes::{unit_ball_volume, IntrinsicVolumes};

const BLOCK: u64 = 65_536;

/// A tube-volume experiment: radii with their Monte Carlo estimates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TubeExperiment {
    pub radii: Vec<f64>,
    /// Per radius: (estimate, standard error).
    pub volumes: Vec<(f64, f64)>,
    pub samples: u64,
    pub seed: u64,
}

/// The fitted intrinsic volumes with their standard errors (zero for exact
/// inputs).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TubeFit {
    pub mu: IntrinsicVolumes,
    pub stderr: Vec<f64>,
}

/// Flattened geometry of one maximal simplex, padded to 3 coordinates.
enum SimplexGeom {
    Vertex([f64; 3]),
    Edge([f64; 3], [f64; 3]),
    Tri([f64; 3], [f64; 3], [f64; 3]),
    Tet([f64; 3], [f64; 3], [f64; 3], [f64; 3]),
}

fn pad3(coords: &[f64]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (o, c) in out.iter_mut().zip(coords) {
        *o = *c;
    }
    out
}

fn geometry(cx: &SimplicialComplex) -> Vec<SimplexGeom> {
    cx.maximal_cells()
        .iter()
        .map(|&mi| {
            let vs: Vec<[f64; 3]> = cx
                .cell(mi)
                .vertices()
                .iter()
                .map(|&v| pad3(cx.position(v).coords()))
                .collect();
            match vs.len() {
                1 => SimplexGeom::Vertex(vs[0]),
                2 => SimplexGeom::Edge(vs[0], vs[1]),
                3 => SimplexGeom::Tri(vs[0], vs[1], vs[2]),
                4 => SimplexGeom::Tet(vs[0], vs[1], vs[2], vs[3]),
                _ => unreachable!("dimension capped at 3"),
            }
        })
        .collect()
}

#[inline]
fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn dist2_point(p: &[f64; 3], a: &[f64; 3]) -> f64 {
    let d = sub(p, a);
    dot3(&d, &d)
}

fn dist2_segment(p: &[f64; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let t = (dot3(&ap, &ab) / dot3(&ab, &ab)).clamp(0.0, 1.0);
    let q = [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]];
    dist2_point(p, &q)
}

/// Squared distance from a point to a closed triangle (Voronoi-region
/// classification on the barycentric coordinates).
fn dist2_triangle(p: &[f64; 3], a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot3(&ab, &ap);
    let d2 = dot3(&ac, &ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return dist2_point(p, a);
    }
    let bp = sub(p, b);
    let d3 = dot3(&ab, &bp);
    let d4 = dot3(&ac, &bp);
    if d3 >= 0.0 && d4 <= d3 {
        return dist2_point(p, b);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        let q = [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]];
        return dist2_point(p, &q);
    }
    let cp = sub(p, c);
    let d5 = dot3(&ab, &cp);
    let d6 = dot3(&ac, &cp);
    if d6 >= 0.0 && d5 <= d6 {
        return dist2_point(p, c);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        let q = [a[0] + t * ac[0], a[1] + t * ac[1], a[2] + t * ac[2]];
        return dist2_point(p, &q);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        let bc = sub(c, b);
        let q = [b[0] + t * bc[0], b[1] + t * bc[1], b[2] + t * bc[2]];
        return dist2_point(p, &q);
    }
    // Interior of the triangle: project on its plane.
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    let q = [
        a[0] + v * ab[0] + w * ac[0],
        a[1] + v * ab[1] + w * ac[1],
        a[2] + v * ab[2] + w * ac[2],
    ];
    dist2_point(p, &q)
}

fn dist2_tet(p: &[f64; 3], vs: &[[f64; 3]; 4]) -> f64 {
    // Inside when p is on the same side of every face as the opposite
    // vertex.
    let faces = [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0)];
    let mut inside = true;
    for &(i, j, k, l) in &faces {
        let n = cross(&sub(&vs[j], &vs[i]), &sub(&vs[k], &vs[i]));
        let side_p = dot3(&n, &sub(p, &vs[i]));
        let side_l = dot3(&n, &sub(&vs[l], &vs[i]));
        if side_p * side_l < 0.0 {
            inside = false;
            break;
        }
    }
    if inside {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for &(i, j, k, _) in &faces {
        best = best.min(dist2_triangle(p, &vs[i], &vs[j], &vs[k]));
    }
    best
}

fn dist2_complex(p: &[f64; 3], geom: &[SimplexGeom]) -> f64 {
    let mut best = f64::INFINITY;
    for g in geom {
        let d = match g {
            SimplexGeom::Vertex(a) => dist2_point(p, a),
            SimplexGeom::Edge(a, b) => dist2_segment(p, a, b),
            SimplexGeom::Tri(a, b, c) => dist2_triangle(p, a, b, c),
            SimplexGeom::Tet(a, b, c, d) => dist2_tet(p, &[*a, *b, *c, *d]),
        };
        best = best.min(d);
        if best == 0.0 {
            break;
        }
    }
    best
}

/// Monte Carlo estimate of the tube volume `vol({dist(x, X) <= r})`:
/// returns `(estimate, standard error)`.
pub fn tube_volume_mc(
    cx: &SimplicialComplex,
    r: f64,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput("tube radius must be positive".into()));
    }
    if cx.is_empty() || samples == 0 {
        return Err(Error::InvalidInput("tube volume needs a nonempty complex and samples".into()));
    }
    let n = cx.ambient_dim();
    if n > 3 {
        return Err(Error::UnsupportedDimension("tube sampling supports ambient <= 3".into()));
    }
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in cx.vertices() {
        for (k, &c) in p.coords().iter().enumerate() {
            lo[k] = lo[k].min(c - r);
            hi[k] = hi[k].max(c + r);
        }
    }
    let box_volume: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let geom = geometry(cx);
    let r2 = r * r;

    let blocks: u64 = samples.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let count = BLOCK.min(samples - block * BLOCK);
            let mut hits = 0u64;
            let mut p = [0.0f64; 3];
            for _ in 0..count {
                for k in 0..n {
                    p[k] = rng.gen_range(lo[k]..hi[k]);
                }
                if dist2_complex(&p, &geom) <= r2 {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let fraction = hits as f64 / samples as f64;
    let estimate = box_volume * fraction;
    let std_error = box_volume * (fraction * (1.0 - fraction) / samples as f64).sqrt();
    Ok((estimate, std_error))
}

/// Runs the full experiment over a list of radii.
pub fn run_tube_experiment(
    cx: &SimplicialComplex,
    radii: &[f64],
    samples: u64,
    seed: u64,
) -> Result<TubeExperiment> {
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii.is_empty() {
        return Err(Error::InvalidInput("radii must be strictly increasing and nonempty".into()));
    }
    let mut volumes = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        volumes.push(tube_volume_mc(cx, r, samples, seed.wrapping_add(i as u64))?);
    }
    Ok(TubeExperiment { radii: radii.to_vec(), volumes, samples, seed })
}

/// Weighted least-squares fit of the tube polynomial for a set of intrinsic
/// dimension `m` in ambient dimension `n`: the coefficient of `r^{n-m+k}`
/// divided by `ω_{n-m+k}` is `μ_{m-k}`. Weights are the inverse variances
/// of the estimates; exact data (zero variance) fits unweighted.
pub fn fit_tube_polynomial(exp: &TubeExperiment, m: usize, n: usize) -> Result<TubeFit> {
    let rows = exp.radii.len();
    let cols = m + 1;
    if rows < cols {
        return Err(Error::InvalidInput(format!(
            "need at least {cols} radii to fit {cols} coefficients, got {rows}"
        )));
    }
    if m > n {
        return Err(Error::InvalidInput("intrinsic dimension exceeds ambient".into()));
    }
    let scale = exp.volumes.iter().map(|(v, _)| v.abs()).fold(1e-30, f64::max);
    let weights: Vec<f64> = exp
        .volumes
        .iter()
        .map(|&(_, s)| {
            let sigma = s.max(1e-14 * scale);
            1.0 / (sigma * sigma)
        })
        .collect();

    // Column k corresponds to mu_{m-k} with basis function
    // omega_{n-m+k} r^{n-m+k}.
    let basis = |i: usize, k: usize| -> f64 {
        let p = n - m + k;
        unit_ball_volume(p) * exp.radii[i].powi(p as i32)
    };
    let mut normal = vec![vec![0.0; cols]; cols];
    let mut rhs = vec![0.0; cols];
    for i in 0..rows {
        for k in 0..cols {
            let aik = basis(i, k);
            rhs[k] += weights[i] * aik * exp.volumes[i].0;
            for l in 0..cols {
                normal[k][l] += weights[i] * aik * basis(i, l);
            }
        }
    }

    let eigs = jacobi_eigenvalues(&normal);
    let lmax = eigs.iter().cloned().fold(0.0f64, f64::max);
    let lmin = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if lmin > 0.0 { (lmax / lmin).sqrt() } else { f64::INFINITY };
    if cond > 1e8 {
        return Err(Error::IllConditioned(cond));
    }

    let inv = invert_small(&normal)?;
    let mut coeffs = vec![0.0; cols];
    for k in 0..cols {
        for l in 0..cols {
            coeffs[k] += inv[k][l] * rhs[l];
        }
    }

    let mut mu = vec![0.0; n + 1];
    let mut stderr = vec![0.0; n + 1];
    let exact = exp.volumes.iter().all(|&(_, s)| s <= 0.0);
    for k in 0..cols {
        mu[m - k] = coeffs[k];
        stderr[m - k] = if exact { 0.0 } else { inv[k][k].max(0.0).sqrt() };
    }
    Ok(TubeFit { mu: IntrinsicVolumes { mu }, stderr })
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

fn invert_small(m: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                for j in 0..n {
                    a[i][j] -= f * a[col][j];
                    inv[i][j] -= f * inv[col][j];
                }
            }
        }
    }
    Ok(inv)
}
