//! Intrinsic volumes: unit-ball volume table, exact Hausdorff measure of
//! simplicial sets, and the external-angle formula for convex polytopes.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::dot;
use crate::normal_cycle::build_normal_cycle;

/// The intrinsic volumes `μ_0 .. μ_n` of a set in `R^n`. `μ_0` is the Euler
/// characteristic, `μ_m` the m-dimensional volume for an m-dimensional set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumes {
    pub mu: Vec<f64>,
}

impl IntrinsicVolumes {
    pub fn zeros(ambient: usize) -> Self {
        IntrinsicVolumes { mu: vec![0.0; ambient + 1] }
    }
}

/// Volume of the unit p-dimensional ball.
pub fn unit_ball_volume(p: usize) -> f64 {
    match p {
        0 => 1.0,
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        // ω_p = π^{p/2} / Γ(p/2 + 1), by the two-step recurrence.
        _ => 2.0 * std::f64::consts::PI / p as f64 * unit_ball_volume(p - 2),
    }
}

/// Exact Euclidean k-volume of a simplex from the Gram determinant of its
/// edge vectors: `vol = sqrt(det(E^T E)) / k!`.
pub fn simplex_volume(cx: &SimplicialComplex, cell: usize) -> f64 {
    let s = cx.cell(cell);
    let k = s.dim();
    if k == 0 {
        return 1.0;
    }
    let p0 = cx.position(s.vertices()[0]);
    let edges: Vec<Vec<f64>> = s.vertices()[1..].iter().map(|&v| cx.position(v).sub(p0)).collect();
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&edges[i], &edges[j]);
        }
    }
    let det = det_small(&gram);
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    det.max(0.0).sqrt() / factorial
}

fn det_small(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("simplex dimension capped at 3"),
    }
}

/// The exact k-dimensional Hausdorff measure of the realization: the sum of
/// k-volumes over the k-dimensional maximal simplices. With `strict` set,
/// maximal simplices of any other dimension raise [`Error::MixedDimension`].
pub fn hausdorff_measure_exact(cx: &SimplicialComplex, k: usize, strict: bool) -> Result<f64> {
    let mut total = 0.0;
    let mut mixed = 0usize;
    for &mi in cx.maximal_cells() {
        if cx.cell(mi).dim() == k {
            total += simplex_volume(cx, mi);
        } else {
            mixed += 1;
        }
    }
    if strict && mixed > 0 {
        return Err(Error::MixedDimension(format!(
            "{mixed} maximal simplices of dimension != {k}"
        )));
    }
    Ok(total)
}

/// Intrinsic volumes of a convex polytope via the external-angle formula:
///
/// `μ_k(P) = Σ over k-faces F of vol_k(F) * γ(F, P)`
///
/// where `γ(F, P)` is the normalized spherical measure of the normal cone of
/// `P` at `F` inside its carrier sphere. The angles are read off the
/// normal-cycle arrangement: for convex input every piece has multiplicity
/// one and the pieces over a face tile exactly its normal cone.
pub fn intrinsic_volumes_convex(cx: &SimplicialComplex) -> Result<IntrinsicVolumes> {
    let n = cx.ambient_dim();
    let nc = build_normal_cycle(cx)?;
    for piece in nc.pieces() {
        if piece.multiplicity != 1 {
            return Err(Error::NotConvex(format!(
                "piece over {} has multiplicity {}",
                piece.simplex, piece.multiplicity
            )));
        }
    }
    let mut gamma = vec![0.0; cx.cell_count()];
    for piece in nc.pieces() {
        let ci = cx.cell_index(&piece.simplex).expect("piece simplex belongs to the complex");
        gamma[ci] += piece.cell.carrier_fraction();
    }
    // Full-dimensional cells have an empty carrier and external angle one.
    for (ci, s) in cx.cells().iter().enumerate() {
        if s.dim() == n {
            gamma[ci] = 1.0;
        }
    }

    let mut mu = vec![0.0; n + 1];
    for (ci, s) in cx.cells().iter().enumerate() {
        if gamma[ci] != 0.0 {
            mu[s.dim()] += gamma[ci] * simplex_volume(cx, ci);
        }
    }

    // Consistency of the cone decomposition: the vertex angles of a convex
    // body account for the full sphere of directions exactly once.
    if (mu[0] - 1.0).abs() > 1e-9 {
        return Err(Error::NotConvex(format!(
            "vertex external angles sum to {:.12}, expected 1",
            mu[0]
        )));
    }
    Ok(IntrinsicVolumes { mu })
}
