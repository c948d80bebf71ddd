//! Convergence harness for sequences of complexes or constructible
//! functions: per sampled generic covector it compares superlevel Euler
//! characteristics against the target at all target vertex levels and
//! tracks the bounded-Lipschitz distance of the jump measures.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use crate::complex::{CellSelection, SimplicialComplex};
use crate::error::{Error, Result};
use crate::euler::ConstructibleFunction;
use crate::geometry::Covector;
use crate::jump::{bl_distance, jump_measure, superlevel_euler_integral};
use crate::sampling::{is_generic, sample_generic_covector_eps};

/// Results for one sampled covector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CovectorReport {
    pub xi: Covector,
    /// Bounded-Lipschitz distance of each member's jump measure to the
    /// target's.
    pub distances: Vec<f64>,
    /// Superlevel comparisons: `condition_c[k][j]` is true when member `k`
    /// matches the target's superlevel Euler integral at the j-th target
    /// vertex level.
    pub condition_c: Vec<Vec<bool>>,
    /// Mass of each member's jump measure (Σ|m|), a proxy for the mass-norm
    /// bound on the slices.
    pub masses: Vec<i64>,
}

/// Aggregated convergence report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub per_xi: Vec<CovectorReport>,
    /// Mean bounded-Lipschitz distance per member, over the covector
    /// samples.
    pub mean_distances: Vec<f64>,
    /// Per member: the largest jump-measure mass seen over all samples.
    pub mass_bound: Vec<i64>,
    /// Per member: true when condition (c) held at every target level for
    /// every sampled covector.
    pub condition_c_all: Vec<bool>,
}

impl ConvergenceReport {
    /// Whether the mean distances are strictly decreasing along the
    /// sequence.
    pub fn strictly_decreasing(&self) -> bool {
        self.mean_distances.windows(2).all(|w| w[1] < w[0])
    }

    /// Whether the tail of mean distances is below the tolerance.
    pub fn tail_below(&self, tol: f64) -> bool {
        self.mean_distances.last().map_or(true, |&d| d <= tol)
    }
}

/// Runs the harness on constructible functions. The covectors are sampled
/// generically for the target and every member; results are merged in
/// sample order, so the report is deterministic for a fixed seed.
pub fn convergence_harness(
    members: &[ConstructibleFunction],
    target: &ConstructibleFunction,
    xi_samples: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    let target_cx = target.complex();
    let ambient = target_cx.ambient_dim();
    for f in members {
        if f.complex().ambient_dim() != ambient {
            return Err(Error::InvalidInput(
                "all members must share the target's ambient dimension".into(),
            ));
        }
    }

    // Candidate levels: the target's vertex values along xi are recomputed
    // per sample; sampling must be generic for every complex involved.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covectors: Vec<Covector> = Vec::with_capacity(xi_samples);
    let mut attempts = 0usize;
    while covectors.len() < xi_samples {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::GenericityFailure(attempts));
        }
        let s = rng.next_u64();
        let xi = match sample_generic_covector_eps(target_cx, s, target_cx.tie_eps()) {
            Ok(xi) => xi,
            Err(_) => continue,
        };
        if members.iter().all(|f| is_generic(f.complex(), &xi, f.complex().tie_eps())) {
            covectors.push(xi);
        }
    }

    let per_xi: Result<Vec<CovectorReport>> = covectors
        .par_iter()
        .map(|xi| {
            let target_jump = jump_measure(target, xi)?;
            let levels: Vec<f64> = {
                let mut ls = target_cx.vertex_values(xi);
                ls.sort_unstable_by(f64::total_cmp);
                ls.dedup();
                ls
            };
            let mut distances = Vec::with_capacity(members.len());
            let mut condition_c = Vec::with_capacity(members.len());
            let mut masses = Vec::with_capacity(members.len());
            for f in members {
                let jump = jump_measure(f, xi)?;
                distances.push(bl_distance(&jump, &target_jump));
                masses.push(jump.mass());
                let mut checks = Vec::with_capacity(levels.len());
                for &c in &levels {
                    let lhs = superlevel_euler_integral(f, xi, c)?;
                    let rhs = superlevel_euler_integral(target, xi, c)?;
                    checks.push(lhs == rhs);
                }
                condition_c.push(checks);
            }
            Ok(CovectorReport { xi: xi.clone(), distances, condition_c, masses })
        })
        .collect();
    let per_xi = per_xi?;

    let k = members.len();
    let mut mean_distances = vec![0.0; k];
    let mut mass_bound = vec![0i64; k];
    let mut condition_c_all = vec![true; k];
    for report in &per_xi {
        for i in 0..k {
            mean_distances[i] += report.distances[i] / per_xi.len() as f64;
            mass_bound[i] = mass_bound[i].max(report.masses[i]);
            if !report.condition_c[i].iter().all(|&b| b) {
                condition_c_all[i] = false;
            }
        }
    }
    Ok(ConvergenceReport { per_xi, mean_distances, mass_bound, condition_c_all })
}

/// Convenience wrapper for sequences of complexes: runs the harness on
/// their indicator functions.
pub fn convergence_harness_complexes(
    members: &[SimplicialComplex],
    target: &SimplicialComplex,
    xi_samples: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    let indicator = |cx: &SimplicialComplex| {
        let arc = Arc::new(cx.clone());
        let all = CellSelection::all(&arc);
        ConstructibleFunction::indicator(arc, &all)
    };
    let fs: Vec<ConstructibleFunction> = members.iter().map(indicator).collect();
    convergence_harness(&fs, &indicator(target), xi_samples, seed)
}
