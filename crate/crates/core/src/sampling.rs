//! Seeded rejection sampling of generic covectors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::Covector;

const MAX_REJECTIONS: usize = 10_000;

/// Samples a unit covector whose values at the vertices of `cx` are pairwise
/// separated by more than the tie tolerance. Deterministic for a fixed seed.
pub fn sample_generic_covector(cx: &SimplicialComplex, seed: u64) -> Result<Covector> {
    sample_generic_covector_eps(cx, seed, cx.tie_eps())
}

pub fn sample_generic_covector_eps(cx: &SimplicialComplex, seed: u64, tie_eps: f64) -> Result<Covector> {
    if cx.vertex_count() == 0 {
        return Err(Error::InvalidInput("cannot sample a covector for the empty complex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let coords: Vec<f64> = (0..cx.ambient_dim()).map(|_| rng.sample(StandardNormal)).collect();
        let norm = crate::geometry::norm(&coords);
        if norm < 1e-8 {
            continue;
        }
        let xi = Covector::new(coords.iter().map(|c| c / norm).collect())?;
        if is_generic(cx, &xi, tie_eps) {
            return Ok(xi);
        }
    }
    Err(Error::GenericityFailure(MAX_REJECTIONS))
}

/// True when all vertex values of `xi` are pairwise separated by more than
/// `tie_eps`.
pub fn is_generic(cx: &SimplicialComplex, xi: &Covector, tie_eps: f64) -> bool {
    let mut values = cx.vertex_values(xi);
    values.sort_unstable_by(f64::total_cmp);
    values.windows(2).all(|w| w[1] - w[0] > tie_eps)
}

/// Requires genericity, reporting the offending gap otherwise.
pub fn require_generic(cx: &SimplicialComplex, xi: &Covector, tie_eps: f64) -> Result<()> {
    if is_generic(cx, xi, tie_eps) {
        Ok(())
    } else {
        Err(Error::NonGenericCovector(format!(
            "two vertex values within {tie_eps:.3e}; re-seed or perturb xi"
        )))
    }
}
