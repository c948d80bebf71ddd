//! Jump measures of constructible functions and the bounded-Lipschitz
//! distance on finite atomic measures of the line.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::euler::{cell_sign, ConstructibleFunction};
use crate::geometry::Covector;
use crate::morse::MorseDataSlice;
use crate::sampling::require_generic;
use crate::subdivide::subdivide_by_level;

/// A finite atomic integer measure on the real line: strictly increasing
/// locations, nonzero masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpMeasure {
    pub atoms: Vec<(f64, i64)>,
}

impl JumpMeasure {
    pub fn empty() -> Self {
        JumpMeasure { atoms: Vec::new() }
    }

    /// Builds a measure from raw atoms: merges equal locations, drops zero
    /// masses, sorts.
    pub fn from_atoms(mut raw: Vec<(f64, i64)>) -> Self {
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<(f64, i64)> = Vec::with_capacity(raw.len());
        for (t, m) in raw {
            match atoms.last_mut() {
                Some((t0, m0)) if *t0 == t => *m0 += m,
                _ => atoms.push((t, m)),
            }
        }
        atoms.retain(|&(_, m)| m != 0);
        JumpMeasure { atoms }
    }

    pub fn mass(&self) -> i64 {
        self.atoms.iter().map(|&(_, m)| m.abs()).sum()
    }

    pub fn total(&self) -> i64 {
        self.atoms.iter().map(|&(_, m)| m).sum()
    }

    pub fn negated(&self) -> JumpMeasure {
        JumpMeasure { atoms: self.atoms.iter().map(|&(t, m)| (t, -m)).collect() }
    }

    /// The pushforward under `t -> -t`.
    pub fn reflected(&self) -> JumpMeasure {
        JumpMeasure::from_atoms(self.atoms.iter().map(|&(t, m)| (-t, m)).collect())
    }

    pub fn signed_difference(&self, other: &JumpMeasure) -> Vec<(f64, i64)> {
        let mut raw: Vec<(f64, i64)> = self.atoms.clone();
        raw.extend(other.atoms.iter().map(|&(t, m)| (t, -m)));
        JumpMeasure::from_atoms(raw).atoms
    }
}

impl MorseDataSlice {
    /// The pushforward of the slice to the line by `x -> ⟨ξ, x⟩`: an atomic
    /// measure placing each index at its critical level.
    pub fn beta_pushforward(&self) -> JumpMeasure {
        JumpMeasure::from_atoms(self.atoms.iter().map(|a| (a.level, a.index)).collect())
    }
}

/// `∫_{ξ=t} f dχ`: the Euler integral of `f` over the exact level fiber,
/// computed by subdividing at the level and reading ancestor weights on the
/// hyperplane cells.
pub fn fiber_euler_integral(f: &ConstructibleFunction, xi: &Covector, t: f64) -> Result<i64> {
    let refinement = subdivide_by_level(f.complex(), xi, t)?;
    let fiber = refinement.fiber();
    Ok(fiber
        .iter_indices()
        .map(|i| f.weight(refinement.ancestor[i]) * cell_sign(refinement.complex.cell(i).dim()))
        .sum())
}

/// `∫_{ξ ≥ c} f dχ`: the Euler integral of `f` over the closed superlevel
/// set. For the indicator of the whole complex this is the superlevel `χ`.
pub fn superlevel_euler_integral(f: &ConstructibleFunction, xi: &Covector, c: f64) -> Result<i64> {
    let refinement = subdivide_by_level(f.complex(), xi, c)?;
    let sel = refinement.superlevel_closed();
    Ok(sel
        .iter_indices()
        .map(|i| f.weight(refinement.ancestor[i]) * cell_sign(refinement.complex.cell(i).dim()))
        .sum())
}

/// The jump measure `J_f(ξ)`: at every candidate level `t` (a vertex value)
/// the mass is the jump of the fiber Euler integral from below,
/// `∫_{ξ=t} f dχ - ∫_{ξ=t-0} f dχ`. The one-sided integral is evaluated at
/// `t - ε` with `ε` below half the minimal level gap, which is exact by
/// local triviality between vertex levels.
pub fn jump_measure(f: &ConstructibleFunction, xi: &Covector) -> Result<JumpMeasure> {
    let cx = f.complex();
    if cx.is_empty() {
        return Ok(JumpMeasure::empty());
    }
    require_generic(cx, xi, cx.tie_eps())?;
    let mut levels = cx.vertex_values(xi);
    levels.sort_unstable_by(f64::total_cmp);
    levels.dedup();

    let mut atoms = Vec::new();
    for (i, &t) in levels.iter().enumerate() {
        let eps_below = if i == 0 { 1.0 } else { (t - levels[i - 1]) / 2.0 };
        let at = fiber_euler_integral(f, xi, t)?;
        let below = fiber_euler_integral(f, xi, t - eps_below)?;
        let m = at - below;
        if m != 0 {
            atoms.push((t, m));
        }
    }
    Ok(JumpMeasure::from_atoms(atoms))
}

/// The bounded-Lipschitz distance between two finite atomic measures:
///
/// `sup { Σ m_i φ(t_i) : |φ| ≤ 1, φ 1-Lipschitz }`
///
/// over the signed difference of the measures. On the line the pairwise
/// Lipschitz constraints reduce to the consecutive gaps, so the linear
/// program is solved exactly by dynamic programming over concave
/// piecewise-linear value functions (a chain of sup-convolutions).
pub fn bl_distance(a: &JumpMeasure, b: &JumpMeasure) -> f64 {
    let diff = a.signed_difference(b);
    if diff.is_empty() {
        return 0.0;
    }
    let masses: Vec<f64> = diff.iter().map(|&(_, m)| m as f64).collect();
    let gaps: Vec<f64> = diff.windows(2).map(|w| w[1].0 - w[0].0).collect();

    // Value function after placing phi_0..phi_k, as a concave PL function of
    // phi_k on [-1, 1].
    let mut value = Pl::linear(masses[0]);
    for (k, &m) in masses.iter().enumerate().skip(1) {
        value = value.sliding_max(gaps[k - 1]).plus_linear(m);
    }
    value.max_value()
}

/// A piecewise-linear function on [-1, 1], stored as breakpoints with
/// strictly increasing x from -1 to 1.
#[derive(Debug, Clone)]
struct Pl {
    pts: Vec<(f64, f64)>,
}

impl Pl {
    fn linear(slope: f64) -> Pl {
        Pl { pts: vec![(-1.0, -slope), (1.0, slope)] }
    }

    fn eval(&self, x: f64) -> f64 {
        let pts = &self.pts;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x <= x1 {
                if x1 == x0 {
                    return y1;
                }
                let s = (x - x0) / (x1 - x0);
                return y0 + s * (y1 - y0);
            }
        }
        pts.last().unwrap().1
    }

    fn plus_linear(mut self, slope: f64) -> Pl {
        for (x, y) in self.pts.iter_mut() {
            *y += slope * *x;
        }
        self
    }

    fn max_value(&self) -> f64 {
        self.pts.iter().map(|&(_, y)| y).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `W(x) = max { V(s) : |s - x| <= d, s in [-1, 1] }` restricted back to
    /// [-1, 1]. For concave V this is again concave piecewise-linear.
    fn sliding_max(&self, d: f64) -> Pl {
        debug_assert!(d >= 0.0);
        let ymax = self.max_value();
        let xl = self.pts.iter().find(|&&(_, y)| y == ymax).unwrap().0;
        let xr = self.pts.iter().rev().find(|&&(_, y)| y == ymax).unwrap().0;

        let clip = |x: f64| x.clamp(-1.0, 1.0);
        let mut xs: Vec<f64> = vec![-1.0, 1.0, clip(xl - d), clip(xr + d)];
        for &(x, _) in &self.pts {
            xs.push(clip(x - d));
            xs.push(clip(x + d));
        }
        xs.sort_unstable_by(f64::total_cmp);
        xs.dedup();

        let pts = xs
            .into_iter()
            .map(|x| {
                let y = if x < xl - d {
                    self.eval(x + d)
                } else if x > xr + d {
                    self.eval(x - d)
                } else {
                    ymax
                };
                (x, y)
            })
            .collect();
        Pl { pts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellSelection;
    use crate::morse::morse_slice;
    use crate::sampling::sample_generic_covector;
    use crate::shapes;
    use std::sync::Arc;

    fn indicator_all(cx: &Arc<crate::complex::SimplicialComplex>) -> ConstructibleFunction {
        ConstructibleFunction::indicator(cx.clone(), &CellSelection::all(cx))
    }

    #[test]
    fn segment_jump_is_delta_at_origin() {
        let cx = Arc::new(shapes::segment(1));
        let f = indicator_all(&cx);
        let xi = Covector::unit(&[1.0]).unwrap();
        let j = jump_measure(&f, &xi).unwrap();
        // At t=0 the fiber chi jumps 0 -> 1; at t=1 both one-sided fibers
        // are points, so the jump vanishes.
        assert_eq!(j.atoms, vec![(0.0, 1)]);
    }

    #[test]
    fn point_jump_is_single_atom() {
        let cx = Arc::new(shapes::point(2));
        let f = indicator_all(&cx);
        let xi = Covector::unit(&[0.6, 0.8]).unwrap();
        let j = jump_measure(&f, &xi).unwrap();
        assert_eq!(j.atoms, vec![(0.0, 1)]);
    }

    #[test]
    fn jump_negates_with_f() {
        let cx = Arc::new(shapes::disk());
        let f = indicator_all(&cx);
        let xi = sample_generic_covector(&cx, 3).unwrap();
        let j = jump_measure(&f, &xi).unwrap();
        let jneg = jump_measure(&f.scale(-1), &xi).unwrap();
        assert_eq!(jneg, j.negated());
    }

    #[test]
    fn jump_matches_reflected_slice_pushforward() {
        // J_{I_X}(xi) equals the beta-pushforward of the slice taken along
        // the reversed orientation: the atoms of morse_slice(X, -xi) at
        // levels <xi, v>.
        for cx in [shapes::segment(2), shapes::disk(), shapes::sphere_octahedron()] {
            let cx = Arc::new(cx);
            let f = indicator_all(&cx);
            for seed in 0..5 {
                let xi = sample_generic_covector(&cx, seed).unwrap();
                let j = jump_measure(&f, &xi).unwrap();
                let slice = morse_slice(&cx, &xi.negated()).unwrap();
                let pushed = slice.beta_pushforward().reflected();
                assert_eq!(j, pushed, "seed {seed}");
            }
        }
    }

    #[test]
    fn jump_total_is_euler_characteristic() {
        // Telescoping over all levels gives chi_o of the support.
        let cx = Arc::new(shapes::torus(6, 3));
        let f = indicator_all(&cx);
        let xi = sample_generic_covector(&cx, 9).unwrap();
        let j = jump_measure(&f, &xi).unwrap();
        assert_eq!(j.total(), 0);
    }

    #[test]
    fn bl_distance_identical_is_zero() {
        let a = JumpMeasure::from_atoms(vec![(0.3, 2), (-1.0, -1)]);
        assert_eq!(bl_distance(&a, &a), 0.0);
    }

    #[test]
    fn bl_distance_two_deltas() {
        for eps in [0.1, 0.5, 1.0, 1.9] {
            let a = JumpMeasure::from_atoms(vec![(0.0, 1)]);
            let b = JumpMeasure::from_atoms(vec![(eps, 1)]);
            let d = bl_distance(&a, &b);
            assert!((d - eps).abs() < 1e-12, "eps={eps} d={d}");
        }
        // Far apart the distance saturates at 2 (phi = +-1).
        let a = JumpMeasure::from_atoms(vec![(0.0, 1)]);
        let b = JumpMeasure::from_atoms(vec![(5.0, 1)]);
        assert!((bl_distance(&a, &b) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bl_distance_delta_vs_empty_is_one() {
        let a = JumpMeasure::from_atoms(vec![(0.7, 1)]);
        let d = bl_distance(&a, &JumpMeasure::empty());
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bl_metric_properties_spot_check() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let rand_measure = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(0..5);
                JumpMeasure::from_atoms(
                    (0..n)
                        .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-3..4)))
                        .collect(),
                )
            };
            let a = rand_measure(&mut rng);
            let b = rand_measure(&mut rng);
            let c = rand_measure(&mut rng);
            let dab = bl_distance(&a, &b);
            let dba = bl_distance(&b, &a);
            assert!((dab - dba).abs() < 1e-9, "symmetry");
            assert!(bl_distance(&a, &a) < 1e-12, "identity");
            let dac = bl_distance(&a, &c);
            let dcb = bl_distance(&c, &b);
            assert!(dab <= dac + dcb + 1e-9, "triangle inequality");
        }
    }
}
