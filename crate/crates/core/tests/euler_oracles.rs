//! Independent oracles for the level-set machinery: closed-form star
//! formulas for superlevel and fiber Euler characteristics, checked against
//! the subdivision route, plus the additivity and linearity axioms on
//! random selections.

use std::sync::Arc;

use plnc_core::complex::{CellSelection, SimplicialComplex};
use plnc_core::euler::{chi_o, euler_integral, ConstructibleFunction};
use plnc_core::geometry::Covector;
use plnc_core::jump::fiber_euler_integral;
use plnc_core::morse::{fiber_chi, superlevel_chi};
use plnc_core::sampling::sample_generic_covector;
use plnc_core::shapes;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `chi_o(X ∩ {ξ ≥ c})` without subdivision: a cell contributes `(-1)^dim`
/// exactly when all its vertices are at level `>= c` (half-open star
/// decomposition of the superlevel set).
fn chi_closed_superlevel_oracle(cx: &SimplicialComplex, xi: &Covector, c: f64) -> i64 {
    let values = cx.vertex_values(xi);
    cx.cells()
        .iter()
        .filter(|s| s.vertices().iter().all(|&v| values[v as usize] >= c))
        .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
        .sum()
}

/// `chi_o(X ∩ {ξ > c})`: a cell contributes exactly when its maximal vertex
/// level is above `c`.
fn chi_open_superlevel_oracle(cx: &SimplicialComplex, xi: &Covector, c: f64) -> i64 {
    let values = cx.vertex_values(xi);
    cx.cells()
        .iter()
        .filter(|s| s.vertices().iter().any(|&v| values[v as usize] > c))
        .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
        .sum()
}

/// `∫_{ξ=t} f dχ` without subdivision: a cell meets the fiber in an open
/// cell of one dimension lower when it strictly crosses, and lies in the
/// fiber when all its vertices sit at the level.
fn fiber_integral_oracle(f: &ConstructibleFunction, xi: &Covector, t: f64) -> i64 {
    let cx = f.complex();
    let values = cx.vertex_values(xi);
    let mut total = 0i64;
    for (ci, s) in cx.cells().iter().enumerate() {
        let lo = s.vertices().iter().map(|&v| values[v as usize]).fold(f64::INFINITY, f64::min);
        let hi = s
            .vertices()
            .iter()
            .map(|&v| values[v as usize])
            .fold(f64::NEG_INFINITY, f64::max);
        let sign = if s.dim() % 2 == 0 { 1 } else { -1 };
        if lo == t && hi == t {
            total += f.weight(ci) * sign;
        } else if lo < t && t < hi {
            total += f.weight(ci) * (-sign);
        }
    }
    total
}

fn zoo() -> Vec<SimplicialComplex> {
    vec![
        shapes::segment(2),
        shapes::disk(),
        shapes::l_polygon(),
        shapes::sphere_octahedron(),
        shapes::torus(6, 4),
        shapes::wedge_two_circles(),
        shapes::tetrahedron_solid(),
        shapes::cube_solid(),
    ]
}

#[test]
fn superlevel_chi_matches_star_oracle() {
    for cx in zoo() {
        for seed in 0..5 {
            let xi = sample_generic_covector(&cx, seed).unwrap();
            let mut levels = cx.vertex_values(&xi);
            levels.sort_unstable_by(f64::total_cmp);
            let mut probes = levels.clone();
            // Midpoints and out-of-range values probe the regular cases.
            probes.extend(levels.windows(2).map(|w| (w[0] + w[1]) / 2.0));
            probes.push(levels[0] - 1.0);
            probes.push(levels[levels.len() - 1] + 1.0);
            for &c in &probes {
                assert_eq!(
                    superlevel_chi(&cx, &xi, c, true).unwrap(),
                    chi_closed_superlevel_oracle(&cx, &xi, c),
                    "closed superlevel at {c}"
                );
                assert_eq!(
                    superlevel_chi(&cx, &xi, c, false).unwrap(),
                    chi_open_superlevel_oracle(&cx, &xi, c),
                    "open superlevel at {c}"
                );
            }
        }
    }
}

#[test]
fn fiber_chi_matches_star_oracle() {
    for cx in zoo() {
        let arc = Arc::new(cx.clone());
        let ind = ConstructibleFunction::indicator(arc.clone(), &CellSelection::all(&arc));
        for seed in 0..5 {
            let xi = sample_generic_covector(&cx, seed).unwrap();
            let mut levels = cx.vertex_values(&xi);
            levels.sort_unstable_by(f64::total_cmp);
            let mut probes = levels.clone();
            probes.extend(levels.windows(2).map(|w| (w[0] + w[1]) / 2.0));
            for &t in &probes {
                assert_eq!(
                    fiber_chi(&cx, &xi, t).unwrap(),
                    fiber_integral_oracle(&ind, &xi, t),
                    "fiber chi at {t}"
                );
                assert_eq!(
                    fiber_euler_integral(&ind, &xi, t).unwrap(),
                    fiber_integral_oracle(&ind, &xi, t)
                );
            }
        }
    }
}

#[test]
fn fiber_integral_weighted_matches_oracle() {
    let cx = Arc::new(shapes::grid_mesh(4));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let weights: Vec<i64> = (0..cx.cell_count()).map(|_| rng.gen_range(-3..4)).collect();
    let f = ConstructibleFunction::from_weights(cx.clone(), weights).unwrap();
    for seed in 0..5 {
        let xi = sample_generic_covector(&cx, seed).unwrap();
        let mut levels = cx.vertex_values(&xi);
        levels.sort_unstable_by(f64::total_cmp);
        let probes: Vec<f64> = levels
            .iter()
            .copied()
            .chain(levels.windows(2).map(|w| (w[0] + w[1]) / 2.0))
            .collect();
        for &t in &probes {
            assert_eq!(
                fiber_euler_integral(&f, &xi, t).unwrap(),
                fiber_integral_oracle(&f, &xi, t),
                "weighted fiber integral at {t}"
            );
        }
    }
}

#[test]
fn chi_o_of_open_cells() {
    // chi_o(open k-cell) = (-1)^k for k = 0..3.
    let point = shapes::point(3);
    assert_eq!(chi_o(&point, &CellSelection::all(&point)), 1);
    let complexes = [shapes::segment(3), shapes::triangle(), shapes::tetrahedron_solid()];
    for (k, cx) in complexes.iter().enumerate() {
        let k = k + 1;
        let top = CellSelection::from_predicate(cx, |_, s| s.dim() == k);
        assert_eq!(chi_o(cx, &top), if k % 2 == 0 { 1 } else { -1 }, "open {k}-cell");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Full additivity of chi_o over arbitrary open-cell selections.
    #[test]
    fn chi_o_fully_additive(seed in 0u64..1000) {
        let cx = shapes::disk();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| {
            CellSelection::from_predicate(&cx, |_, _| rng.gen_bool(0.5))
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let lhs = chi_o(&cx, &a.union(&b));
        let rhs = chi_o(&cx, &a) + chi_o(&cx, &b) - chi_o(&cx, &a.intersection(&b));
        prop_assert_eq!(lhs, rhs);
    }

    /// Linearity of the Euler integral.
    #[test]
    fn euler_integral_linear(seed in 0u64..1000, a in -5i64..6, b in -5i64..6) {
        let cx = Arc::new(shapes::l_polygon());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rand_cf = || {
            let w: Vec<i64> = (0..cx.cell_count()).map(|_| rng.gen_range(-3..4)).collect();
            ConstructibleFunction::from_weights(cx.clone(), w).unwrap()
        };
        let f = rand_cf();
        let g = rand_cf();
        let combo = f.scale(a).add(&g.scale(b)).unwrap();
        prop_assert_eq!(euler_integral(&combo), a * euler_integral(&f) + b * euler_integral(&g));
    }
}
