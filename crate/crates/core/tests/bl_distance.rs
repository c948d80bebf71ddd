//! Cross-checks the bounded-Lipschitz distance against an independent
//! linear-program solver: the full LP over the values of the test function
//! at the atom locations, with box constraints and all pairwise Lipschitz
//! constraints, solved by a dense tableau simplex.

use plnc_core::jump::{bl_distance, JumpMeasure};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximizes `c . phi` subject to `|phi_i| <= 1` and
/// `|phi_i - phi_j| <= |t_i - t_j|` by the substitution `x = phi + 1`:
/// `max c.x - sum(c)` with `x >= 0`, `x_i <= 2`, `x_i - x_j <= d_ij`,
/// which has the origin as a basic feasible point.
fn lp_oracle(locations: &[f64], masses: &[f64]) -> f64 {
    let n = locations.len();
    if n == 0 {
        return 0.0;
    }
    // Constraint rows: coefficients over x, then rhs.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..n {
        let mut r = vec![0.0; n];
        r[i] = 1.0;
        rows.push((r, 2.0));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut r = vec![0.0; n];
                r[i] = 1.0;
                r[j] = -1.0;
                rows.push((r, (locations[i] - locations[j]).abs()));
            }
        }
    }
    let m = rows.len();
    let cols = n + m + 1;
    // Tableau: m constraint rows then the objective row (maximize).
    let mut t = vec![vec![0.0; cols]; m + 1];
    for (ri, (coeffs, rhs)) in rows.iter().enumerate() {
        t[ri][..n].copy_from_slice(coeffs);
        t[ri][n + ri] = 1.0;
        t[ri][cols - 1] = *rhs;
    }
    for j in 0..n {
        t[m][j] = -masses[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland's rule: smallest index with a negative reduced cost.
        let Some(pivot_col) = (0..cols - 1).find(|&j| t[m][j] < -1e-12) else {
            break;
        };
        let mut pivot_row = None;
        let mut best = f64::INFINITY;
        for (ri, row) in t.iter().enumerate().take(m) {
            if row[pivot_col] > 1e-12 {
                let ratio = row[cols - 1] / row[pivot_col];
                if ratio < best - 1e-15
                    || (ratio < best + 1e-15
                        && pivot_row.map_or(true, |pr: usize| basis[ri] < basis[pr]))
                {
                    best = ratio;
                    pivot_row = Some(ri);
                }
            }
        }
        let pr = pivot_row.expect("bounded LP");
        let d = t[pr][pivot_col];
        for v in t[pr].iter_mut() {
            *v /= d;
        }
        for ri in 0..=m {
            if ri != pr && t[ri][pivot_col].abs() > 1e-15 {
                let f = t[ri][pivot_col];
                for j in 0..cols {
                    t[ri][j] -= f * t[pr][j];
                }
            }
        }
        basis[pr] = pivot_col;
    }
    t[m][cols - 1] - masses.iter().sum::<f64>()
}

fn bl_via_lp(a: &JumpMeasure, b: &JumpMeasure) -> f64 {
    let diff = a.signed_difference(b);
    let locations: Vec<f64> = diff.iter().map(|&(t, _)| t).collect();
    let masses: Vec<f64> = diff.iter().map(|&(_, m)| m as f64).collect();
    lp_oracle(&locations, &masses)
}

#[test]
fn frozen_cases_match_hand_lp() {
    // delta_0 vs delta_eps: optimum phi(0) = eps/2 shifted to the bounds,
    // value eps for eps < 2.
    let a = JumpMeasure::from_atoms(vec![(0.0, 1)]);
    let b = JumpMeasure::from_atoms(vec![(0.25, 1)]);
    assert!((bl_via_lp(&a, &b) - 0.25).abs() < 1e-9);
    assert!((bl_distance(&a, &b) - 0.25).abs() < 1e-12);

    // delta_0 vs empty: single variable, phi(0) = 1.
    let e = JumpMeasure::empty();
    assert!((bl_via_lp(&a, &e) - 1.0).abs() < 1e-9);
    assert!((bl_distance(&a, &e) - 1.0).abs() < 1e-12);

    // Heavier atoms scale linearly.
    let c = JumpMeasure::from_atoms(vec![(0.0, 3)]);
    assert!((bl_distance(&c, &e) - 3.0).abs() < 1e-12);
    assert!((bl_via_lp(&c, &e) - 3.0).abs() < 1e-9);
}

#[test]
fn random_measures_match_lp_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..300 {
        let rand_measure = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(0..6);
            JumpMeasure::from_atoms(
                (0..n)
                    .map(|_| {
                        let t: f64 = rng.gen_range(-3.0..3.0);
                        let m: i64 = rng.gen_range(-4..5);
                        (t, m)
                    })
                    .collect(),
            )
        };
        let a = rand_measure(&mut rng);
        let b = rand_measure(&mut rng);
        let fast = bl_distance(&a, &b);
        let slow = bl_via_lp(&a, &b);
        assert!(
            (fast - slow).abs() < 1e-8,
            "case {case}: dp={fast} lp={slow} a={a:?} b={b:?}"
        );
    }
}

#[test]
fn clustered_atoms_match_lp_oracle() {
    // Clusters exercise the plateau logic of the sliding maximum.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let base: f64 = rng.gen_range(-1.0..1.0);
        let a = JumpMeasure::from_atoms(
            (0..4)
                .map(|_| (base + rng.gen_range(0.0..0.01), rng.gen_range(-2..3)))
                .collect(),
        );
        let b = JumpMeasure::from_atoms(vec![(base + 0.005, 1)]);
        let fast = bl_distance(&a, &b);
        let slow = bl_via_lp(&a, &b);
        assert!((fast - slow).abs() < 1e-8, "dp={fast} lp={slow}");
    }
}
