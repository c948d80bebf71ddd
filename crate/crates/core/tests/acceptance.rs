//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one PASS line (visible with `cargo test --test acceptance --
//! --nocapture`).

use std::sync::Arc;
use std::time::Instant;

use plnc_core::complex::{CellSelection, SimplicialComplex};
use plnc_core::euler::{chi_o, euler_integral, ConstructibleFunction};
use plnc_core::jump::jump_measure;
use plnc_core::morse::{index_sum_check, jump_identity_check, morse_index, morse_slice};
use plnc_core::normal_cycle::{
    build_normal_cycle, check_cycle_2d, check_legendrian, slice_at, NormalCycle, SphericalCell,
};
use plnc_core::sampling::sample_generic_covector;
use plnc_core::volumes::intrinsic_volumes_convex;
use plnc_core::{converge, crofton, shapes, tube, Covector};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, started: Instant, budget_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance criterion {id:2} ({name}): PASS in {elapsed:.2}s (budget {budget_secs}s)");
    assert!(
        elapsed < budget_secs,
        "criterion {id} exceeded its runtime budget: {elapsed:.2}s >= {budget_secs}s"
    );
}

fn baseline_complexes() -> Vec<(&'static str, SimplicialComplex, i64)> {
    vec![
        ("point", shapes::point(2), 1),
        ("segment", shapes::segment(2), 1),
        ("disk", shapes::disk(), 1),
        ("sphere", shapes::sphere_octahedron(), 2),
        ("torus", shapes::torus(8, 4), 0),
        ("wedge-of-two-circles", shapes::wedge_two_circles(), -1),
    ]
}

#[test]
fn c01_gauss_bonnet_sums() {
    let started = Instant::now();
    for (name, cx, expected) in baseline_complexes() {
        for seed in 0..50 {
            let xi = sample_generic_covector(&cx, seed).unwrap();
            let total = morse_slice(&cx, &xi).unwrap().total_index();
            assert_eq!(total, expected, "{name}, seed {seed}");
        }
    }
    report(1, "Gauss-Bonnet index sums", started, 10.0);
}

#[test]
fn c02_level_identities() {
    let started = Instant::now();
    for (name, cx, _) in baseline_complexes() {
        for seed in 0..50 {
            let xi = sample_generic_covector(&cx, seed).unwrap();
            let mut levels = cx.vertex_values(&xi);
            levels.sort_unstable_by(f64::total_cmp);
            for &t in &levels {
                let (a, b) = index_sum_check(&cx, &xi, t).unwrap();
                assert_eq!(a, b, "{name}, seed {seed}, superlevel drop at {t}");
                let (c, d) = jump_identity_check(&cx, &xi, t).unwrap();
                assert_eq!(c, d, "{name}, seed {seed}, fiber jump at {t}");
            }
        }
    }
    report(2, "level and jump identities", started, 30.0);
}

fn slice_suite() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("point-2d", shapes::point(2)),
        ("segment-2d", shapes::segment(2)),
        ("triangle", shapes::triangle()),
        ("pentagon", shapes::pentagon()),
        ("l-polygon", shapes::l_polygon()),
        ("point-3d", shapes::point(3)),
        ("segment-3d", shapes::segment(3)),
        ("tetrahedron", shapes::tetrahedron_solid()),
    ]
}

#[test]
fn c03_slice_consistency() {
    let started = Instant::now();
    for (name, cx) in slice_suite() {
        let nc = build_normal_cycle(&cx).unwrap();
        for seed in 0..100 {
            let xi = sample_generic_covector(&cx, seed).unwrap();
            let from_cycle = slice_at(&nc, &xi).unwrap();
            let from_morse = morse_slice(&cx, &xi).unwrap();
            assert_eq!(from_cycle.atoms, from_morse.atoms, "{name}, seed {seed}");
        }
    }
    report(3, "normal-cycle slice consistency", started, 30.0);
}

/// Per-vertex Morse indices of a face-closed selection of the parent mesh,
/// reported against parent vertex ids.
fn indices_of_subcomplex(
    parent: &SimplicialComplex,
    sel: &CellSelection,
    xi: &Covector,
) -> Vec<i64> {
    let cells: Vec<usize> = sel.iter_indices().collect();
    let mut out = vec![0i64; parent.vertex_count()];
    if cells.is_empty() {
        return out;
    }
    let (sub, to_parent) = parent.subcomplex_with_map(&cells).unwrap();
    for v in 0..sub.vertex_count() as u32 {
        out[to_parent[v as usize] as usize] = morse_index(&sub, xi, v).unwrap();
    }
    out
}

#[test]
fn c04_inclusion_exclusion() {
    let started = Instant::now();
    let parent = shapes::grid_mesh(10);
    assert_eq!(parent.cells().iter().filter(|s| s.dim() == 2).count(), 200);
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for pair in 0..20 {
        let random_closed = |rng: &mut ChaCha8Rng| {
            CellSelection::from_predicate(&parent, |_, _| rng.gen_bool(0.5)).face_closure(&parent)
        };
        let x = random_closed(&mut rng);
        let y = random_closed(&mut rng);
        let union = x.union(&y);
        let inter = x.intersection(&y);
        for sub_seed in 0..20 {
            let xi = sample_generic_covector(&parent, pair * 100 + sub_seed).unwrap();
            let ix = indices_of_subcomplex(&parent, &x, &xi);
            let iy = indices_of_subcomplex(&parent, &y, &xi);
            let iu = indices_of_subcomplex(&parent, &union, &xi);
            let ii = indices_of_subcomplex(&parent, &inter, &xi);
            for v in 0..parent.vertex_count() {
                assert_eq!(
                    iu[v] + ii[v],
                    ix[v] + iy[v],
                    "pair {pair}, seed {sub_seed}, vertex {v}"
                );
            }
        }
    }
    report(4, "inclusion-exclusion of indices", started, 30.0);
}

#[test]
fn c05_cycle_and_legendrian_checks() {
    let started = Instant::now();
    let planar: Vec<(&str, SimplicialComplex)> = slice_suite()
        .into_iter()
        .filter(|(_, cx)| cx.ambient_dim() == 2)
        .collect();
    for (name, cx) in &planar {
        let nc = build_normal_cycle(cx).unwrap();
        let leg = check_legendrian(&nc);
        assert!(leg.passed(), "{name}: legendrian violations {:?}", leg.violations);
        let cyc = check_cycle_2d(&nc).unwrap();
        assert!(cyc.passed(), "{name}: boundary residuals {:?}", cyc.unbalanced);
    }
    // Negative controls: a corrupted piece must fail each check.
    let cx = shapes::pentagon();
    let nc = build_normal_cycle(&cx).unwrap();
    let (complex, mut pieces) = nc.clone().into_parts();
    let k = pieces.iter().position(|p| p.simplex.dim() == 1).unwrap();
    if let SphericalCell::Point { dir } = &mut pieces[k].cell {
        let mut c = dir.coords().to_vec();
        c[0] += 0.25;
        *dir = Covector::unit(&c).unwrap();
    }
    let tilted = NormalCycle::from_parts(complex.clone(), pieces);
    assert!(!check_legendrian(&tilted).passed(), "tilted cell must violate orthogonality");

    let (_, mut pieces) = nc.clone().into_parts();
    let k = pieces.iter().position(|p| p.simplex.dim() == 0).unwrap();
    pieces[k].multiplicity += 1;
    let unbalanced = NormalCycle::from_parts(complex, pieces);
    assert!(
        !check_cycle_2d(&unbalanced).unwrap().passed(),
        "wrong multiplicity must break the boundary cancellation"
    );
    report(5, "cycle and Legendrian checks with negative controls", started, 30.0);
}

#[test]
fn c06_tube_formula_fits() {
    let started = Instant::now();
    let samples = 1_000_000;
    let radii = [0.04, 0.08, 0.12, 0.16, 0.2];

    let square = shapes::square();
    let experiment = tube::run_tube_experiment(&square, &radii, samples, 601).unwrap();
    let fit = tube::fit_tube_polynomial(&experiment, 2, 2).unwrap();
    let exact = [1.0, 2.0, 1.0];
    let convex = intrinsic_volumes_convex(&square).unwrap();
    for k in 0..=2 {
        let tol = 3.0 * fit.stderr[k];
        assert!(
            (fit.mu.mu[k] - exact[k]).abs() <= tol,
            "square mu_{k}: fitted {} vs {} (3se = {tol:.4})",
            fit.mu.mu[k],
            exact[k]
        );
        assert!(
            (fit.mu.mu[k] - convex.mu[k]).abs() <= tol,
            "square mu_{k} vs external angles"
        );
    }

    let cube = shapes::cube_solid();
    let experiment = tube::run_tube_experiment(&cube, &radii, samples, 602).unwrap();
    let fit = tube::fit_tube_polynomial(&experiment, 3, 3).unwrap();
    let exact = [1.0, 3.0, 3.0, 1.0];
    let convex = intrinsic_volumes_convex(&cube).unwrap();
    for k in 0..=3 {
        let tol = 3.0 * fit.stderr[k];
        assert!(
            (fit.mu.mu[k] - exact[k]).abs() <= tol,
            "cube mu_{k}: fitted {} vs {} (3se = {tol:.4})",
            fit.mu.mu[k],
            exact[k]
        );
        assert!(
            (fit.mu.mu[k] - convex.mu[k]).abs() <= tol,
            "cube mu_{k} vs external angles"
        );
    }
    report(6, "tube-formula intrinsic volumes", started, 120.0);
}

#[test]
fn c07_crofton_circle_length() {
    let started = Instant::now();
    let polygon = shapes::circle_polygon(256, 1.0);
    let exact = plnc_core::volumes::hausdorff_measure_exact(&polygon, 1, true).unwrap();
    let deficit = 2.0 * std::f64::consts::PI - exact;
    assert!(deficit > 0.0);
    let est = crofton::crofton_estimate(&polygon, 1, 1_000_000, 7001).unwrap();
    let tol = (3.0 * est.std_error).max(deficit);
    let err = (est.estimate - 2.0 * std::f64::consts::PI).abs();
    assert!(
        err <= tol + deficit.min(tol),
        "estimate {} vs 2pi, err {err:.5}, tol {tol:.5}",
        est.estimate
    );
    report(7, "Crofton length of the inscribed 256-gon", started, 60.0);
}

#[test]
fn c08_convergence_harness_annuli() {
    let started = Instant::now();
    let sectors = 64;
    let target = shapes::circle_polygon(sectors, 1.0);
    let ks = [2usize, 4, 8, 16, 32];
    let members: Vec<SimplicialComplex> = ks
        .iter()
        .map(|&k| shapes::annulus(sectors, 1.0, 1.0 + 1.0 / k as f64))
        .collect();
    let report_data = converge::convergence_harness_complexes(&members, &target, 20, 800).unwrap();
    assert!(
        report_data.strictly_decreasing(),
        "mean distances not strictly decreasing: {:?}",
        report_data.mean_distances
    );
    for (i, &k) in ks.iter().enumerate() {
        if k >= 8 {
            assert!(
                report_data.condition_c_all[i],
                "condition (c) failed for k = {k}"
            );
        }
    }
    report(8, "convergence of collapsing annuli", started, 60.0);
}

#[test]
fn c09_euler_calculus_axioms() {
    let started = Instant::now();
    let cx = shapes::disk();
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    for case in 0..1000 {
        let pick = |rng: &mut ChaCha8Rng| {
            CellSelection::from_predicate(&cx, |_, _| rng.gen_bool(0.5))
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let lhs = chi_o(&cx, &a.union(&b));
        let rhs = chi_o(&cx, &a) + chi_o(&cx, &b) - chi_o(&cx, &a.intersection(&b));
        assert_eq!(lhs, rhs, "additivity case {case}");
    }

    // chi_o of an open k-cell is (-1)^k.
    let point = shapes::point(2);
    assert_eq!(chi_o(&point, &CellSelection::all(&point)), 1);
    for (k, cx) in [shapes::segment(1), shapes::triangle(), shapes::tetrahedron_solid()]
        .iter()
        .enumerate()
    {
        let k = k + 1;
        let open_top = CellSelection::from_predicate(cx, |_, s| s.dim() == k);
        assert_eq!(chi_o(cx, &open_top), if k % 2 == 0 { 1 } else { -1 }, "open {k}-cell");
    }

    let arc = Arc::new(shapes::l_polygon());
    for case in 0..100 {
        let mut rand_cf = |rng: &mut ChaCha8Rng| {
            let w: Vec<i64> = (0..arc.cell_count()).map(|_| rng.gen_range(-3..4)).collect();
            ConstructibleFunction::from_weights(arc.clone(), w).unwrap()
        };
        let f = rand_cf(&mut rng);
        let g = rand_cf(&mut rng);
        let a: i64 = rng.gen_range(-5..6);
        let b: i64 = rng.gen_range(-5..6);
        let combo = f.scale(a).add(&g.scale(b)).unwrap();
        assert_eq!(
            euler_integral(&combo),
            a * euler_integral(&f) + b * euler_integral(&g),
            "linearity case {case}"
        );
    }
    report(9, "Euler-calculus axioms", started, 30.0);
}

#[test]
fn c10_quadric_gauss_map_indices() {
    let started = Instant::now();
    let e3 = Covector::unit(&[0.0, 0.0, 1.0]).unwrap();
    // Bowls (definite quadrics): index +1 against the covector pointing
    // away from the surface.
    let bowl = shapes::quadric_graph(1.0, 1.0);
    assert_eq!(morse_index(&bowl, &e3.negated(), 0).unwrap(), 1);
    let cap = shapes::quadric_graph(-1.0, -1.0);
    assert_eq!(morse_index(&cap, &e3, 0).unwrap(), 1);
    // Saddles (indefinite): index -1 for both vertical covectors.
    for (s1, s2) in [(1.0, -1.0), (-1.0, 1.0)] {
        let saddle = shapes::quadric_graph(s1, s2);
        assert_eq!(morse_index(&saddle, &e3, 0).unwrap(), -1, "s1={s1} s2={s2}");
        assert_eq!(morse_index(&saddle, &e3.negated(), 0).unwrap(), -1, "s1={s1} s2={s2}");
    }
    report(10, "quadric-graph Gauss-map indices", started, 10.0);
}

/// The jump measure of a slice-reflected indicator agrees with the
/// pushforward convention used throughout: an end-to-end guard that the
/// orientation conventions stay consistent.
#[test]
fn jump_slice_compatibility_convention() {
    let started = Instant::now();
    for cx in [shapes::segment(2), shapes::disk(), shapes::sphere_octahedron()] {
        let arc = Arc::new(cx.clone());
        let f = ConstructibleFunction::indicator(arc.clone(), &CellSelection::all(&arc));
        for seed in 0..10 {
            let xi = sample_generic_covector(&cx, seed).unwrap();
            let j = jump_measure(&f, &xi).unwrap();
            let pushed = morse_slice(&cx, &xi.negated()).unwrap().beta_pushforward().reflected();
            assert_eq!(j, pushed);
        }
    }
    report(0, "jump/slice orientation convention", started, 30.0);
}
