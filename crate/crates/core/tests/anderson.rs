use std::sync::Arc;

use burgers_core::anderson::{lift, quadratic_form, resolvent_solve, solve_adaptive, RoughPair};
use burgers_core::noise::{enhanced_noise, OuState};
use burgers_core::paracalc::product;
use burgers_core::spectral::{CutoffProfile, Grid, LpPartition, SpectralField};
use num_complex::Complex64;
use proptest::prelude::*;

fn weight(j: i32, k: i64) -> f64 {
    LpPartition::profile(j, k.unsigned_abs() as f64)
}

fn brute_resonant(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let grid = f.grid();
    let kmax = grid.k_max();
    let j_max = grid.lp().j_max();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n()];
    for k in -kmax..=kmax {
        for l in -kmax..=kmax {
            let m = k + l;
            if m.abs() > kmax {
                continue;
            }
            let mut s = 0.0;
            for i in -1..=j_max {
                for j in (i - 1).max(-1)..=(i + 1).min(j_max) {
                    s += weight(i, k) * weight(j, l);
                }
            }
            out[grid.slot(m)] += f.coeff(k) * g.coeff(l) * s;
        }
    }
    SpectralField::from_coeffs(grid, out).unwrap()
}

fn band_limited(grid: &Arc<Grid>, coeffs: &[(f64, f64)]) -> SpectralField {
    let modes: Vec<(i64, Complex64)> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &(re, im))| (i as i64 + 1, Complex64::new(re, im)))
        .collect();
    SpectralField::from_modes(grid, &modes).unwrap()
}

fn rectangle_rule(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[test]
fn lift_of_a_single_mode_matches_the_block_oracle() {
    let g = Grid::new(64).unwrap();
    let eta = SpectralField::from_modes(&g, &[(3, Complex64::new(1.0, 0.0))]).unwrap();
    let c = 0.25;
    let pair = lift(&eta, c);
    // sigma(D) = -(1 - Delta)^{-1} multiplies modes +-3 by -1/10
    let sigma_eta = eta.scaled(-0.1);
    assert_eq!(pair.sigma_eta(), &sigma_eta);
    let expected = (-&brute_resonant(&eta, &sigma_eta)).add_constant(-c);
    assert!((&pair.theta2 - &expected).l2_norm() <= 1e-14);
    assert!(pair.theta2.coeff(0).re < 0.0);
}

#[test]
fn quadratic_form_matches_grid_quadrature() {
    let g = Grid::new(64).unwrap();
    let eta = band_limited(&g, &[(1.2, 0.0), (0.0, -0.7), (0.3, 0.4), (0.1, 0.0)]).add_constant(0.5);
    let w = band_limited(
        &g,
        &[(0.5, 0.1), (-0.2, 0.3), (0.05, 0.0), (0.0, 0.2), (0.1, -0.1), (0.02, 0.03), (0.0, 0.01), (0.01, 0.0)],
    );
    let pair = lift(&eta, 0.0);
    let form = quadratic_form(&pair, &w).unwrap();
    // modes stay below N, so the rectangle rule is exact
    let (wv, wxx, ev) = (w.values(), w.dxx().values(), eta.values());
    let integrand: Vec<f64> = (0..g.n()).map(|j| wv[j] * wxx[j] - ev[j] * wv[j] * wv[j]).collect();
    let quad = rectangle_rule(&integrand);
    assert!((form - quad).abs() <= 1e-10 * quad.abs().max(1.0), "{form} vs {quad}");
}

#[test]
fn fine_and_coarse_grids_agree_on_shared_modes() {
    let solve = |n: usize| {
        let g = Grid::new(n).unwrap();
        let eta = SpectralField::from_fn(&g, |x| 3.0 * (2.0 * std::f64::consts::PI * x).cos());
        let rhs = SpectralField::from_fn(&g, |x| (4.0 * std::f64::consts::PI * x).sin());
        resolvent_solve(&lift(&eta, 0.0), &rhs, 50.0, 1e-13, 200).unwrap().f.f
    };
    let coarse = solve(128);
    let fine = solve(256);
    let mut worst: f64 = 0.0;
    for k in -63..=63 {
        worst = worst.max((coarse.coeff(k) - fine.coeff(k)).norm());
    }
    assert!(worst <= 1e-8, "worst {worst}");
}

#[test]
fn contraction_improves_with_the_shift() {
    let g = Grid::new(64).unwrap();
    let eta = SpectralField::from_fn(&g, |x| 4.0 * (2.0 * std::f64::consts::PI * x).cos());
    let rhs = SpectralField::from_fn(&g, |x| (2.0 * std::f64::consts::PI * x).sin());
    let pair = lift(&eta, 0.0);
    let mut previous = f64::INFINITY;
    for a in [20.0, 50.0, 100.0, 200.0] {
        let sol = resolvent_solve(&pair, &rhs, a, 1e-12, 500).unwrap();
        let factors = sol.contraction_factors();
        let worst = factors.iter().copied().fold(0.0, f64::max);
        assert!(worst < 1.0, "a = {a}: {factors:?}");
        assert!(worst < previous, "a = {a}: {worst} after {previous}");
        previous = worst;
    }
}

#[test]
fn rough_potential_solutions_are_stable_under_refinement() {
    // a fixed cutoff level keeps Theta band-limited, so refining the grid
    // only adds resolved zeros
    let solve = |n: usize| {
        let g = Grid::new(n).unwrap();
        let noise = OuState::sample_at(&g, 1.0, 21, 1.0).unwrap();
        let enhanced = enhanced_noise(&noise, 8.0, 0.1, &CutoffProfile).unwrap();
        let pair = RoughPair::from_enhanced(&enhanced, 1.0).unwrap();
        let rhs = SpectralField::from_fn(&g, |x| (2.0 * std::f64::consts::PI * x).sin());
        let sol = solve_adaptive(&pair, &rhs, 50.0, 1e-12, 300).unwrap();
        let last = sol.trace.last().unwrap().residual;
        (sol.f.f, last)
    };
    let (coarse, r1) = solve(64);
    let (fine, r2) = solve(128);
    assert!(r1 <= 1e-8 && r2 <= 1e-8, "residuals {r1} {r2}");
    let diff: f64 = (-31..=31).map(|k| (coarse.coeff(k) - fine.coeff(k)).norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-10, "diff {diff}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smooth_lift_product_is_the_pointwise_product(
        eta in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..10),
        f in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..20),
        mean in -1.0f64..1.0,
    ) {
        let g = Grid::new(64).unwrap();
        let eta = band_limited(&g, &eta).add_constant(mean);
        let f = band_limited(&g, &f);
        let pair = lift(&eta, 0.0);
        let para = pair.product(&f).unwrap();
        let direct = product(&f, &eta).unwrap();
        prop_assert!((&para - &direct).l2_norm() <= 1e-10 * direct.l2_norm().max(1e-300));
    }

    #[test]
    fn quadratic_form_obeys_the_parallelogram_law(
        eta in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6),
        u in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..12),
        v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..12),
    ) {
        let g = Grid::new(64).unwrap();
        let pair = lift(&band_limited(&g, &eta), 0.0);
        let (u, v) = (band_limited(&g, &u), band_limited(&g, &v));
        let q = |w: &SpectralField| quadratic_form(&pair, w).unwrap();
        let lhs = q(&(&u + &v)) + q(&(&u - &v));
        let rhs = 2.0 * q(&u) + 2.0 * q(&v);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (q(&u).abs() + q(&v).abs()).max(1.0));
        // and it is homogeneous of degree two
        prop_assert!((q(&u.scaled(3.0)) - 9.0 * q(&u)).abs() <= 1e-10 * q(&u).abs().max(1.0));
    }
}
