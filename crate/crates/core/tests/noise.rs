use std::sync::Arc;

use burgers_core::noise::{
    enhance, enhanced_noise, log_bound_scan, renorm_constant, renorm_constant_truncated, step_variance, OuState,
};
use burgers_core::spectral::{chi, project_low, CutoffProfile, Grid, LpPartition, SpectralField};
use num_complex::Complex64;
use proptest::prelude::*;

fn weight(j: i32, k: i64) -> f64 {
    LpPartition::profile(j, k.unsigned_abs() as f64)
}

/// Resonant product as an explicit double sum over modes and block pairs.
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

fn smoothstep(s: f64) -> f64 {
    let phi = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    phi(s) / (phi(s) + phi(1.0 - s))
}

/// Low-pass weight of the cutoff profile, `1 - psi(2 r - 1)` on `[1/2, 1]`.
fn low(r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        1.0 - smoothstep(2.0 * r - 1.0)
    }
}

#[test]
fn stationary_constant_matches_the_direct_sum() {
    let direct: f64 = 2.0
        * (1..=7)
            .map(|k| {
                let k = k as f64;
                low(k / 8.0).powi(2) * k / (2.0 * (1.0 + k * k))
            })
            .sum::<f64>();
    let r = renorm_constant(8.0, f64::INFINITY, 1.0, &CutoffProfile).unwrap();
    assert!((r - direct).abs() <= 1e-14 * direct, "{r} vs {direct}");
}

#[test]
fn constant_vanishes_at_time_zero() {
    for lambda in [1.0, 3.5, 64.0, 1e4] {
        assert_eq!(renorm_constant(lambda, 0.0, 0.7, &CutoffProfile).unwrap(), 0.0);
    }
}

#[test]
fn truncation_only_drops_unresolved_modes() {
    let full = renorm_constant(20.0, 0.3, 1.0, &CutoffProfile).unwrap();
    assert_eq!(renorm_constant_truncated(20.0, 0.3, 1.0, &CutoffProfile, 64).unwrap(), full);
    assert!(renorm_constant_truncated(20.0, 0.3, 1.0, &CutoffProfile, 8).unwrap() < full);
}

#[test]
fn log_bound_scan_rejects_levels_at_or_below_one() {
    assert!(log_bound_scan(&[1.0], &[1.0], 1.0, &CutoffProfile).is_err());
    assert!(log_bound_scan(&[4.0], &[], 1.0, &CutoffProfile).is_err());
}

#[test]
fn one_step_variance_composes_over_half_steps() {
    let nu = 0.8;
    for m in [1i64, 3, 17, 100] {
        for dt in [1e-4, 1e-2, 0.5] {
            let a = nu * (m * m) as f64;
            let half = step_variance(nu, m, dt / 2.0);
            let two = (-a * dt).exp() * half + half;
            let one = step_variance(nu, m, dt);
            assert!((two - one).abs() <= 1e-14 * one, "m {m} dt {dt}");
        }
    }
}

#[test]
fn generated_noise_fields_are_real() {
    let g = Grid::new(128).unwrap();
    let mut s = OuState::new(&g, 1.0, 9).unwrap();
    for _ in 0..20 {
        s.step(1e-3).unwrap();
    }
    let e = enhanced_noise(&s, 16.0, 0.1, &CutoffProfile).unwrap();
    for f in [s.x(), s.q(), &e.theta1, &e.theta2, &e.theta1.helmholtz_inverse(1.0)] {
        assert!(f.imaginary_ratio() <= 1e-12);
        assert_eq!(f.hermitian_defect(), 0.0);
    }
}

#[test]
fn cutoff_noises_agree_where_both_cutoffs_are_one() {
    let g = Grid::new(128).unwrap();
    let s = OuState::sample_at(&g, 1.0, 4, 0.5).unwrap();
    let a = project_low(s.x(), 10.0, &CutoffProfile).unwrap();
    let b = project_low(s.x(), 30.0, &CutoffProfile).unwrap();
    for k in 1..=g.k_max() {
        let kf = k as f64;
        if low(kf / 10.0) == 1.0 && low(kf / 30.0) == 1.0 {
            assert_eq!(a.coeff(k), b.coeff(k), "mode {k}");
        }
    }
    assert_eq!(a.coeff(5), s.x().coeff(5));
}

#[test]
fn single_mode_enhancement_matches_the_block_oracle() {
    let g = Grid::new(64).unwrap();
    let x = SpectralField::from_modes(&g, &[(2, Complex64::new(1.0, 0.0))]).unwrap();
    let (nu, lambda, t) = (1.0, 8.0, 0.25);
    let e = enhance(&x, t, nu, lambda, 0.1, &CutoffProfile).unwrap();
    // L_8 keeps mode 2 untouched, so Theta1 = d_x X = 2i e_2 + c.c.
    assert_eq!(e.theta1.coeff(2), Complex64::new(0.0, 2.0));
    let p = e.theta1.map_real_symbol(|k| 1.0 / (1.0 + nu * (k * k) as f64));
    let r = renorm_constant_truncated(lambda, t, nu, &CutoffProfile, g.k_max()).unwrap();
    let expected = brute_resonant(&e.theta1, &p).add_constant(-r);
    assert!((&e.theta2 - &expected).l2_norm() <= 1e-13);
    // mode 2 straddles blocks 0 and 1 through chi(1)
    assert!(chi(1.0) > 0.0 && chi(1.0) < 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn constant_is_monotone_in_time(lambda in 1.0f64..500.0, nu in 0.05f64..3.0, t0 in 0.0f64..2.0, dt in 0.0f64..2.0) {
        let a = renorm_constant(lambda, t0, nu, &CutoffProfile).unwrap();
        let b = renorm_constant(lambda, t0 + dt, nu, &CutoffProfile).unwrap();
        let c = renorm_constant(lambda, f64::INFINITY, nu, &CutoffProfile).unwrap();
        prop_assert!(a <= b && b <= c);
    }

    #[test]
    fn constant_is_monotone_in_level(lambda in 1.0f64..500.0, dl in 0.0f64..100.0, nu in 0.05f64..3.0, t in 0.0f64..2.0) {
        let a = renorm_constant(lambda, t, nu, &CutoffProfile).unwrap();
        let b = renorm_constant(lambda + dl, t, nu, &CutoffProfile).unwrap();
        prop_assert!(a <= b);
    }

    #[test]
    fn same_seed_gives_the_same_path(seed in any::<u64>(), steps in 1usize..20) {
        let g: Arc<Grid> = Grid::new(32).unwrap();
        let mut a = OuState::new(&g, 1.0, seed).unwrap();
        let mut b = OuState::new(&g, 1.0, seed).unwrap();
        for _ in 0..steps {
            a.step(1e-2).unwrap();
            b.step(1e-2).unwrap();
        }
        prop_assert_eq!(a.x(), b.x());
        prop_assert_eq!(a.q(), b.q());
        prop_assert!(a.x().is_mean_zero());
    }
}
