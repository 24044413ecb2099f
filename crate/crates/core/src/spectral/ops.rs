//! Mode-wise operators: Littlewood–Paley blocks, frequency projections and
//! general Fourier multipliers.

use num_complex::Complex64;

use super::field::SpectralField;
use super::profile::CutoffProfile;
use crate::error::{Error, Result};

/// `Delta_j f` for `-1 <= j <= j_max`.
pub fn lp_block(f: &SpectralField, j: i32) -> Result<SpectralField> {
    let j_max = f.grid().lp().j_max();
    if j < -1 || j > j_max {
        return Err(Error::BlockIndex { j, j_max });
    }
    Ok(lp_block_unchecked(f, j))
}

pub(crate) fn lp_block_unchecked(f: &SpectralField, j: i32) -> SpectralField {
    let row = f.grid().lp().row(j);
    f.map_real_symbol(|k| row[k as usize])
}

/// `S_i f = sum_{-1 <= j <= i-1} Delta_j f`; zero for `i <= -1`, the identity
/// once `i - 1 >= j_max`.
pub fn low_sum(f: &SpectralField, i: i32) -> SpectralField {
    let lp = f.grid().lp();
    if i <= -1 {
        return SpectralField::zeros(f.grid());
    }
    if i > lp.j_max() {
        return f.clone();
    }
    let half = f.n() / 2;
    let weights: Vec<f64> = (0..=half)
        .map(|k| (-1..i).map(|j| lp.row(j)[k]).sum())
        .collect();
    f.map_real_symbol(|k| weights[k as usize])
}

/// Multiply coefficient `k` by `symbol(k)`.
///
/// The symbol must satisfy `symbol(-k) = conj(symbol(k))` on the resolved
/// band and be real at `k = 0`, otherwise the output would not be a real
/// field and a contract error is returned.
pub fn apply_multiplier(
    f: &SpectralField,
    symbol: impl Fn(i64) -> Complex64,
) -> Result<SpectralField> {
    let grid = f.grid();
    let kmax = grid.k_max();
    let tol = 1e-14;
    let s0 = symbol(0);
    if s0.im.abs() > tol * s0.norm().max(1.0) {
        return Err(Error::contract(format!(
            "multiplier symbol at k = 0 is not real ({s0})"
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); f.n()];
    coeffs[0] = f.coeff(0) * s0.re;
    for k in 1..=kmax {
        let sp = symbol(k);
        let sm = symbol(-k);
        if (sm - sp.conj()).norm() > tol * sp.norm().max(1.0) {
            return Err(Error::contract(format!(
                "multiplier symbol is not Hermitian at k = {k}: {sp} vs {sm}"
            )));
        }
        let c = f.coeff(k) * sp;
        coeffs[grid.slot(k)] = c;
        coeffs[grid.slot(-k)] = c.conj();
    }
    Ok(SpectralField::from_raw(grid, coeffs))
}

fn check_level(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::contract(format!("cutoff level {lambda} must be positive")))
    }
}

/// `H_lambda f`: multiply mode `k` by `h(|k| / lambda)`.
///
/// Returned as `f - (f - h f)`. Both subtractions are exact or the first
/// one is, so `L_lambda f + H_lambda f` reproduces `f` bit for bit.
pub fn project_high(f: &SpectralField, lambda: f64, profile: &CutoffProfile) -> Result<SpectralField> {
    check_level(lambda)?;
    let scaled = f.map_real_symbol(|k| profile.high_weight(k as f64, lambda));
    Ok(f - &(f - &scaled))
}

/// `L_lambda f`, formed as `f - H_lambda f` so that the two projections
/// recombine to `f`.
pub fn project_low(f: &SpectralField, lambda: f64, profile: &CutoffProfile) -> Result<SpectralField> {
    let high = project_high(f, lambda, profile)?;
    Ok(f - &high)
}

/// Both projections at once, `(L_lambda f, H_lambda f)`.
pub fn split_frequencies(
    f: &SpectralField,
    lambda: f64,
    profile: &CutoffProfile,
) -> Result<(SpectralField, SpectralField)> {
    let high = project_high(f, lambda, profile)?;
    Ok((f - &high, high))
}
