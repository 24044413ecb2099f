use crate::error::{Error, Result};
use crate::spectral::CutoffProfile;

/// Renormalization constant
/// `r_lambda(t) = sum_{k != 0} l(|k|/lambda)^2 (1 - e^{-2 nu k^2 t}) / (2 nu) * |k| / (1 + nu k^2)`.
///
/// Only `|k| < lambda` contribute. `t = inf` gives the stationary limit.
pub fn renorm_constant(lambda: f64, t: f64, nu: f64, profile: &CutoffProfile) -> Result<f64> {
    renorm_constant_truncated(lambda, t, nu, profile, i64::MAX)
}

/// [`renorm_constant`] restricted to `|k| <= k_max`, the value matched by
/// a field resolved on a grid with that band.
pub fn renorm_constant_truncated(
    lambda: f64,
    t: f64,
    nu: f64,
    profile: &CutoffProfile,
    k_max: i64,
) -> Result<f64> {
    if !(lambda >= 1.0) || lambda.is_infinite() {
        return Err(Error::contract(format!("cutoff level {lambda} must be at least 1")));
    }
    if !(t >= 0.0) {
        return Err(Error::contract(format!("time {t} must be non-negative")));
    }
    if !(nu > 0.0) {
        return Err(Error::contract(format!("viscosity {nu} must be positive")));
    }
    let top = (lambda.ceil() as i64).min(k_max);
    let term = |k: f64| {
        let l = profile.low_weight(k, lambda);
        if l == 0.0 {
            return 0.0;
        }
        let k2 = k * k;
        let growth = if t.is_infinite() {
            1.0
        } else {
            -(-2.0 * nu * k2 * t).exp_m1()
        };
        l * l * growth / (2.0 * nu) * k / (1.0 + nu * k2)
    };
    let exact_top = top.min(EXACT_TERMS);
    let mut sum: f64 = (1..=exact_top).map(|k| term(k as f64)).sum();
    if top > exact_top {
        sum += log_simpson(&term, exact_top as f64 + 0.5, top as f64 + 0.5);
    }
    Ok(2.0 * sum)
}

/// Modes summed one by one; the rest of the band is integrated.
const EXACT_TERMS: i64 = 1 << 20;

/// `int_a^b f(x) dx` by Simpson's rule in `u = ln x`, which matches the sum
/// over integers `k` in `(a, b)` to `O(a^{-2})` for the slowly varying terms
/// of `r_lambda`.
fn log_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const INTERVALS: usize = 4096;
    let (ua, ub) = (a.ln(), b.ln());
    let h = (ub - ua) / INTERVALS as f64;
    let g = |i: usize| {
        let x = (ua + h * i as f64).exp();
        f(x) * x
    };
    let mut acc = g(0) + g(INTERVALS);
    for i in 1..INTERVALS {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i);
    }
    acc * h / 3.0
}

/// `sup_t r_lambda(t) / ln(lambda)` for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBoundRow {
    pub lambda: f64,
    pub ratio: f64,
}

/// Scans `sup_{t in times} r_lambda(t) / ln(lambda)` over the given levels.
pub fn log_bound_scan(
    lambdas: &[f64],
    times: &[f64],
    nu: f64,
    profile: &CutoffProfile,
) -> Result<Vec<LogBoundRow>> {
    if times.is_empty() {
        return Err(Error::contract("log-bound scan needs at least one time"));
    }
    lambdas
        .iter()
        .map(|&lambda| {
            if !(lambda > 1.0) {
                return Err(Error::contract(format!(
                    "log-bound level {lambda} must exceed 1"
                )));
            }
            let mut sup: f64 = 0.0;
            for &t in times {
                sup = sup.max(renorm_constant(lambda, t, nu, profile)?);
            }
            Ok(LogBoundRow {
                lambda,
                ratio: sup / lambda.ln(),
            })
        })
        .collect()
}

/// `max / min` of the scanned ratios over levels `>= lambda_min`.
pub fn log_band_width(rows: &[LogBoundRow], lambda_min: f64) -> f64 {
    let kept = rows.iter().filter(|r| r.lambda >= lambda_min).map(|r| r.ratio);
    let (lo, hi) = kept.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi / lo
}
