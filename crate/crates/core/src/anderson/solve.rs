use std::io::Write;

use super::pair::{ParacontrolledFn, RoughPair};
use crate::error::{Error, Result};
use crate::spectral::{sobolev_norm, SpectralField};

/// Regularity at which fixed-point increments are measured.
pub const GAMMA: f64 = 0.9;

/// Largest number of shift doublings tried by [`solve_adaptive`].
pub const MAX_DOUBLINGS: u32 = 10;

/// Symbol of the shifted resolvent `-(a - Delta)^{-1}`.
pub fn shifted_symbol(k: i64, a: f64) -> f64 {
    -1.0 / (a + (k * k) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    /// `||f_{k} - f_{k-1}||_{H^gamma}`.
    pub increment: f64,
    /// `||(a - Delta) f_k + f_k eta - g||_{L^2}`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ResolventSolution {
    pub f: ParacontrolledFn,
    pub a: f64,
    pub iterations: usize,
    pub trace: Vec<TraceRow>,
}

impl ResolventSolution {
    /// Ratios of successive increments.
    pub fn contraction_factors(&self) -> Vec<f64> {
        self.trace
            .windows(2)
            .filter(|w| w[0].increment > 0.0)
            .map(|w| w[1].increment / w[0].increment)
            .collect()
    }
}

fn residual(pair_product: &SpectralField, f: &SpectralField, g: &SpectralField, a: f64) -> f64 {
    let mut r = f.map_real_symbol(|k| a + (k * k) as f64);
    r += pair_product;
    r -= g;
    r.l2_norm()
}

/// Solves `(a - Delta + eta) f = g` by iterating
/// `f <- -(a - Delta)^{-1} (f eta - g)` from `f_0 = (a - Delta)^{-1} g`, with
/// the paracontrolled product of `pair`.
pub fn resolvent_solve(
    pair: &RoughPair,
    g: &SpectralField,
    a: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ResolventSolution> {
    if !(a >= 2.0) || !a.is_finite() {
        return Err(Error::contract(format!("shift a = {a} must be at least 2")));
    }
    if !(tol > 0.0) {
        return Err(Error::contract(format!("tolerance {tol} must be positive")));
    }
    if max_iter == 0 {
        return Err(Error::contract("max_iter must be at least 1"));
    }
    g.ensure_same_grid(&pair.eta)?;
    let resolve = |h: &SpectralField| h.map_real_symbol(|k| shifted_symbol(k, a));
    let mut f = resolve(&g.scaled(-1.0));
    let mut prod = pair.product(&f)?;
    let mut trace = Vec::new();
    let mut first = None;
    for iteration in 1..=max_iter {
        let next = resolve(&(&prod - g));
        let increment = sobolev_norm(&(&next - &f), GAMMA);
        f = next;
        prod = pair.product(&f)?;
        trace.push(TraceRow {
            iteration,
            increment,
            residual: residual(&prod, &f, g, a),
        });
        let scale = *first.get_or_insert(increment);
        if increment < tol {
            return Ok(ResolventSolution {
                f: ParacontrolledFn::new(f, pair, GAMMA)?,
                a,
                iterations: iteration,
                trace,
            });
        }
        if !increment.is_finite() || increment > 1e8 * scale.max(tol) {
            return Err(Error::NonContraction {
                a,
                iterations: iteration,
                increment,
            });
        }
    }
    Err(Error::NonContraction {
        a,
        iterations: max_iter,
        increment: trace.last().map_or(f64::NAN, |r| r.increment),
    })
}

/// [`resolvent_solve`] starting at `a0` and doubling the shift on
/// non-contraction, up to `2^10 a0`.
pub fn solve_adaptive(
    pair: &RoughPair,
    g: &SpectralField,
    a0: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ResolventSolution> {
    let mut a = a0;
    let mut last = None;
    for _ in 0..=MAX_DOUBLINGS {
        match resolvent_solve(pair, g, a, tol, max_iter) {
            Err(e @ Error::NonContraction { .. }) => {
                last = Some(e);
                a *= 2.0;
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `<w, (Delta - eta) w>` with the paracontrolled product for `w eta`.
pub fn quadratic_form(pair: &RoughPair, w: &SpectralField) -> Result<f64> {
    let wv = pair.product(w)?;
    Ok(w.inner(&w.dxx()) - w.inner(&wv))
}

pub fn write_trace_csv(trace: &[TraceRow], out: impl Write) -> Result<()> {
    let mut out = out;
    writeln!(out, "# schema=1")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "increment", "residual"])?;
    for r in trace {
        w.write_record([
            r.iteration.to_string(),
            r.increment.to_string(),
            r.residual.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
