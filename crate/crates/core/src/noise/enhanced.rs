use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use super::ou::OuState;
use super::renorm::{renorm_constant, renorm_constant_truncated};
use crate::error::{Error, Result};
use crate::paracalc::resonant;
use crate::spectral::{project_low, CutoffProfile, Grid, SpectralField};
use crate::stats::MeanEstimate;

/// Renormalized enhancement `(Theta1, Theta2)` of the noise at one cutoff
/// level: `Theta1 = d_x L_lambda X` and
/// `Theta2 = Theta1 ∘ (1 - nu d_x^2)^{-1} Theta1 - r_lambda(t)`.
#[derive(Debug, Clone)]
pub struct EnhancedNoise {
    pub theta1: SpectralField,
    pub theta2: SpectralField,
    pub lambda: f64,
    pub t: f64,
    pub kappa: f64,
    /// The constant subtracted from the resonant product.
    pub r: f64,
}

/// The unrenormalized resonant product `d_x L_lambda X ∘ P^lambda` and
/// `Theta1`.
pub fn resonant_enhancement(
    x: &SpectralField,
    nu: f64,
    lambda: f64,
    profile: &CutoffProfile,
) -> Result<(SpectralField, SpectralField)> {
    let theta1 = project_low(x, lambda, profile)?.dx();
    let p = theta1.helmholtz_inverse(nu);
    let res = resonant(&theta1, &p)?;
    Ok((theta1, res))
}

/// Builds the enhanced noise from a field `X(t)`.
///
/// The subtracted constant is `r_lambda(t)` restricted to the modes the grid
/// resolves, which is the exact mean of the resonant product on that grid.
pub fn enhance(
    x: &SpectralField,
    t: f64,
    nu: f64,
    lambda: f64,
    kappa: f64,
    profile: &CutoffProfile,
) -> Result<EnhancedNoise> {
    if !(kappa > 0.0 && kappa < 0.5) {
        return Err(Error::contract(format!("kappa = {kappa} must lie in (0, 1/2)")));
    }
    let r = renorm_constant_truncated(lambda, t, nu, profile, x.grid().k_max())?;
    let (theta1, res) = resonant_enhancement(x, nu, lambda, profile)?;
    Ok(EnhancedNoise {
        theta1,
        theta2: res.add_constant(-r),
        lambda,
        t,
        kappa,
        r,
    })
}

pub fn enhanced_noise(
    state: &OuState,
    lambda: f64,
    kappa: f64,
    profile: &CutoffProfile,
) -> Result<EnhancedNoise> {
    enhance(state.x(), state.time(), state.nu(), lambda, kappa, profile)
}

/// Configuration of the Monte Carlo check that the spatial mean of the
/// resonant product equals `r_lambda(t)`.
#[derive(Debug, Clone)]
pub struct WickConfig {
    pub lambdas: Vec<f64>,
    pub times: Vec<f64>,
    pub samples: usize,
    pub n_grid: usize,
    pub nu: f64,
    pub seed: u64,
    pub sigmas: f64,
}

impl Default for WickConfig {
    fn default() -> Self {
        Self {
            lambdas: vec![8.0, 16.0, 32.0],
            times: vec![0.5, 1.0],
            samples: 2000,
            n_grid: 256,
            nu: 1.0,
            seed: 0,
            sigmas: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WickRow {
    pub lambda: f64,
    pub t: f64,
    pub n_samples: usize,
    pub mc_mean: f64,
    pub r_lambda: f64,
    pub std_err: f64,
}

impl WickRow {
    pub fn z_score(&self) -> f64 {
        MeanEstimate {
            mean: self.mc_mean,
            std_err: self.std_err,
            n: self.n_samples,
        }
        .z_score(self.r_lambda)
    }
}

/// Sample means of the resonant product for every `(lambda, t)`; sample `i`
/// uses seed `seed + i`.
pub fn wick_check(cfg: &WickConfig) -> Result<Vec<WickRow>> {
    if cfg.samples < 2 {
        return Err(Error::contract("need at least two Monte Carlo samples"));
    }
    let grid = Grid::new(cfg.n_grid)?;
    let profile = CutoffProfile;
    let mut rows = Vec::new();
    for &t in &cfg.times {
        let means: Vec<Vec<f64>> = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| sample_means(&grid, cfg, t, cfg.seed.wrapping_add(i), &profile))
            .collect::<Result<_>>()?;
        for (li, &lambda) in cfg.lambdas.iter().enumerate() {
            let xs: Vec<f64> = means.iter().map(|m| m[li]).collect();
            let est = MeanEstimate::from_samples(&xs);
            rows.push(WickRow {
                lambda,
                t,
                n_samples: cfg.samples,
                mc_mean: est.mean,
                r_lambda: renorm_constant(lambda, t, cfg.nu, &profile)?,
                std_err: est.std_err,
            });
        }
    }
    rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.t.total_cmp(&b.t)));
    Ok(rows)
}

fn sample_means(
    grid: &Arc<Grid>,
    cfg: &WickConfig,
    t: f64,
    seed: u64,
    profile: &CutoffProfile,
) -> Result<Vec<f64>> {
    let x = OuState::sample_at(grid, cfg.nu, seed, t)?;
    cfg.lambdas
        .iter()
        .map(|&l| Ok(resonant_enhancement(x.x(), cfg.nu, l, profile)?.1.mean()))
        .collect()
}

pub fn write_wick_csv(rows: &[WickRow], out: impl Write) -> Result<()> {
    let mut out = out;
    writeln!(out, "# schema=1")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", "t", "n_samples", "mc_mean", "r_lambda", "std_err"])?;
    for r in rows {
        w.write_record([
            r.lambda.to_string(),
            r.t.to_string(),
            r.n_samples.to_string(),
            r.mc_mean.to_string(),
            r.r_lambda.to_string(),
            r.std_err.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
