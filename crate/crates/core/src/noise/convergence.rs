use std::io::Write;

use rayon::prelude::*;

use super::enhanced::enhance;
use super::ou::OuState;
use crate::error::{Error, Result};
use crate::spectral::{besov_norm, CutoffProfile, Grid};
use crate::stats::{median, power_law_exponent, strictly_decreasing};

/// Coupled study of `Theta2` across cutoff levels: every level sees the same
/// sample of `X(t)` for a given seed.
#[derive(Debug, Clone)]
pub struct ConvergenceConfig {
    pub levels: Vec<f64>,
    pub seeds: std::ops::Range<u64>,
    pub kappa: f64,
    pub p: f64,
    pub n_grid: usize,
    pub t: f64,
    pub nu: f64,
}

impl ConvergenceConfig {
    /// Levels `(n + 1)^tau` for `n = 1..=n_max`.
    pub fn power_levels(tau: f64, n_max: usize) -> Vec<f64> {
        (1..=n_max).map(|n| ((n + 1) as f64).powf(tau)).collect()
    }
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            levels: Self::power_levels(3.0, 6),
            seeds: 0..200,
            kappa: 0.2,
            p: 2.0,
            n_grid: 512,
            t: 1.0,
            nu: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub levels: Vec<f64>,
    /// `diffs[seed][n]`: `B^{-kappa}_{p,p}` norm of
    /// `Theta2(levels[n]) - Theta2(levels[n + 1])`.
    pub diffs: Vec<Vec<f64>>,
    pub seeds: Vec<u64>,
    pub medians: Vec<f64>,
    /// Fitted exponent of the medians against `levels[n]`.
    pub exponent: f64,
    /// Exponent of the bound shape `lambda^{-kappa p / 8}`.
    pub predicted: f64,
}

impl ConvergenceReport {
    pub fn strictly_decreasing(&self) -> bool {
        strictly_decreasing(&self.medians)
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut out = out;
        writeln!(out, "# schema=1")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["seed", "lambda_n", "lambda_next", "diff_norm"])?;
        for (seed, row) in self.seeds.iter().zip(&self.diffs) {
            for (n, d) in row.iter().enumerate() {
                w.write_record([
                    seed.to_string(),
                    self.levels[n].to_string(),
                    self.levels[n + 1].to_string(),
                    d.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn enhancement_convergence(cfg: &ConvergenceConfig) -> Result<ConvergenceReport> {
    if cfg.levels.len() < 2 {
        return Err(Error::contract("need at least two cutoff levels"));
    }
    let grid = Grid::new(cfg.n_grid)?;
    let profile = CutoffProfile;
    let seeds: Vec<u64> = cfg.seeds.clone().collect();
    let diffs: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&seed| {
            let x = OuState::sample_at(&grid, cfg.nu, seed, cfg.t)?;
            let thetas = cfg
                .levels
                .iter()
                .map(|&l| Ok(enhance(x.x(), cfg.t, cfg.nu, l, cfg.kappa, &profile)?.theta2))
                .collect::<Result<Vec<_>>>()?;
            thetas
                .windows(2)
                .map(|w| besov_norm(&(&w[0] - &w[1]), -cfg.kappa, cfg.p, cfg.p))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let pairs = cfg.levels.len() - 1;
    let medians: Vec<f64> = (0..pairs)
        .map(|n| median(&diffs.iter().map(|d| d[n]).collect::<Vec<_>>()))
        .collect();
    let exponent = if medians.iter().all(|m| *m > 0.0) {
        power_law_exponent(&cfg.levels[..pairs], &medians)
    } else {
        f64::NAN
    };
    Ok(ConvergenceReport {
        levels: cfg.levels.clone(),
        diffs,
        seeds,
        medians,
        exponent,
        predicted: -cfg.kappa * cfg.p / 8.0,
    })
}
