use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::noise::rng::{complex_normal, mode_stream, Domain};
use crate::spectral::{Grid, SpectralField};

/// Seeded rough forcing, piecewise constant on solver steps.
///
/// Each step draws fresh independent coefficients with standard deviation
/// `|k|^{3/2 - 3 kappa}`, giving the spatial roughness of `C^{-2 + 3 kappa}`.
#[derive(Debug, Clone)]
pub struct ZetaSource {
    grid: Arc<Grid>,
    kappa: f64,
    streams: Vec<ChaCha8Rng>,
}

impl ZetaSource {
    pub fn new(grid: &Arc<Grid>, seed: u64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 0.5) {
            return Err(Error::contract(format!("kappa = {kappa} must lie in (0, 1/2)")));
        }
        let streams = (1..=grid.k_max())
            .map(|m| mode_stream(seed, Domain::Zeta, m as u64))
            .collect();
        Ok(Self {
            grid: Arc::clone(grid),
            kappa,
            streams,
        })
    }

    pub fn exponent(&self) -> f64 {
        1.5 - 3.0 * self.kappa
    }

    /// Forcing for the next step.
    pub fn next_field(&mut self) -> SpectralField {
        let a = self.exponent();
        let mut f = SpectralField::zeros(&self.grid);
        for (i, rng) in self.streams.iter_mut().enumerate() {
            let k = i as i64 + 1;
            let c = complex_normal(rng) * (k as f64).powf(a);
            f.set_mode(k, c).expect("mode in band");
        }
        f
    }
}

/// The forcing of step `0` for a given seed: convenience for refinement
/// studies.
pub fn synth_zeta(seed: u64, kappa: f64, grid: &Arc<Grid>) -> Result<SpectralField> {
    Ok(ZetaSource::new(grid, seed, kappa)?.next_field())
}
