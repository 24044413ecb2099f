use std::sync::Arc;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::rng::{complex_normal, mode_stream, Domain};
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// `E[F(t, m) F(t, -m)]` for the stochastic convolution started from zero.
pub fn ou_covariance(nu: f64, m: i64, t: f64) -> f64 {
    let m2 = (m * m) as f64;
    -(-2.0 * nu * m2 * t).exp_m1() / (2.0 * nu * (m.abs() as f64))
}

/// Variance `E|G_m|^2` of the innovation over a step of length `dt`.
pub fn step_variance(nu: f64, m: i64, dt: f64) -> f64 {
    let m2 = (m * m) as f64;
    (m.abs() as f64) * -(-2.0 * nu * m2 * dt).exp_m1() / (2.0 * nu * m2)
}

/// Per-mode state of the Ornstein–Uhlenbeck field `X` solving
/// `dX = nu X_xx dt + Lambda^{1/2} dW`, `X(0) = 0`, together with the
/// auxiliary field `Q` solving `(d_t - nu d_x^2) Q = 2 X`, `Q(0) = 0`.
///
/// Each mode `m > 0` owns an independent random stream derived from
/// `(seed, m)`; negative modes follow by conjugation. `X` is advanced
/// exactly in law. `Q` is advanced with the exact integrating factor and
/// `X` frozen at the start of the step.
#[derive(Debug, Clone)]
pub struct OuState {
    grid: Arc<Grid>,
    nu: f64,
    t: f64,
    x: SpectralField,
    q: SpectralField,
    streams: Vec<ChaCha8Rng>,
}

impl OuState {
    pub fn new(grid: &Arc<Grid>, nu: f64, seed: u64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::contract(format!("viscosity {nu} must be positive")));
        }
        let streams = (1..=grid.k_max())
            .map(|m| mode_stream(seed, Domain::OuNoise, m as u64))
            .collect();
        Ok(Self {
            grid: Arc::clone(grid),
            nu,
            t: 0.0,
            x: SpectralField::zeros(grid),
            q: SpectralField::zeros(grid),
            streams,
        })
    }

    /// Draws `X(t)` directly from its Gaussian law at time `t`, with `Q`
    /// left at zero. Uses the same streams as [`OuState::step`].
    pub fn sample_at(grid: &Arc<Grid>, nu: f64, seed: u64, t: f64) -> Result<Self> {
        let mut s = Self::new(grid, nu, seed)?;
        if t > 0.0 {
            s.advance_x(t);
            s.t = t;
        }
        Ok(s)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// The noise field `X(t)`.
    pub fn x(&self) -> &SpectralField {
        &self.x
    }

    pub fn q(&self) -> &SpectralField {
        &self.q
    }

    /// Coefficient `F(t, m)`.
    pub fn mode(&self, m: i64) -> Complex64 {
        self.x.coeff(m)
    }

    fn advance_x(&mut self, dt: f64) {
        let grid = Arc::clone(&self.grid);
        let coeffs = self.x.coeffs_mut();
        for (i, rng) in self.streams.iter_mut().enumerate() {
            let m = i as i64 + 1;
            let decay = (-self.nu * (m * m) as f64 * dt).exp();
            let g = complex_normal(rng) * step_variance(self.nu, m, dt).sqrt();
            let c = coeffs[grid.slot(m)] * decay + g;
            coeffs[grid.slot(m)] = c;
            coeffs[grid.slot(-m)] = c.conj();
        }
    }

    fn advance_q(&mut self, dt: f64) {
        let nu = self.nu;
        let x = &self.x;
        let grid = Arc::clone(&self.grid);
        let coeffs = self.q.coeffs_mut();
        for m in 1..=grid.k_max() {
            let a = nu * (m * m) as f64;
            let e = (-a * dt).exp();
            let phi = -(-a * dt).exp_m1() / a;
            let c = coeffs[grid.slot(m)] * e + x.coeff(m) * (2.0 * phi);
            coeffs[grid.slot(m)] = c;
            coeffs[grid.slot(-m)] = c.conj();
        }
    }

    /// Advances the state by `dt > 0`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::contract(format!("time step {dt} must be positive")));
        }
        self.advance_q(dt);
        self.advance_x(dt);
        self.t += dt;
        Ok(())
    }
}
