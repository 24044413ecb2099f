use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Divergence threshold on the `L^2` norm of an evolved field.
pub const BLOWUP_L2: f64 = 1e6;

/// First-order exponential time differencing for `u_t = nu u_xx + N(u)`:
/// `u_k <- e^{-nu k^2 dt} u_k + dt phi_1(-nu k^2 dt) N_k`.
#[derive(Debug, Clone)]
pub struct Propagator {
    nu: f64,
    dt: f64,
    // indexed by FFT slot
    decay: Vec<f64>,
    weight: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: &Arc<Grid>, nu: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::contract(format!("time step {dt} must be positive")));
        }
        let mut decay = Vec::with_capacity(grid.n());
        let mut weight = Vec::with_capacity(grid.n());
        for i in 0..grid.n() {
            let k = grid.wavenumber(i);
            let a = nu * (k * k) as f64;
            decay.push((-a * dt).exp());
            weight.push(if a == 0.0 { dt } else { -(-a * dt).exp_m1() / a });
        }
        Ok(Self {
            nu,
            dt,
            decay,
            weight,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// One step given the nonlinearity evaluated at the start of the step.
    pub fn advance(&self, u: &SpectralField, nonlinear: &SpectralField) -> SpectralField {
        let mut out = u.clone();
        for (((c, nl), d), w) in out
            .coeffs_mut()
            .iter_mut()
            .zip(nonlinear.coeffs())
            .zip(&self.decay)
            .zip(&self.weight)
        {
            *c = *c * d + nl * w;
        }
        out
    }
}

/// `-1/2 d_x` of the dealiased quadratic form `a * b + c * d`, evaluated on
/// the padded grid with a single forward transform.
fn half_flux(a: &[Complex64], b: &[Complex64], extra: Option<(&[Complex64], &[Complex64])>, grid: &Arc<Grid>) -> SpectralField {
    let mut prod: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    if let Some((c, d)) = extra {
        for ((p, x), y) in prod.iter_mut().zip(c).zip(d) {
            *p += x * y;
        }
    }
    flux_of(prod, grid)
}

/// `-1/2 d_x` of padded-grid values.
fn flux_of(values: Vec<Complex64>, grid: &Arc<Grid>) -> SpectralField {
    let mut coeffs = grid.analyze_padded(values);
    // -1/2 i k c; the Nyquist slot is already zero
    for (i, c) in coeffs.iter_mut().enumerate() {
        let k = 0.5 * grid.wavenumber(i) as f64;
        *c = Complex64::new(k * c.im, -k * c.re);
    }
    SpectralField::from_raw(grid, coeffs)
}

/// Nonlinearity of the equation for `Y`:
/// `-1/2 d_x (2 Y X + X^2) + zeta` with the mean of `zeta` removed.
pub fn y_nonlinearity(y: &SpectralField, x: &SpectralField, zeta: Option<&SpectralField>) -> SpectralField {
    let grid = y.grid();
    let yv = y.padded_values();
    let xv = x.padded_values();
    // 2 Y X + X^2 = (2 Y + X) X
    let lhs: Vec<Complex64> = yv.iter().zip(&xv).map(|(a, b)| a * 2.0 + b).collect();
    let mut n = half_flux(&lhs, &xv, None, grid);
    if let Some(z) = zeta {
        n += &z.clone().without_mean();
    }
    n
}

/// Nonlinearity of the equation for `w`:
/// `-1/2 d_x (w^2 + 2 w Y + 2 w X + Y^2)`.
pub fn w_nonlinearity(w: &SpectralField, x: &SpectralField, y: &SpectralField) -> SpectralField {
    let grid = w.grid();
    let mut wv = w.padded_values();
    if x.is_zero() && y.is_zero() {
        for v in wv.iter_mut() {
            *v = *v * *v;
        }
        return flux_of(wv, grid);
    }
    let xv = x.padded_values();
    let yv = y.padded_values();
    // w (w + 2 Y + 2 X) + Y Y
    let s: Vec<Complex64> = wv
        .iter()
        .zip(&xv)
        .zip(&yv)
        .map(|((a, b), c)| a + (b + c) * 2.0)
        .collect();
    half_flux(&wv, &s, Some((&yv, &yv)), grid)
}

/// Returns `||f||_{L^2}` or a divergence error.
pub(crate) fn check_finite(f: &SpectralField, t: f64, what: &'static str) -> Result<f64> {
    let l2 = f.l2_norm();
    if !l2.is_finite() || l2 > BLOWUP_L2 {
        return Err(Error::Divergence { t, what, value: l2 });
    }
    Ok(l2)
}

/// One step of `Y_t = nu Y_xx - 1/2 d_x (2 Y X + X^2) + zeta`. `t` is the
/// time at the end of the step, reported on divergence.
pub fn step_y(
    prop: &Propagator,
    y: &SpectralField,
    x: &SpectralField,
    zeta: Option<&SpectralField>,
    t: f64,
) -> Result<SpectralField> {
    let out = prop.advance(y, &y_nonlinearity(y, x, zeta));
    check_finite(&out, t, "||Y||_L2")?;
    Ok(out)
}

/// One step of `w_t = nu w_xx - 1/2 d_x (w^2 + 2 w Y + 2 w X + Y^2)`.
pub fn step_w(
    prop: &Propagator,
    w: &SpectralField,
    x: &SpectralField,
    y: &SpectralField,
    t: f64,
) -> Result<SpectralField> {
    step_w_with_norm(prop, w, x, y, t).map(|(out, _)| out)
}

/// [`step_w`] that also returns `||w||_{L^2}` of the result.
pub(crate) fn step_w_with_norm(
    prop: &Propagator,
    w: &SpectralField,
    x: &SpectralField,
    y: &SpectralField,
    t: f64,
) -> Result<(SpectralField, f64)> {
    let out = prop.advance(w, &w_nonlinearity(w, x, y));
    let l2 = check_finite(&out, t, "||w||_L2")?;
    Ok((out, l2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(g: &Arc<Grid>, k: i64, c: f64) -> SpectralField {
        SpectralField::from_modes(g, &[(k, Complex64::new(c, 0.0))]).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        let g = Grid::new(32).unwrap();
        let p = Propagator::new(&g, 1.0, 1e-3).unwrap();
        let z = SpectralField::zeros(&g);
        assert!(step_y(&p, &z, &z, None, 1e-3).unwrap().is_zero());
        assert!(step_w(&p, &z, &z, &z, 1e-3).unwrap().is_zero());
    }

    #[test]
    fn linear_case_is_the_heat_semigroup() {
        let g = Grid::new(64).unwrap();
        let (nu, dt) = (0.7, 3e-3);
        let p = Propagator::new(&g, nu, dt).unwrap();
        let z = SpectralField::zeros(&g);
        let y = mode(&g, 1, 1.0) + &mode(&g, 5, -0.3);
        let got = step_y(&p, &y, &z, None, dt).unwrap();
        let exact = y.heat(nu, dt);
        for (a, b) in got.coeffs().iter().zip(exact.coeffs()) {
            assert!((a - b).norm() <= 1e-15);
        }
        assert!((got.coeff(1).re - (-nu * dt).exp()).abs() <= 1e-15);
    }

    #[test]
    fn burgers_step_does_not_increase_energy() {
        let g = Grid::new(64).unwrap();
        let p = Propagator::new(&g, 0.1, 1e-3).unwrap();
        let z = SpectralField::zeros(&g);
        let mut w = mode(&g, 1, 0.5) + &mode(&g, 2, 0.2);
        for i in 0..200 {
            let next = step_w(&p, &w, &z, &z, (i + 1) as f64 * 1e-3).unwrap();
            assert!(next.l2_norm() <= w.l2_norm());
            assert!(next.is_mean_zero());
            w = next;
        }
    }

    #[test]
    fn divergence_is_reported() {
        let g = Grid::new(16).unwrap();
        let big = mode(&g, 1, 1e7);
        assert!(matches!(
            check_finite(&big, 0.25, "||w||_L2"),
            Err(Error::Divergence { t, .. }) if t == 0.25
        ));
    }
}
