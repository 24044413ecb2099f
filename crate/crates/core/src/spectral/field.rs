use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fourier coefficients of a real periodic field on the unit torus.
///
/// `f(x) = sum_k c_k e^{2 pi i k x}`; coefficients are stored in FFT order.
/// The representation is always Hermitian (`c_{-k} = conj(c_k)`) with a zero
/// Nyquist mode. Derivative symbols carry no `2 pi`: `d/dx` acts on mode
/// `k` as `i k`.
#[derive(Clone)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralField")
            .field("n", &self.grid.n())
            .field("l2", &self.l2_norm())
            .finish()
    }
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.grid.n() == other.grid.n() && self.coeffs == other.coeffs
    }
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            coeffs: vec![ZERO; grid.n()],
        }
    }

    pub fn constant(grid: &Arc<Grid>, c: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// From FFT-ordered coefficients; the result is symmetrized.
    pub fn from_coeffs(grid: &Arc<Grid>, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::contract(format!(
                "expected {} coefficients, got {}",
                grid.n(),
                coeffs.len()
            )));
        }
        grid.symmetrize(&mut coeffs);
        Ok(Self {
            grid: Arc::clone(grid),
            coeffs,
        })
    }

    /// From point values at `x_j = j/n`. The Nyquist component is dropped.
    pub fn from_values(grid: &Arc<Grid>, values: &[f64]) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::contract(format!(
                "expected {} samples, got {}",
                grid.n(),
                values.len()
            )));
        }
        let buf = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Ok(Self {
            grid: Arc::clone(grid),
            coeffs: grid.analyze(buf),
        })
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Self::from_values(grid, &values).expect("length matches grid")
    }

    /// Sets each listed mode `k` to `c` and `-k` to `conj(c)`.
    pub fn from_modes(grid: &Arc<Grid>, modes: &[(i64, Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(grid);
        for &(k, c) in modes {
            f.set_mode(k, c)?;
        }
        Ok(f)
    }

    pub(crate) fn from_raw(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.n());
        Self {
            grid: Arc::clone(grid),
            coeffs,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of mode `k`; zero outside the resolved band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.abs() > self.grid.k_max() {
            ZERO
        } else {
            self.coeffs[self.grid.slot(k)]
        }
    }

    pub fn set_mode(&mut self, k: i64, c: Complex64) -> Result<()> {
        let kmax = self.grid.k_max();
        if k.abs() > kmax {
            return Err(Error::contract(format!(
                "mode {k} outside resolved band |k| <= {kmax}"
            )));
        }
        if k == 0 {
            if c.im != 0.0 {
                return Err(Error::contract("zero mode of a real field must be real"));
            }
            self.coeffs[0] = c;
        } else {
            let slot = self.grid.slot(k);
            let mirror = self.grid.slot(-k);
            self.coeffs[slot] = c;
            self.coeffs[mirror] = c.conj();
        }
        Ok(())
    }

    /// Iterates over `(k, c_k)` for every resolved mode, `k = 0` first.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let kmax = self.grid.k_max();
        (0..=kmax)
            .chain(-kmax..0)
            .map(move |k| (k, self.coeffs[self.grid.slot(k)]))
    }

    pub fn values(&self) -> Vec<f64> {
        self.grid
            .synthesize(&self.coeffs)
            .into_iter()
            .map(|z| z.re)
            .collect()
    }

    pub(crate) fn complex_values(&self) -> Vec<Complex64> {
        self.grid.synthesize(&self.coeffs)
    }

    pub(crate) fn padded_values(&self) -> Vec<Complex64> {
        self.grid.synthesize_padded(&self.coeffs)
    }

    /// Spatial average (the zero mode).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn is_mean_zero(&self) -> bool {
        self.coeffs[0] == ZERO
    }

    /// Projection onto mean-zero fields.
    pub fn without_mean(mut self) -> Self {
        self.coeffs[0] = ZERO;
        self
    }

    pub fn add_constant(mut self, c: f64) -> Self {
        self.coeffs[0].re += c;
        self
    }

    /// L^2(T) norm via Plancherel.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<f, g>_{L^2}`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    /// Largest |c_{-k} - conj(c_k)| over the band, scaled by max |c_k|.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let kmax = self.grid.k_max();
        let mut worst = self.coeffs[0].im.abs();
        for k in 1..=kmax {
            worst = worst.max((self.coeff(-k) - self.coeff(k).conj()).norm());
        }
        worst / scale
    }

    /// Largest imaginary part of the synthesized values relative to the
    /// largest magnitude.
    pub fn imaginary_ratio(&self) -> f64 {
        let v = self.complex_values();
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            v.iter().map(|z| z.im.abs()).fold(0.0, f64::max) / scale
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Multiply each mode by a real, even symbol. Always realness-preserving.
    pub fn map_real_symbol(&self, symbol: impl Fn(i64) -> f64) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = self.grid.wavenumber(i);
            let s = symbol(k.abs());
            *c = if *c == ZERO { ZERO } else { *c * s };
        }
        out
    }

    /// `d/dx`, symbol `i k`.
    pub fn dx(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = self.grid.wavenumber(i) as f64;
            *c = Complex64::new(-k * c.im, k * c.re);
        }
        out.coeffs[self.grid.n() / 2] = ZERO;
        out
    }

    /// `d^2/dx^2`, symbol `-k^2`.
    pub fn dxx(&self) -> Self {
        self.map_real_symbol(|k| -((k * k) as f64))
    }

    /// `Lambda^gamma = (-d^2/dx^2)^{gamma/2}`, symbol `|k|^gamma` (zero at k = 0).
    pub fn fractional(&self, gamma: f64) -> Self {
        self.map_real_symbol(|k| if k == 0 { 0.0 } else { (k as f64).powf(gamma) })
    }

    /// Heat semigroup `P_t = exp(nu t d^2/dx^2)`.
    pub fn heat(&self, nu: f64, t: f64) -> Self {
        self.map_real_symbol(|k| (-nu * (k * k) as f64 * t).exp())
    }

    /// `(1 - nu d^2/dx^2)^{-1}`.
    pub fn helmholtz_inverse(&self, nu: f64) -> Self {
        self.map_real_symbol(|k| 1.0 / (1.0 + nu * (k * k) as f64))
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= a);
        out
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.n(), other.n());
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * a;
        }
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        self.grid.same(&other.grid)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        self.scaled(a)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign:ident, $assign_method:ident, $op:tt) => {
        impl $trait<&SpectralField> for &SpectralField {
            type Output = SpectralField;
            fn $method(self, rhs: &SpectralField) -> SpectralField {
                assert_eq!(self.n(), rhs.n(), "grid mismatch");
                let coeffs = self
                    .coeffs
                    .iter()
                    .zip(&rhs.coeffs)
                    .map(|(a, b)| a $op b)
                    .collect();
                SpectralField::from_raw(&self.grid, coeffs)
            }
        }

        impl $trait<&SpectralField> for SpectralField {
            type Output = SpectralField;
            fn $method(mut self, rhs: &SpectralField) -> SpectralField {
                self.$assign_method(rhs);
                self
            }
        }

        impl $assign<&SpectralField> for SpectralField {
            fn $assign_method(&mut self, rhs: &SpectralField) {
                assert_eq!(self.n(), rhs.n(), "grid mismatch");
                for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                    *a = *a $op b;
                }
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &Arc<Grid>, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpectralField::zeros(grid);
        for k in 1..=grid.k_max() {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.set_mode(k, c).unwrap();
        }
        f
    }

    #[test]
    fn roundtrip_through_values() {
        for n in [8usize, 64, 1024, 4096] {
            let g = Grid::new(n).unwrap();
            let f = random_field(&g, n as u64);
            let back = SpectralField::from_values(&g, &f.values()).unwrap();
            let err = (&back - &f).l2_norm() / f.l2_norm();
            assert!(err <= 1e-12, "n={n} err={err}");
        }
    }

    #[test]
    fn cosine_has_two_modes() {
        let g = Grid::new(32).unwrap();
        let f = SpectralField::from_fn(&g, |x| (2.0 * std::f64::consts::PI * 3.0 * x).cos());
        assert!((f.coeff(3).re - 0.5).abs() < 1e-14);
        assert!((f.coeff(-3).re - 0.5).abs() < 1e-14);
        assert!(f.coeff(2).norm() < 1e-14);
        assert!((f.l2_norm() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn derivative_of_single_mode() {
        let g = Grid::new(16).unwrap();
        let f = SpectralField::from_modes(&g, &[(1, Complex64::new(1.0, 0.0))]).unwrap();
        let d = f.dx();
        assert_eq!(d.coeff(1), Complex64::new(0.0, 1.0));
        assert_eq!(d.coeff(-1), Complex64::new(0.0, -1.0));
        assert!(d.is_mean_zero());
    }

    #[test]
    fn heat_at_zero_time_is_identity() {
        let g = Grid::new(64).unwrap();
        let f = random_field(&g, 3);
        assert_eq!(f.heat(0.7, 0.0), f);
    }

    #[test]
    fn helmholtz_inverse_scales_mode_two() {
        let g = Grid::new(16).unwrap();
        let f = SpectralField::from_modes(&g, &[(2, Complex64::new(1.0, 0.0))]).unwrap();
        let h = f.helmholtz_inverse(1.0);
        assert!((h.coeff(2).re - 0.2).abs() < 1e-16);
        assert!((h.coeff(-2).re - 0.2).abs() < 1e-16);
    }

    #[test]
    fn zero_mode_must_be_real() {
        let g = Grid::new(16).unwrap();
        let mut f = SpectralField::zeros(&g);
        assert!(f.set_mode(0, Complex64::new(0.0, 1.0)).is_err());
        assert!(f.set_mode(8, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn values_are_real_for_hermitian_coeffs() {
        let g = Grid::new(128).unwrap();
        let f = random_field(&g, 11);
        assert!(f.imaginary_ratio() < 1e-14);
        assert_eq!(f.hermitian_defect(), 0.0);
    }
}
