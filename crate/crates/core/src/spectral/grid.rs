use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::profile::LpPartition;
use crate::error::{Error, Result};

/// Uniform grid on the unit torus with `n` points and modes
/// `k in {-n/2+1, ..., n/2}`.
///
/// The Nyquist mode `k = n/2` is kept identically zero, so the resolved band
/// is `|k| <= n/2 - 1`. Pointwise products are evaluated on a zero-padded
/// grid of `3n/2` points, which is exact for quadratic terms on that band.
pub struct Grid {
    n: usize,
    lp: LpPartition,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    pad_fwd: Arc<dyn Fft<f64>>,
    pad_inv: Arc<dyn Fft<f64>>,
}

thread_local! {
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn run_fft(fft: &dyn Fft<f64>, buf: &mut [Complex64]) {
    SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        let need = fft.get_inplace_scratch_len();
        if s.len() < need {
            s.resize(need, Complex64::new(0.0, 0.0));
        }
        fft.process_with_scratch(buf, &mut s[..need]);
    });
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).finish()
    }
}

impl Grid {
    pub fn new(n: usize) -> Result<Arc<Self>> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        let m = Self::padded_len_for(n);
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            n,
            lp: LpPartition::new(n),
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            pad_fwd: planner.plan_fft_forward(m),
            pad_inv: planner.plan_fft_inverse(m),
        }))
    }

    fn padded_len_for(n: usize) -> usize {
        3 * n / 2
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn padded_len(&self) -> usize {
        Self::padded_len_for(self.n)
    }

    /// Largest resolved |k|.
    pub fn k_max(&self) -> i64 {
        self.n as i64 / 2 - 1
    }

    pub fn lp(&self) -> &LpPartition {
        &self.lp
    }

    /// Grid point `x_j = j / n`.
    pub fn x(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    /// Wavenumber of FFT-order slot `i`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT-order slot of wavenumber `k`, for `|k| <= n/2`.
    pub fn slot(&self, k: i64) -> usize {
        let n = self.n as i64;
        debug_assert!(k.abs() <= n / 2);
        k.rem_euclid(n) as usize
    }

    pub(crate) fn same(&self, other: &Grid) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// Physical values from normalized coefficients.
    pub(crate) fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = coeffs.to_vec();
        run_fft(&*self.inv, &mut buf);
        buf
    }

    /// Normalized, Hermitian-symmetrized coefficients from physical values.
    pub(crate) fn analyze(&self, mut values: Vec<Complex64>) -> Vec<Complex64> {
        run_fft(&*self.fwd, &mut values);
        let scale = 1.0 / self.n as f64;
        for c in values.iter_mut() {
            *c *= scale;
        }
        self.symmetrize(&mut values);
        values
    }

    /// Values on the `3n/2`-point grid of the band-limited field.
    pub(crate) fn synthesize_padded(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let m = self.padded_len();
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let half = self.n / 2;
        // k = 0..half-1 keep their slots; k = -half+1..-1 move to the top
        buf[..half].copy_from_slice(&coeffs[..half]);
        buf[m - half + 1..].copy_from_slice(&coeffs[half + 1..]);
        run_fft(&*self.pad_inv, &mut buf);
        buf
    }

    /// Coefficients of padded-grid values, truncated to the resolved band.
    pub(crate) fn analyze_padded(&self, mut values: Vec<Complex64>) -> Vec<Complex64> {
        let m = self.padded_len();
        run_fft(&*self.pad_fwd, &mut values);
        let scale = 1.0 / m as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        let half = self.n / 2;
        for (o, v) in out[..half].iter_mut().zip(&values[..half]) {
            *o = v * scale;
        }
        for (o, v) in out[half + 1..].iter_mut().zip(&values[m - half + 1..]) {
            *o = v * scale;
        }
        self.symmetrize(&mut out);
        out
    }

    /// Enforce `c[-k] = conj(c[k])`, a real zero mode, and a zero Nyquist mode.
    pub(crate) fn symmetrize(&self, coeffs: &mut [Complex64]) {
        let half = self.n / 2;
        coeffs[0].im = 0.0;
        coeffs[half] = Complex64::new(0.0, 0.0);
        for k in 1..half {
            let a = coeffs[k];
            let b = coeffs[self.n - k].conj();
            let avg = (a + b) * 0.5;
            coeffs[k] = avg;
            coeffs[self.n - k] = avg.conj();
        }
    }
}
