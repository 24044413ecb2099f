use crate::error::Result;
use crate::paracalc::paraproduct;
use crate::spectral::{project_high, CutoffProfile, SpectralField};

/// `(w_high, w_low)` with `Q^H = H_lambda Q`, `w_high = -1/2 d_x (w ≺ Q^H)`
/// and `w_low = w - w_high`.
pub fn split_high_low(
    w: &SpectralField,
    q: &SpectralField,
    lambda: f64,
    profile: &CutoffProfile,
) -> Result<(SpectralField, SpectralField)> {
    let qh = project_high(q, lambda, profile)?;
    let high = paraproduct(w, &qh)?.dx().scaled(-0.5);
    let low = w - &high;
    Ok((high, low))
}

/// `w_sharp = w + 1/2 d_x (w ≺ Q)`.
pub fn w_sharp(w: &SpectralField, q: &SpectralField) -> Result<SpectralField> {
    let mut out = w.clone();
    out.axpy(0.5, &paraproduct(w, q)?.dx());
    Ok(out)
}

/// Paracontrolled and high/low views of `w` at one time.
#[derive(Debug, Clone)]
pub struct DecompositionState {
    pub t: f64,
    pub lambda: f64,
    pub w: SpectralField,
    pub w_sharp: SpectralField,
    pub w_high: SpectralField,
    pub w_low: SpectralField,
    pub q: SpectralField,
    pub q_high: SpectralField,
}

impl DecompositionState {
    pub fn new(
        t: f64,
        w: &SpectralField,
        q: &SpectralField,
        lambda: f64,
        profile: &CutoffProfile,
    ) -> Result<Self> {
        let q_high = project_high(q, lambda, profile)?;
        let (w_high, w_low) = split_high_low(w, q, lambda, profile)?;
        Ok(Self {
            t,
            lambda,
            w: w.clone(),
            w_sharp: w_sharp(w, q)?,
            w_high,
            w_low,
            q: q.clone(),
            q_high,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use num_complex::Complex64;

    #[test]
    fn zero_q_leaves_w_low() {
        let g = Grid::new(64).unwrap();
        let w = SpectralField::from_modes(&g, &[(2, Complex64::new(0.3, 0.1))]).unwrap();
        let z = SpectralField::zeros(&g);
        let (high, low) = split_high_low(&w, &z, 4.0, &CutoffProfile).unwrap();
        assert!(high.is_zero());
        assert_eq!(low, w);
        assert_eq!(w_sharp(&w, &z).unwrap(), w);
    }
}
