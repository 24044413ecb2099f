use crate::error::{Error, Result};
use crate::spectral::{holder_norm, SpectralField};

/// Running suprema behind the noise norms
/// `L = 1 + sup ||X||_{C^{-kappa}} + sup ||Y||_{C^{2 kappa}}` and
/// `N = L + sup_levels sup ||Theta2||_{C^{-2 kappa}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseNorms {
    pub kappa: f64,
    pub sup_x: f64,
    pub sup_y: f64,
    pub sup_theta2: f64,
    observed: bool,
}

impl NoiseNorms {
    pub fn new(kappa: f64) -> Self {
        Self {
            kappa,
            sup_x: 0.0,
            sup_y: 0.0,
            sup_theta2: 0.0,
            observed: false,
        }
    }

    /// Folds in one time sample of `X`, `Y` and the `Theta2` of every level.
    pub fn observe<'a>(
        &mut self,
        x: &SpectralField,
        y: &SpectralField,
        theta2: impl IntoIterator<Item = &'a SpectralField>,
    ) {
        let k = self.kappa;
        self.sup_x = self.sup_x.max(holder_norm(x, -k));
        self.sup_y = self.sup_y.max(holder_norm(y, 2.0 * k));
        for th in theta2 {
            self.sup_theta2 = self.sup_theta2.max(holder_norm(th, -2.0 * k));
        }
        self.observed = true;
    }

    pub fn l(&self) -> f64 {
        1.0 + self.sup_x + self.sup_y
    }

    pub fn n(&self) -> f64 {
        self.l() + self.sup_theta2
    }
}

/// `(L, N)` over sampled trajectories; `theta2[i]` lists the `Theta2` of
/// every cutoff level at the time of `x[i]`.
pub fn noise_norms(
    x: &[SpectralField],
    y: &[SpectralField],
    theta2: &[Vec<SpectralField>],
    kappa: f64,
) -> Result<(f64, f64)> {
    if x.is_empty() || x.len() != y.len() || x.len() != theta2.len() {
        return Err(Error::contract(
            "noise norms need non-empty trajectories of equal length",
        ));
    }
    let mut acc = NoiseNorms::new(kappa);
    for ((xi, yi), ti) in x.iter().zip(y).zip(theta2) {
        acc.observe(xi, yi, ti);
    }
    Ok((acc.l(), acc.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn zero_trajectories() {
        let g = Grid::new(32).unwrap();
        let z = SpectralField::zeros(&g);
        let c = SpectralField::constant(&g, -0.25);
        let (l, n) = noise_norms(std::slice::from_ref(&z), std::slice::from_ref(&z), &[vec![c.clone()]], 0.1).unwrap();
        assert_eq!(l, 1.0);
        // the constant sits in block -1 with weight 2^{2 kappa}
        assert!((n - 1.0 - 0.25 * f64::powf(2.0, 0.2)).abs() < 1e-14);
        assert!(noise_norms(&[], &[], &[], 0.1).is_err());
    }

    #[test]
    fn monotone_over_growing_windows() {
        let g = Grid::new(32).unwrap();
        let z = SpectralField::zeros(&g);
        let mut acc = NoiseNorms::new(0.1);
        let mut prev = 0.0;
        for a in [0.5, 0.1, 2.0, 1.0] {
            let x = SpectralField::constant(&g, a);
            acc.observe(&x, &z, std::iter::empty());
            assert!(acc.n() >= prev);
            prev = acc.n();
        }
    }
}
