use crate::error::{Error, Result};
use crate::noise::EnhancedNoise;
use crate::paracalc::{paraproduct_cached, product, resonant_cached, BlockCache};
use crate::spectral::SpectralField;

/// Symbol of `sigma(D) = -(1 - nu Delta)^{-1}`.
pub fn sigma_symbol(k: i64, nu: f64) -> f64 {
    -1.0 / (1.0 + nu * (k * k) as f64)
}

/// A potential `eta` together with its second-order enhancement
/// `theta2 = -eta ∘ sigma(D) eta - c`.
#[derive(Debug, Clone)]
pub struct RoughPair {
    pub eta: SpectralField,
    pub theta2: SpectralField,
    /// Regularity label of `eta`.
    pub alpha: f64,
    pub c: f64,
    /// Viscosity inside `sigma(D)`.
    pub nu: f64,
    sigma_eta: SpectralField,
    eta_blocks: BlockCache,
    sigma_blocks: BlockCache,
}

/// Lifts a smooth potential with `sigma(D) = -(1 - Delta)^{-1}`.
pub fn lift(eta: &SpectralField, c: f64) -> RoughPair {
    lift_with(eta, c, 1.0)
}

/// [`lift`] with `sigma(D) = -(1 - nu Delta)^{-1}`.
pub fn lift_with(eta: &SpectralField, c: f64, nu: f64) -> RoughPair {
    let sigma_eta = eta.map_real_symbol(|k| sigma_symbol(k, nu));
    let eta_blocks = BlockCache::new(eta);
    let sigma_blocks = BlockCache::new(&sigma_eta);
    let res = resonant_cached(&eta_blocks, &sigma_blocks);
    RoughPair {
        eta: eta.clone(),
        theta2: (-&res).add_constant(-c),
        alpha: -1.0,
        c,
        nu,
        sigma_eta,
        eta_blocks,
        sigma_blocks,
    }
}

impl RoughPair {
    /// The pair carried by an enhanced noise `(Theta1, Theta2)` whose
    /// resonant term used `(1 - nu d_x^2)^{-1}`. Under `sigma(D) = -(1 - nu
    /// Delta)^{-1}` the two second components coincide and `c = r`.
    pub fn from_enhanced(noise: &EnhancedNoise, nu: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::contract(format!("viscosity {nu} must be positive")));
        }
        let mut pair = lift_with(&noise.theta1, noise.r, nu);
        pair.theta2 = noise.theta2.clone();
        pair.alpha = -1.0 - noise.kappa;
        Ok(pair)
    }

    /// `sigma(D) eta`.
    pub fn sigma_eta(&self) -> &SpectralField {
        &self.sigma_eta
    }

    /// `f^sharp = f - f ≺ sigma(D) eta`.
    pub fn sharp(&self, f: &SpectralField) -> Result<SpectralField> {
        f.ensure_same_grid(&self.eta)?;
        Ok(f - &paraproduct_cached(&BlockCache::new(f), &self.sigma_blocks))
    }

    /// Paracontrolled product
    /// `f eta = f ≺ eta + f ≻ eta + f^sharp ∘ eta + R(f, sigma(D) eta, eta) - f theta2`.
    ///
    /// For a smooth lift with `c = 0` this is the pointwise product.
    pub fn product(&self, f: &SpectralField) -> Result<SpectralField> {
        f.ensure_same_grid(&self.eta)?;
        let fc = BlockCache::new(f);
        let lo_hi = paraproduct_cached(&fc, &self.eta_blocks);
        let hi_lo = paraproduct_cached(&self.eta_blocks, &fc);
        let f_se = paraproduct_cached(&fc, &self.sigma_blocks);
        let sharp = f - &f_se;
        let sharp_res = resonant_cached(&BlockCache::new(&sharp), &self.eta_blocks);
        // R(f, s, eta) = (f ≺ s) ∘ eta - f (s ∘ eta)
        let r = &resonant_cached(&BlockCache::new(&f_se), &self.eta_blocks)
            - &product(f, &resonant_cached(&self.sigma_blocks, &self.eta_blocks))?;
        let mut out = &lo_hi + &hi_lo;
        out += &sharp_res;
        out += &r;
        out -= &product(f, &self.theta2)?;
        Ok(out)
    }
}

/// A function paracontrolled by `sigma(D) eta`.
#[derive(Debug, Clone)]
pub struct ParacontrolledFn {
    pub f: SpectralField,
    pub f_sharp: SpectralField,
    pub gamma: f64,
}

impl ParacontrolledFn {
    pub fn new(f: SpectralField, pair: &RoughPair, gamma: f64) -> Result<Self> {
        let f_sharp = pair.sharp(&f)?;
        Ok(Self { f, f_sharp, gamma })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use num_complex::Complex64;

    #[test]
    fn zero_potential_lifts_to_constant() {
        let g = Grid::new(32).unwrap();
        let pair = lift(&SpectralField::zeros(&g), 0.75);
        assert!(pair.eta.is_zero());
        assert_eq!(pair.theta2, SpectralField::constant(&g, -0.75));
    }

    #[test]
    fn theta2_is_quadratic() {
        let g = Grid::new(64).unwrap();
        let eta = SpectralField::from_modes(
            &g,
            &[(2, Complex64::new(0.4, -0.1)), (7, Complex64::new(0.0, 0.3))],
        )
        .unwrap();
        let one = lift(&eta, 0.0).theta2;
        let two = lift(&eta.scaled(2.0), 0.0).theta2;
        assert!((&two - &one.scaled(4.0)).l2_norm() <= 1e-14 * two.l2_norm());
    }
}
