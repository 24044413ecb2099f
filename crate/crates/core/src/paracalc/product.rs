use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::{Grid, SpectralField};

/// Padded-grid values of every Littlewood–Paley block of a field.
///
/// Building the cache costs one inverse transform per block; it can then be
/// reused across several paraproducts with the same argument.
#[derive(Debug, Clone)]
pub struct BlockCache {
    grid: Arc<Grid>,
    // blocks[j + 1]: Delta_j f on the 3n/2 grid
    blocks: Vec<Vec<Complex64>>,
    nonzero: Vec<bool>,
}

impl BlockCache {
    pub fn new(f: &SpectralField) -> Self {
        let grid = Arc::clone(f.grid());
        let lp = grid.lp();
        let mut blocks = Vec::with_capacity(lp.blocks().count());
        let mut nonzero = Vec::with_capacity(blocks.capacity());
        for j in lp.blocks() {
            let row = lp.row(j);
            let block = f.map_real_symbol(|k| row[k as usize]);
            nonzero.push(!block.is_zero());
            blocks.push(if block.is_zero() {
                Vec::new()
            } else {
                block.padded_values()
            });
        }
        Self { grid, blocks, nonzero }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn j_max(&self) -> i32 {
        self.blocks.len() as i32 - 2
    }

    fn block(&self, j: i32) -> Option<&[Complex64]> {
        if j < -1 || j > self.j_max() || !self.nonzero[(j + 1) as usize] {
            None
        } else {
            Some(&self.blocks[(j + 1) as usize])
        }
    }

    /// Padded values of `sum_{j in range} Delta_j f`, or `None` if all vanish.
    fn sum_blocks(&self, lo: i32, hi: i32) -> Option<Vec<Complex64>> {
        let mut acc: Option<Vec<Complex64>> = None;
        for j in lo.max(-1)..=hi.min(self.j_max()) {
            if let Some(b) = self.block(j) {
                match acc.as_mut() {
                    None => acc = Some(b.to_vec()),
                    Some(a) => a.iter_mut().zip(b).for_each(|(x, y)| *x += y),
                }
            }
        }
        acc
    }
}

struct ModeAccumulator<'a> {
    grid: &'a Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl<'a> ModeAccumulator<'a> {
    fn new(grid: &'a Arc<Grid>) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    /// Adds the truncated transform of the pointwise product `a * b`.
    fn add_product(&mut self, a: &[Complex64], b: &[Complex64]) {
        let prod: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        let modes = self.grid.analyze_padded(prod);
        self.coeffs.iter_mut().zip(&modes).for_each(|(x, y)| *x += y);
    }

    fn finish(self) -> SpectralField {
        SpectralField::from_raw(self.grid, self.coeffs)
    }
}

/// Dealiased pointwise product `f g`.
pub fn product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.ensure_same_grid(g)?;
    let grid = f.grid();
    let mut acc = ModeAccumulator::new(grid);
    acc.add_product(&f.padded_values(), &g.padded_values());
    Ok(acc.finish())
}

/// Paraproduct `f ≺ g = sum_i S_{i-1} f Delta_i g` from cached blocks.
pub fn paraproduct_cached(f: &BlockCache, g: &BlockCache) -> SpectralField {
    let grid = f.grid();
    let mut acc = ModeAccumulator::new(grid);
    for i in -1..=g.j_max() {
        let Some(gi) = g.block(i) else { continue };
        // S_{i-1} f = sum_{j <= i-2} Delta_j f
        if let Some(low) = f.sum_blocks(-1, i - 2) {
            acc.add_product(&low, gi);
        }
    }
    acc.finish()
}

/// Resonant product `f ∘ g = sum_i sum_{|j|<=1} Delta_i f Delta_{i+j} g`.
pub fn resonant_cached(f: &BlockCache, g: &BlockCache) -> SpectralField {
    let grid = f.grid();
    let mut acc = ModeAccumulator::new(grid);
    for i in -1..=f.j_max() {
        let Some(fi) = f.block(i) else { continue };
        if let Some(near) = g.sum_blocks(i - 1, i + 1) {
            acc.add_product(fi, &near);
        }
    }
    acc.finish()
}

/// `f ≺ g`, the low-high paraproduct.
pub fn paraproduct(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.ensure_same_grid(g)?;
    Ok(paraproduct_cached(&BlockCache::new(f), &BlockCache::new(g)))
}

/// `f ≻ g = g ≺ f`.
pub fn paraproduct_hi_lo(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    paraproduct(g, f)
}

/// `f ∘ g`, the resonant product.
pub fn resonant(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.ensure_same_grid(g)?;
    Ok(resonant_cached(&BlockCache::new(f), &BlockCache::new(g)))
}

/// The three pieces of Bony's decomposition `f g = f≺g + f≻g + f∘g`.
#[derive(Debug, Clone)]
pub struct BonyParts {
    pub lo_hi: SpectralField,
    pub hi_lo: SpectralField,
    pub resonant: SpectralField,
}

impl BonyParts {
    pub fn sum(&self) -> SpectralField {
        &(&self.lo_hi + &self.hi_lo) + &self.resonant
    }
}

pub fn bony_parts(f: &SpectralField, g: &SpectralField) -> Result<BonyParts> {
    f.ensure_same_grid(g)?;
    let fc = BlockCache::new(f);
    let gc = BlockCache::new(g);
    Ok(BonyParts {
        lo_hi: paraproduct_cached(&fc, &gc),
        hi_lo: paraproduct_cached(&gc, &fc),
        resonant: resonant_cached(&fc, &gc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lp_block, Grid, LpPartition};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &Arc<Grid>, seed: u64, decay: f64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpectralField::zeros(grid);
        for k in 1..=grid.k_max() {
            let a = (k as f64).powf(-decay);
            f.set_mode(k, Complex64::new(rng.gen_range(-a..a), rng.gen_range(-a..a)))
                .unwrap();
        }
        f
    }

    /// Truncated convolution in mode space, no transforms involved.
    fn convolve(a: &SpectralField, b: &SpectralField) -> Vec<Complex64> {
        let kmax = a.grid().k_max();
        let mut out = vec![Complex64::new(0.0, 0.0); a.n()];
        for k in -kmax..=kmax {
            let mut s = Complex64::new(0.0, 0.0);
            for p in -kmax..=kmax {
                let q = k - p;
                if q.abs() <= kmax {
                    s += a.coeff(p) * b.coeff(q);
                }
            }
            out[a.grid().slot(k)] = s;
        }
        out
    }

    fn blocks(f: &SpectralField) -> Vec<SpectralField> {
        let jm = f.grid().lp().j_max();
        (-1..=jm).map(|j| lp_block(f, j).unwrap()).collect()
    }

    fn brute_paraproduct(f: &SpectralField, g: &SpectralField) -> SpectralField {
        let (bf, bg) = (blocks(f), blocks(g));
        let mut out = vec![Complex64::new(0.0, 0.0); f.n()];
        for (ii, gi) in bg.iter().enumerate() {
            for (jj, fj) in bf.iter().enumerate() {
                if jj + 2 <= ii {
                    for (o, c) in out.iter_mut().zip(convolve(fj, gi)) {
                        *o += c;
                    }
                }
            }
        }
        SpectralField::from_raw(f.grid(), out)
    }

    fn brute_resonant(f: &SpectralField, g: &SpectralField) -> SpectralField {
        let (bf, bg) = (blocks(f), blocks(g));
        let mut out = vec![Complex64::new(0.0, 0.0); f.n()];
        for (ii, fi) in bf.iter().enumerate() {
            for (jj, gj) in bg.iter().enumerate() {
                if (ii as i64 - jj as i64).abs() <= 1 {
                    for (o, c) in out.iter_mut().zip(convolve(fi, gj)) {
                        *o += c;
                    }
                }
            }
        }
        SpectralField::from_raw(f.grid(), out)
    }

    fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
        (a - b).l2_norm() / b.l2_norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn dealiased_product_is_exact_convolution() {
        let g = Grid::new(64).unwrap();
        let (a, b) = (random_field(&g, 1, 0.5), random_field(&g, 2, 0.5));
        let oracle = SpectralField::from_raw(&g, convolve(&a, &b));
        assert!(rel(&product(&a, &b).unwrap(), &oracle) <= 1e-13);
    }

    #[test]
    fn paraproduct_matches_block_double_loop() {
        let g = Grid::new(64).unwrap();
        let (a, b) = (random_field(&g, 3, 1.0), random_field(&g, 4, 1.0));
        let got = paraproduct(&a, &b).unwrap();
        assert!(rel(&got, &brute_paraproduct(&a, &b)) <= 1e-12);
    }

    #[test]
    fn resonant_single_mode_pair() {
        let g = Grid::new(64).unwrap();
        let f = SpectralField::from_modes(&g, &[(4, Complex64::new(1.0, 0.0))]).unwrap();
        let h = SpectralField::from_modes(&g, &[(5, Complex64::new(1.0, 0.0))]).unwrap();
        let got = resonant(&f, &h).unwrap();
        let oracle = brute_resonant(&f, &h);
        assert!(!oracle.is_zero());
        assert!(rel(&got, &oracle) <= 1e-12);
        // only modes 5 - 4 = 1 and 5 + 4 = 9 are produced; the weight is the
        // sum over adjacent block pairs of the profile products
        let mut w = 0.0;
        for i in -1i32..=5 {
            for j in -1i32..=5 {
                if (i - j).abs() <= 1 {
                    w += LpPartition::profile(i, 4.0) * LpPartition::profile(j, 5.0);
                }
            }
        }
        assert!((got.coeff(9).re - w).abs() < 1e-14);
        assert!((got.coeff(1).re - w).abs() < 1e-14);
    }

    #[test]
    fn paraproduct_against_constant_vanishes() {
        let g = Grid::new(32).unwrap();
        let f = random_field(&g, 5, 1.0);
        let c = SpectralField::constant(&g, 3.0);
        assert!(paraproduct(&f, &c).unwrap().is_zero());
        assert!(paraproduct(&SpectralField::zeros(&g), &f).unwrap().is_zero());
    }

    #[test]
    fn bony_identity() {
        let g = Grid::new(256).unwrap();
        for seed in 0..10 {
            let (a, b) = (random_field(&g, seed, 0.3), random_field(&g, 100 + seed, 0.8));
            let parts = bony_parts(&a, &b).unwrap();
            let fg = product(&a, &b).unwrap();
            assert!(rel(&parts.sum(), &fg) <= 1e-12);
        }
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = SpectralField::zeros(&Grid::new(16).unwrap());
        let b = SpectralField::zeros(&Grid::new(32).unwrap());
        assert!(paraproduct(&a, &b).is_err());
        assert!(resonant(&a, &b).is_err());
        assert!(product(&a, &b).is_err());
    }
}
