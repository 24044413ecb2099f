//! Smooth cutoff profiles: the Littlewood–Paley partition of unity and the
//! high/low frequency split.

/// `exp(-1/s)` for `s > 0`, zero otherwise.
fn bump(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// C^∞ transition from 0 (at `s <= 0`) to 1 (at `s >= 1`).
///
/// Returns exactly `0.0` and `1.0` outside the open unit interval so that
/// support statements hold bitwise.
pub fn smoothstep(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = bump(s);
        a / (a + bump(1.0 - s))
    }
}

/// Inner radius of the low-pass profile: `chi = 1` on `|xi| <= CHI_INNER`.
pub const CHI_INNER: f64 = 0.75;
/// Outer radius of the low-pass profile: `chi = 0` on `|xi| >= CHI_OUTER`.
pub const CHI_OUTER: f64 = 4.0 / 3.0;

/// Radial low-pass profile of the dyadic partition.
pub fn chi(xi: f64) -> f64 {
    smoothstep((CHI_OUTER - xi.abs()) / (CHI_OUTER - CHI_INNER))
}

/// Dyadic annulus profile `rho(xi) = chi(xi / 2) - chi(xi)`, supported in
/// `[3/4, 8/3]`.
pub fn rho(xi: f64) -> f64 {
    chi(xi / 2.0) - chi(xi)
}

/// Smooth high-pass profile `h` and its complement `l = 1 - h`.
///
/// `h(r) = 0` for `r <= 1/2`, `h(r) = 1` for `r >= 1`, built from the same
/// smoothstep as the dyadic partition.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CutoffProfile;

impl CutoffProfile {
    pub fn high(&self, r: f64) -> f64 {
        smoothstep(2.0 * r - 1.0)
    }

    pub fn low(&self, r: f64) -> f64 {
        1.0 - self.high(r)
    }

    /// Weight of `L_lambda` on a mode of magnitude `k`.
    pub fn low_weight(&self, k: f64, lambda: f64) -> f64 {
        self.low(k.abs() / lambda)
    }

    pub fn high_weight(&self, k: f64, lambda: f64) -> f64 {
        self.high(k.abs() / lambda)
    }

    /// Parameters that determine the profile, for run manifests.
    pub fn describe(&self) -> String {
        format!(
            "smoothstep=exp(-1/s)/(exp(-1/s)+exp(-1/(1-s))); chi_inner={CHI_INNER}; chi_outer={CHI_OUTER}; cutoff=h(r)=psi(2r-1)"
        )
    }
}

/// Littlewood–Paley partition restricted to the modes `0..=N/2` of a grid.
///
/// Block `-1` carries `chi(k)`, block `j >= 0` carries `rho(2^-j k)`. The top
/// block index is `log2(N/2)`; with it the blocks sum to one on every
/// resolved mode.
#[derive(Debug, Clone)]
pub struct LpPartition {
    j_max: i32,
    // weights[j + 1][|k|]
    weights: Vec<Vec<f64>>,
}

impl LpPartition {
    pub fn new(n: usize) -> Self {
        let half = n / 2;
        let j_max = half.trailing_zeros() as i32;
        let weights = (-1..=j_max)
            .map(|j| {
                (0..=half)
                    .map(|k| Self::profile(j, k as f64))
                    .collect::<Vec<_>>()
            })
            .collect();
        Self { j_max, weights }
    }

    /// Continuous block profile evaluated at frequency `k`.
    pub fn profile(j: i32, k: f64) -> f64 {
        if j < 0 {
            chi(k)
        } else {
            rho(k / f64::powi(2.0, j))
        }
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn blocks(&self) -> std::ops::RangeInclusive<i32> {
        -1..=self.j_max
    }

    /// Weight of block `j` on modes `±k`. Panics if `j` is out of range.
    pub fn weight(&self, j: i32, k: i64) -> f64 {
        let row = &self.weights[(j + 1) as usize];
        row.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    pub(crate) fn row(&self, j: i32) -> &[f64] {
        &self.weights[(j + 1) as usize]
    }

    /// Smallest and largest |k| on which block `j` is non-zero, if any.
    pub fn support(&self, j: i32) -> Option<(usize, usize)> {
        let row = self.row(j);
        let lo = row.iter().position(|&w| w != 0.0)?;
        let hi = row.iter().rposition(|&w| w != 0.0)?;
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_endpoints_are_exact() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(-3.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        assert_eq!(smoothstep(7.0), 1.0);
        assert!((smoothstep(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn smoothstep_is_monotone() {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = smoothstep(i as f64 / 1000.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn chi_and_rho_supports() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.75), 1.0);
        assert_eq!(chi(4.0 / 3.0), 0.0);
        assert_eq!(rho(0.7), 0.0);
        assert_eq!(rho(8.0 / 3.0), 0.0);
        assert!(rho(1.0) > 0.0);
        // chi and the annuli j >= 1 never overlap
        for i in 0..2000 {
            let xi = i as f64 * 0.01;
            assert!(chi(xi) * rho(xi / 2.0) == 0.0);
            // non-adjacent annuli are disjoint
            assert!(rho(xi) * rho(xi / 4.0) == 0.0);
        }
    }

    #[test]
    fn cutoff_profile_complement() {
        let p = CutoffProfile;
        for i in 0..=400 {
            let r = i as f64 / 200.0;
            assert_eq!(p.high(r) + p.low(r), 1.0);
        }
        assert_eq!(p.high(0.5), 0.0);
        assert_eq!(p.high(1.0), 1.0);
        assert_eq!(p.low(0.25), 1.0);
    }

    #[test]
    fn partition_of_unity_on_grid_modes() {
        for n in [8usize, 16, 64, 256, 4096] {
            let lp = LpPartition::new(n);
            for k in 0..=(n as i64 / 2) {
                let s: f64 = lp.blocks().map(|j| lp.weight(j, k)).sum();
                assert!((s - 1.0).abs() <= 1e-13, "n={n} k={k} sum={s}");
            }
        }
    }

    #[test]
    fn top_block_index() {
        assert_eq!(LpPartition::new(64).j_max(), 5);
        assert_eq!(LpPartition::new(256).j_max(), 7);
    }
}
