//! Empirical constants of the paraproduct estimates on random fields.
//!
//! For each estimate `||LHS|| <= C ||f|| ||g||` the audit records the ratio
//! of the two sides for random pairs with power-law spectra, on several grid
//! sizes. Fields are drawn mode by mode from per-mode streams, so the same
//! seed yields the same low modes on every grid.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use super::product::{bony_parts, product, BonyParts};
use crate::error::{Error, Result};
use crate::noise::rng::{complex_normal, mode_stream, Domain};
use crate::spectral::{besov_norm_dyadic, holder_norm, homogeneous_sobolev_norm, lp_norm, sobolev_norm, Grid, SpectralField};

/// The audited inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimate {
    /// `||f ≺ g||_{H^{b-a}} <= C ||f||_{L^2} ||g||_{C^b}`, `a > 0`.
    Bony1,
    /// `||f ≻ g||_{H^a} <= C ||f||_{H^a} ||g||_{L^inf}`.
    Bony2,
    /// `||f ≺ g||_{H^{a+b}} <= C ||f||_{H^a} ||g||_{C^b}`, `a < 0`.
    Bony3,
    /// `||f ≻ g||_{H^{a+b}} <= C ||f||_{H^a} ||g||_{C^b}`, `b < 0`.
    Bony4,
    /// `||f ∘ g||_{H^{a+b}} <= C ||f||_{H^a} ||g||_{C^b}`, `a + b > 0`.
    Bony5,
    /// `||f ≺ g||_{B^a_{r,inf}} <= C ||f||_{L^p} ||g||_{B^a_{q,inf}}`.
    Bony6,
    /// `||f ≺ g||_{B^{a+b}_{r,inf}} <= C ||f||_{B^b_{p,inf}} ||g||_{B^a_{q,inf}}`, `b < 0`.
    Bony7,
    /// `||f ∘ g||_{B^{a+b}_{r,inf}} <= C ||f||_{B^b_{p,inf}} ||g||_{B^a_{q,inf}}`, `a + b > 0`.
    Bony8,
    /// `||f g||_{H'^{s1+s2-1/2}} <= C ||f||_{H'^{s1}} ||g||_{H'^{s2}}` in
    /// homogeneous norms, `s1, s2 < 1/2`, `s1 + s2 > 0`.
    Product,
}

impl Estimate {
    pub const ALL: [Estimate; 9] = [
        Estimate::Bony1,
        Estimate::Bony2,
        Estimate::Bony3,
        Estimate::Bony4,
        Estimate::Bony5,
        Estimate::Bony6,
        Estimate::Bony7,
        Estimate::Bony8,
        Estimate::Product,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Estimate::Bony1 => "bony1",
            Estimate::Bony2 => "bony2",
            Estimate::Bony3 => "bony3",
            Estimate::Bony4 => "bony4",
            Estimate::Bony5 => "bony5",
            Estimate::Bony6 => "bony6",
            Estimate::Bony7 => "bony7",
            Estimate::Bony8 => "bony8",
            Estimate::Product => "product",
        }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Exponents shared by the estimates. `p`, `q`, `r` are used by the Besov
/// estimates and must satisfy `1/r = 1/p + 1/q <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub alpha: f64,
    pub beta: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl Exponents {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            sigma1: 0.3,
            sigma2: 0.3,
            p: 2.0,
            q: 2.0,
            r: 1.0,
        }
    }

    /// Names the violated hypothesis of `estimate`, if any.
    pub fn check(&self, estimate: Estimate) -> Result<()> {
        let (a, b) = (self.alpha, self.beta);
        let fail = |h: String| Err(Error::Hypothesis { estimate: estimate.id(), hypothesis: h });
        let besov = matches!(estimate, Estimate::Bony6 | Estimate::Bony7 | Estimate::Bony8);
        if besov {
            let inv = 1.0 / self.p + 1.0 / self.q;
            if self.p < 1.0 || self.q < 1.0 || inv > 1.0 || (1.0 / self.r - inv).abs() > 1e-12 {
                return fail(format!(
                    "need p, q >= 1 and 1/r = 1/p + 1/q <= 1 (p = {}, q = {}, r = {})",
                    self.p, self.q, self.r
                ));
            }
        }
        match estimate {
            Estimate::Bony1 if a <= 0.0 => fail(format!("alpha > 0 (alpha = {a})")),
            Estimate::Bony3 if a >= 0.0 => fail(format!("alpha < 0 (alpha = {a})")),
            Estimate::Bony4 | Estimate::Bony7 if b >= 0.0 => fail(format!("beta < 0 (beta = {b})")),
            Estimate::Bony5 | Estimate::Bony8 if a + b <= 0.0 => {
                fail(format!("alpha + beta > 0 (alpha + beta = {})", a + b))
            }
            Estimate::Product => {
                let (s1, s2) = (self.sigma1, self.sigma2);
                if s1 >= 0.5 || s2 >= 0.5 {
                    fail(format!("sigma1, sigma2 < 1/2 (sigma1 = {s1}, sigma2 = {s2})"))
                } else if s1 + s2 <= 0.0 {
                    fail(format!("sigma1 + sigma2 > 0 (sum = {})", s1 + s2))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

fn binf(f: &SpectralField, s: f64, p: f64) -> f64 {
    besov_norm_dyadic(f, s, p, f64::INFINITY).expect("indices validated")
}

/// LHS / RHS of one estimate for one pair, after checking its hypotheses.
pub fn estimate_ratio(
    estimate: Estimate,
    exps: &Exponents,
    f: &SpectralField,
    g: &SpectralField,
) -> Result<f64> {
    exps.check(estimate)?;
    let parts = bony_parts(f, g)?;
    Ok(ratio_with_parts(estimate, exps, f, g, &parts))
}

fn ratio_with_parts(
    estimate: Estimate,
    e: &Exponents,
    f: &SpectralField,
    g: &SpectralField,
    parts: &BonyParts,
) -> f64 {
    let (a, b) = (e.alpha, e.beta);
    match estimate {
        Estimate::Bony1 => ratio(
            sobolev_norm(&parts.lo_hi, b - a),
            f.l2_norm() * holder_norm(g, b),
        ),
        Estimate::Bony2 => ratio(
            sobolev_norm(&parts.hi_lo, a),
            sobolev_norm(f, a) * lp_norm(g, f64::INFINITY).expect("valid index"),
        ),
        Estimate::Bony3 => ratio(
            sobolev_norm(&parts.lo_hi, a + b),
            sobolev_norm(f, a) * holder_norm(g, b),
        ),
        Estimate::Bony4 => ratio(
            sobolev_norm(&parts.hi_lo, a + b),
            sobolev_norm(f, a) * holder_norm(g, b),
        ),
        Estimate::Bony5 => ratio(
            sobolev_norm(&parts.resonant, a + b),
            sobolev_norm(f, a) * holder_norm(g, b),
        ),
        Estimate::Bony6 => ratio(
            binf(&parts.lo_hi, a, e.r),
            lp_norm(f, e.p).expect("valid index") * binf(g, a, e.q),
        ),
        Estimate::Bony7 => ratio(
            binf(&parts.lo_hi, a + b, e.r),
            binf(f, b, e.p) * binf(g, a, e.q),
        ),
        Estimate::Bony8 => ratio(
            binf(&parts.resonant, a + b, e.r),
            binf(f, b, e.p) * binf(g, a, e.q),
        ),
        Estimate::Product => {
            let fg = product(f, g).expect("same grid");
            ratio(
                homogeneous_sobolev_norm(&fg, e.sigma1 + e.sigma2 - 0.5),
                homogeneous_sobolev_norm(f, e.sigma1) * homogeneous_sobolev_norm(g, e.sigma2),
            )
        }
    }
}

/// Mean-zero random field with coefficient `k` distributed as a standard
/// complex normal times `|k|^{-decay}`.
pub fn random_field(grid: &Arc<Grid>, seed: u64, domain: Domain, decay: f64) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    for k in 1..=grid.k_max() {
        let z = complex_normal(&mut mode_stream(seed, domain, k as u64));
        f.set_mode(k, z * (k as f64).powf(-decay)).expect("mode in band");
    }
    f
}

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub exponents: Exponents,
    pub sizes: Vec<usize>,
    pub seeds: std::ops::Range<u64>,
    pub decay: f64,
}

impl AuditConfig {
    pub fn new(alpha: f64, beta: f64, trials: u64) -> Self {
        Self {
            exponents: Exponents::new(alpha, beta),
            sizes: vec![64, 128, 256, 512],
            seeds: 0..trials,
            decay: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub estimate: Estimate,
    pub n: usize,
    pub seed: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    /// Sorted by estimate, grid size and seed.
    pub rows: Vec<AuditRow>,
    /// Estimates skipped because the exponents violate their hypotheses.
    pub rejected: Vec<(Estimate, String)>,
}

impl AuditReport {
    pub fn audited(&self) -> Vec<Estimate> {
        let mut v: Vec<Estimate> = self.rows.iter().map(|r| r.estimate).collect();
        v.dedup();
        v
    }

    /// Largest ratio per grid size, in increasing `n`.
    pub fn max_by_size(&self, estimate: Estimate) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        for row in self.rows.iter().filter(|r| r.estimate == estimate) {
            match out.last_mut() {
                Some((n, m)) if *n == row.n => *m = m.max(row.ratio),
                _ => out.push((row.n, row.ratio)),
            }
        }
        out
    }

    /// Largest relative increase of the per-size maximum between
    /// consecutive sizes.
    pub fn worst_growth(&self, estimate: Estimate) -> f64 {
        self.max_by_size(estimate)
            .windows(2)
            .map(|w| w[1].1 / w[0].1 - 1.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.rows.iter().all(|r| r.ratio.is_finite())
    }

    /// CSV with a schema comment line, columns `estimate,n,seed,ratio`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut out = out;
        writeln!(out, "# schema=1")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["estimate", "n", "seed", "ratio"])?;
        for r in &self.rows {
            w.write_record([r.estimate.id().to_string(), r.n.to_string(), r.seed.to_string(), r.ratio.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Ratios of every in-hypothesis estimate for each seed and grid size.
pub fn bony_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    let mut active = Vec::new();
    let mut rejected = Vec::new();
    for est in Estimate::ALL {
        match cfg.exponents.check(est) {
            Ok(()) => active.push(est),
            Err(Error::Hypothesis { hypothesis, .. }) => rejected.push((est, hypothesis)),
            Err(e) => return Err(e),
        }
    }
    let grids = cfg
        .sizes
        .iter()
        .map(|&n| Grid::new(n))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, u64)> = (0..grids.len())
        .flat_map(|gi| cfg.seeds.clone().map(move |s| (gi, s)))
        .collect();
    let mut rows: Vec<AuditRow> = jobs
        .par_iter()
        .flat_map_iter(|&(gi, seed)| {
            let grid = &grids[gi];
            let f = random_field(grid, seed, Domain::AuditLeft, cfg.decay);
            let g = random_field(grid, seed, Domain::AuditRight, cfg.decay);
            let parts = bony_parts(&f, &g).expect("same grid");
            active
                .iter()
                .map(|&est| AuditRow {
                    estimate: est,
                    n: grid.n(),
                    seed,
                    ratio: ratio_with_parts(est, &cfg.exponents, &f, &g, &parts),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    rows.sort_by_key(|r| (r.estimate, r.n, r.seed));
    Ok(AuditReport { rows, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypotheses_are_named() {
        let e = Exponents::new(0.6, -0.4);
        assert!(e.check(Estimate::Bony5).is_ok());
        let err = e.check(Estimate::Bony3).unwrap_err().to_string();
        assert!(err.contains("alpha < 0"), "{err}");
        let mut bad = e;
        bad.sigma1 = 0.7;
        assert!(bad.check(Estimate::Product).is_err());
        let mut besov = e;
        besov.p = 1.5;
        assert!(besov.check(Estimate::Bony6).is_err());
    }

    #[test]
    fn zero_field_gives_zero_ratios() {
        let g = Grid::new(64).unwrap();
        let z = SpectralField::zeros(&g);
        let h = random_field(&g, 1, Domain::AuditRight, 2.0);
        let e = Exponents::new(0.6, -0.4);
        for est in Estimate::ALL {
            if e.check(est).is_ok() {
                assert_eq!(estimate_ratio(est, &e, &z, &h).unwrap(), 0.0, "{est}");
            }
        }
    }

    #[test]
    fn fields_agree_across_grids() {
        let a = random_field(&Grid::new(64).unwrap(), 4, Domain::AuditLeft, 1.0);
        let b = random_field(&Grid::new(256).unwrap(), 4, Domain::AuditLeft, 1.0);
        for k in 0..32 {
            assert_eq!(a.coeff(k), b.coeff(k));
        }
    }

    #[test]
    fn small_audit_is_finite() {
        let mut cfg = AuditConfig::new(0.6, -0.4, 3);
        cfg.sizes = vec![64, 128];
        let rep = bony_audit(&cfg).unwrap();
        assert!(rep.all_finite());
        assert_eq!(rep.rejected.len(), 1);
        assert_eq!(rep.rejected[0].0, Estimate::Bony3);
        assert_eq!(rep.rows.len(), 8 * 2 * 3);
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# schema=1\nestimate,n,seed,ratio\n"));
    }
}
