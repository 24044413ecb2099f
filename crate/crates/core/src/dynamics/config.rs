use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Optional deterministic-given-seed rough forcing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZetaMode {
    Off,
    /// Gaussian forcing with spatial roughness `C^{-2 + 3 kappa}`, fresh on
    /// every step.
    Synthetic { seed: u64 },
}

impl fmt::Display for ZetaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaMode::Off => f.write_str("off"),
            ZetaMode::Synthetic { seed } => write!(f, "synthetic:{seed}"),
        }
    }
}

impl FromStr for ZetaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "off" {
            return Ok(ZetaMode::Off);
        }
        if let Some(seed) = s.strip_prefix("synthetic:") {
            let seed = seed
                .parse()
                .map_err(|_| Error::contract(format!("bad zeta seed in {s:?}")))?;
            return Ok(ZetaMode::Synthetic { seed });
        }
        Err(Error::contract(format!(
            "zeta mode {s:?} is neither \"off\" nor \"synthetic:<seed>\""
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Sin,
    Cos,
}

/// Mean-zero trigonometric initial datum, written as terms
/// `sin:k:a` or `cos:k:a` joined by `+`, meaning `a sin(2 pi k x)`; `zero`
/// is the empty sum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InitialCondition {
    terms: Vec<(Shape, i64, f64)>,
}

impl InitialCondition {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn sine(k: i64, amplitude: f64) -> Self {
        Self {
            terms: vec![(Shape::Sin, k, amplitude)],
        }
    }

    pub fn field(&self, grid: &Arc<Grid>) -> Result<SpectralField> {
        let mut f = SpectralField::zeros(grid);
        for &(shape, k, a) in &self.terms {
            // a sin(2 pi k x) = (a / 2i) e_k + c.c.
            let c = match shape {
                Shape::Sin => Complex64::new(0.0, -a / 2.0),
                Shape::Cos => Complex64::new(a / 2.0, 0.0),
            };
            let prev = f.coeff(k);
            f.set_mode(k, prev + c)?;
        }
        Ok(f)
    }
}

impl fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("zero");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, k, a)| {
                let name = if *s == Shape::Sin { "sin" } else { "cos" };
                format!("{name}:{k}:{a}")
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for InitialCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" || s.is_empty() {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for term in s.split('+') {
            let bad = || Error::contract(format!("bad initial-condition term {term:?}"));
            let mut it = term.trim().split(':');
            let shape = match it.next() {
                Some("sin") => Shape::Sin,
                Some("cos") => Shape::Cos,
                _ => return Err(bad()),
            };
            let k: i64 = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            let a: f64 = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            if it.next().is_some() || k <= 0 || !a.is_finite() {
                return Err(bad());
            }
            terms.push((shape, k, a));
        }
        Ok(Self { terms })
    }
}

/// Parameters of one simulation of the decomposed system.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub nu: f64,
    pub dt: f64,
    pub kappa: f64,
    pub tau: f64,
    pub t_end: f64,
    pub n_grid: usize,
    pub zeta: ZetaMode,
    pub theta_init: InitialCondition,
    /// Seed of the noise streams.
    pub seed: u64,
    /// When false, `X = 0` and the run is deterministic.
    pub noise: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            nu: 1.0,
            dt: 1e-4,
            kappa: 1.0 / 200.0,
            tau: 3.0,
            t_end: 0.5,
            n_grid: 256,
            zeta: ZetaMode::Off,
            theta_init: InitialCondition::sine(1, 1.0),
            seed: 0,
            noise: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::contract(format!("{name} = {v} must be positive")))
            }
        };
        positive("nu", self.nu)?;
        positive("dt", self.dt)?;
        positive("tau", self.tau)?;
        if !(self.kappa > 0.0 && self.kappa < 0.5) {
            return Err(Error::contract(format!("kappa = {} must lie in (0, 1/2)", self.kappa)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::contract(format!("t_end = {} must be non-negative", self.t_end)));
        }
        Grid::new(self.n_grid)?;
        Ok(())
    }

    /// Number of steps of length `dt` needed to reach `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_condition_roundtrip() {
        let ic: InitialCondition = "sin:1:1+cos:3:0.5".parse().unwrap();
        assert_eq!(ic.to_string().parse::<InitialCondition>().unwrap(), ic);
        let g = Grid::new(32).unwrap();
        let f = ic.field(&g).unwrap();
        assert!(f.is_mean_zero());
        let v = f.values();
        let x = g.x(3);
        let expected = (2.0 * std::f64::consts::PI * x).sin()
            + 0.5 * (6.0 * std::f64::consts::PI * x).cos();
        assert!((v[3] - expected).abs() < 1e-14);
        assert!("sin:0:1".parse::<InitialCondition>().is_err());
        assert!("tan:1:1".parse::<InitialCondition>().is_err());
    }

    #[test]
    fn zeta_mode_parsing() {
        assert_eq!("off".parse::<ZetaMode>().unwrap(), ZetaMode::Off);
        assert_eq!(
            "synthetic:5".parse::<ZetaMode>().unwrap(),
            ZetaMode::Synthetic { seed: 5 }
        );
        assert!("rough".parse::<ZetaMode>().is_err());
    }

    #[test]
    fn defaults_validate() {
        let c = SolverConfig::default();
        c.validate().unwrap();
        assert_eq!(c.steps(), 5000);
        let bad = SolverConfig { dt: 0.0, ..c };
        assert!(bad.validate().is_err());
    }
}
