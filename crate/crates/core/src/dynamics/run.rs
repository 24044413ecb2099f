use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use super::config::{SolverConfig, ZetaMode};
use super::decomposition::DecompositionState;
use super::diagnostics::DiagnosticRecord;
use super::schedule::Schedule;
use super::step::{step_w_with_norm, step_y, Propagator};
use super::zeta::ZetaSource;
use crate::error::{Error, Result};
use crate::noise::{enhance, renorm_constant, NoiseNorms, OuState};
use crate::spectral::{project_low, sobolev_norm, CutoffProfile, Grid, SpectralField};

/// Single-threaded state machine for the decomposed system `(X, Q, Y, w)`.
///
/// A Galerkin run applies `L_n` to the noise, to `Q` and to the initial
/// datum, and shares the noise streams of the full run with the same seed.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: SolverConfig,
    grid: Arc<Grid>,
    profile: CutoffProfile,
    prop: Propagator,
    ou: Option<OuState>,
    zeta: Option<ZetaSource>,
    cutoff: Option<f64>,
    y: SpectralField,
    w: SpectralField,
    steps_taken: usize,
    schedule: Schedule,
    norms: NoiseNorms,
    last_record: Option<DiagnosticRecord>,
}

impl Simulation {
    pub fn new(cfg: &SolverConfig) -> Result<Self> {
        Self::build(cfg, None)
    }

    /// The Galerkin system at cutoff `n`.
    pub fn galerkin(cfg: &SolverConfig, n: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::contract(format!("Galerkin cutoff {n} must be positive")));
        }
        Self::build(cfg, Some(n))
    }

    fn build(cfg: &SolverConfig, cutoff: Option<f64>) -> Result<Self> {
        cfg.validate()?;
        let grid = Grid::new(cfg.n_grid)?;
        let profile = CutoffProfile;
        let mut w = cfg.theta_init.field(&grid)?;
        if let Some(n) = cutoff {
            w = project_low(&w, n, &profile)?;
        }
        let ou = if cfg.noise {
            Some(OuState::new(&grid, cfg.nu, cfg.seed)?)
        } else {
            None
        };
        let zeta = match cfg.zeta {
            ZetaMode::Off => None,
            ZetaMode::Synthetic { seed } => Some(ZetaSource::new(&grid, seed, cfg.kappa)?),
        };
        Ok(Self {
            prop: Propagator::new(&grid, cfg.nu, cfg.dt)?,
            schedule: Schedule::new(w.l2_norm(), cfg.tau)?,
            norms: NoiseNorms::new(cfg.kappa),
            y: SpectralField::zeros(&grid),
            cfg: cfg.clone(),
            grid,
            profile,
            ou,
            zeta,
            cutoff,
            w,
            steps_taken: 0,
            last_record: None,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.steps_taken as f64 * self.cfg.dt
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    pub fn w(&self) -> &SpectralField {
        &self.w
    }

    pub fn y(&self) -> &SpectralField {
        &self.y
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn noise_norms(&self) -> &NoiseNorms {
        &self.norms
    }

    fn cut(&self, f: &SpectralField) -> Result<SpectralField> {
        match self.cutoff {
            Some(n) => project_low(f, n, &self.profile),
            None => Ok(f.clone()),
        }
    }

    /// The driving noise `X` (or `L_n X`) at the current time.
    pub fn x(&self) -> Result<SpectralField> {
        match &self.ou {
            Some(ou) => self.cut(ou.x()),
            None => Ok(SpectralField::zeros(&self.grid)),
        }
    }

    /// `Q` (or `L_n Q`) at the current time.
    pub fn q(&self) -> Result<SpectralField> {
        match &self.ou {
            Some(ou) => self.cut(ou.q()),
            None => Ok(SpectralField::zeros(&self.grid)),
        }
    }

    /// One accepted step. Returns the indices of stopping times crossed.
    pub fn step(&mut self) -> Result<Vec<usize>> {
        let dt = self.cfg.dt;
        let t_next = (self.steps_taken + 1) as f64 * dt;
        let zeta = self.zeta.as_mut().map(ZetaSource::next_field);
        let l2;
        if self.ou.is_none() && zeta.is_none() {
            // with no forcing X and Y stay identically zero
            (self.w, l2) = step_w_with_norm(&self.prop, &self.w, &self.y, &self.y, t_next)?;
        } else {
            let x = self.x()?;
            let y_next = step_y(&self.prop, &self.y, &x, zeta.as_ref(), t_next)?;
            (self.w, l2) = step_w_with_norm(&self.prop, &self.w, &x, &self.y, t_next)?;
            self.y = y_next;
        }
        if let Some(ou) = self.ou.as_mut() {
            ou.step(dt)?;
        }
        self.steps_taken += 1;
        self.schedule.update(t_next, l2)
    }

    /// High/low and paracontrolled views of `w` at the current level.
    pub fn decomposition(&self) -> Result<DecompositionState> {
        DecompositionState::new(
            self.time(),
            &self.w,
            &self.q()?,
            self.schedule.current_level(),
            &self.profile,
        )
    }

    /// Nominal levels `lambda^i = (i + 1)^tau` reached so far that the grid
    /// resolves.
    pub fn resolved_levels(&self) -> Vec<f64> {
        let top = (self.grid.n() / 2) as f64;
        (0..=self.schedule.current_index())
            .map(|i| self.schedule.nominal_level(i))
            .take_while(|&l| l <= top)
            .collect()
    }

    /// Folds the current noise into the running noise norms and returns the
    /// diagnostic record of the current state.
    pub fn sample(&mut self) -> Result<(DecompositionState, DiagnosticRecord)> {
        let t = self.time();
        let x = self.x()?;
        let mut theta2 = Vec::new();
        for lambda in self.resolved_levels() {
            theta2.push(enhance(&x, t, self.cfg.nu, lambda, self.cfg.kappa, &self.profile)?.theta2);
        }
        self.norms.observe(&x, &self.y, &theta2);
        let state = self.decomposition()?;
        let r = renorm_constant(state.lambda, t, self.cfg.nu, &self.profile)?;
        let record = DiagnosticRecord::new(
            &state,
            self.cfg.kappa,
            r,
            self.norms.n(),
            self.last_record.as_ref(),
        );
        self.last_record = Some(record.clone());
        Ok((state, record))
    }

    /// Runs to `t_end`, sampling at `t = 0`, every `sample_every` steps and
    /// at the final step. `t_end = 0` yields no samples.
    pub fn run(&mut self, sample_every: usize) -> Result<RunOutput> {
        self.run_with(sample_every, |_, _, _| {})
    }

    /// [`Simulation::run`] with a callback on every sample.
    pub fn run_with(
        &mut self,
        sample_every: usize,
        mut observe: impl FnMut(&Simulation, &DecompositionState, &DiagnosticRecord),
    ) -> Result<RunOutput> {
        let every = sample_every.max(1);
        let steps = self.cfg.steps();
        let mut records = Vec::new();
        if steps > 0 {
            let (s, r) = self.sample()?;
            observe(self, &s, &r);
            records.push(r);
        }
        for k in 1..=steps {
            self.step()?;
            if k % every == 0 || k == steps {
                let (s, r) = self.sample()?;
                observe(self, &s, &r);
                records.push(r);
            }
        }
        Ok(RunOutput {
            records,
            schedule: self.schedule.clone(),
        })
    }
}

/// Sampled diagnostics and the final schedule of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<DiagnosticRecord>,
    pub schedule: Schedule,
}

pub fn write_schedule_csv(schedule: &Schedule, out: impl Write) -> Result<()> {
    let mut out = out;
    writeln!(out, "# schema=1")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "t", "lambda", "w_l2", "nominal_level"])?;
    for (i, ((t, l), n)) in schedule
        .stopping_times()
        .iter()
        .zip(schedule.levels())
        .zip(schedule.norms_at_stops())
        .enumerate()
    {
        w.write_record([
            i.to_string(),
            t.to_string(),
            l.to_string(),
            n.to_string(),
            schedule.nominal_level(i).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Shape ratio of the higher-frequency bound:
/// `||w_high||_{H^{1 - 2 kappa - delta}} / ((1 + ||w||)^{1 - tau delta} N t^{kappa / 4})`.
pub fn high_frequency_ratio(
    state: &DecompositionState,
    noise_n: f64,
    kappa: f64,
    tau: f64,
    delta: f64,
) -> f64 {
    let num = sobolev_norm(&state.w_high, 1.0 - 2.0 * kappa - delta);
    let den = (1.0 + state.w.l2_norm()).powf(1.0 - tau * delta) * noise_n * state.t.powf(kappa / 4.0);
    num / den
}

/// Coupled-seed distances `||w^n - w^{2n}||_{L^2(0, T; L^2)}` for one seed,
/// one per level `n`, with the time integral taken by the rectangle rule
/// over step end points.
pub fn galerkin_distances(cfg: &SolverConfig, levels: &[f64]) -> Result<Vec<f64>> {
    if levels.len() < 2 {
        return Err(Error::contract("a Galerkin study needs at least two levels"));
    }
    let mut all: Vec<f64> = levels.iter().flat_map(|&n| [n, 2.0 * n]).collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    let index = |n: f64| all.iter().position(|&m| m == n).expect("level present");
    let pairs: Vec<(usize, usize)> = levels.iter().map(|&n| (index(n), index(2.0 * n))).collect();
    let mut sims = all
        .iter()
        .map(|&n| Simulation::galerkin(cfg, n))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = vec![0.0; pairs.len()];
    for _ in 0..cfg.steps() {
        for s in sims.iter_mut() {
            s.step()?;
        }
        for (a, &(i, j)) in acc.iter_mut().zip(&pairs) {
            let d = (sims[i].w() - sims[j].w()).l2_norm();
            *a += cfg.dt * d * d;
        }
    }
    Ok(acc.into_iter().map(f64::sqrt).collect())
}

/// Galerkin refinement over several seeds.
#[derive(Debug, Clone)]
pub struct GalerkinReport {
    pub levels: Vec<f64>,
    pub seeds: Vec<u64>,
    /// `diffs[s][i]` for seed `s` and level `i`.
    pub diffs: Vec<Vec<f64>>,
}

impl GalerkinReport {
    /// Seeds whose distances strictly decrease in `n`.
    pub fn decreasing_seeds(&self) -> usize {
        self.diffs
            .iter()
            .filter(|d| crate::stats::strictly_decreasing(d))
            .count()
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut out = out;
        writeln!(out, "# schema=1")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["seed", "n", "distance"])?;
        for (seed, d) in self.seeds.iter().zip(&self.diffs) {
            for (n, v) in self.levels.iter().zip(d) {
                w.write_record([seed.to_string(), n.to_string(), v.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs [`galerkin_distances`] for each seed in parallel.
pub fn galerkin_study(cfg: &SolverConfig, levels: &[f64], seeds: &[u64]) -> Result<GalerkinReport> {
    let diffs = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = SolverConfig { seed, ..cfg.clone() };
            galerkin_distances(&cfg, levels)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GalerkinReport {
        levels: levels.to_vec(),
        seeds: seeds.to_vec(),
        diffs,
    })
}
