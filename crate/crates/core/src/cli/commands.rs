use std::io::Write;
use std::sync::Arc;

use super::config::{key, Config, Key};
use super::output::{Failure, RunDir};
use super::CliError;
use crate::anderson::{lift, resolvent_solve, solve_adaptive, write_trace_csv, RoughPair};
use crate::dynamics::{
    galerkin_study, write_schedule_csv, write_trajectory_csv, InitialCondition, Simulation, SolverConfig,
};
use crate::noise::{
    enhance, enhancement_convergence, log_band_width, log_bound_scan, wick_check, write_wick_csv,
    ConvergenceConfig, OuState, WickConfig,
};
use crate::paracalc::audit::{bony_audit, AuditConfig};
use crate::spectral::{CutoffProfile, Grid, SpectralField};
use crate::Error;

pub type Outcome = Result<Vec<Failure>, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub const RENORM_KEYS: &[Key] = &[
    key("lambdas", "8,16,32"),
    key("times", "0.5,1"),
    key("samples", "2000"),
    key("n_grid", "256"),
    key("nu", "1"),
    key("seed", "0"),
    key("sigmas", "3"),
    key("log_lambdas", "8,16,32,64,128,256,512,1024"),
    key("log_times", "0.1,1,10"),
    key("log_lambda_min", "16"),
    key("log_band", "2"),
];

pub fn renorm_verify(cfg: &Config, dir: &RunDir) -> Outcome {
    let samples: usize = cfg.get("samples")?;
    if samples < 2 {
        return Err(usage(format!("key \"samples\" must be at least 2, got {samples}")));
    }
    let wick = WickConfig {
        lambdas: cfg.list("lambdas")?,
        times: cfg.list("times")?,
        samples,
        n_grid: cfg.get("n_grid")?,
        nu: cfg.get("nu")?,
        seed: cfg.get("seed")?,
        sigmas: cfg.get("sigmas")?,
    };
    let rows = wick_check(&wick)?;
    write_wick_csv(&rows, dir.file("renorm.csv")?)?;
    let mut failures: Vec<Failure> = rows
        .iter()
        .filter(|r| r.z_score() > wick.sigmas)
        .map(|r| Failure::new("wick", format!("lambda={};t={}", r.lambda, r.t), r.z_score(), wick.sigmas))
        .collect();

    let lambda_min: f64 = cfg.get("log_lambda_min")?;
    let band: f64 = cfg.get("log_band")?;
    let scan = log_bound_scan(&cfg.list("log_lambdas")?, &cfg.list("log_times")?, wick.nu, &CutoffProfile)?;
    let mut out = dir.file("log_bound.csv")?;
    writeln!(out, "# schema=1").map_err(Error::from)?;
    writeln!(out, "lambda,ratio").map_err(Error::from)?;
    for r in &scan {
        writeln!(out, "{},{}", r.lambda, r.ratio).map_err(Error::from)?;
    }
    out.flush().map_err(Error::from)?;
    let width = log_band_width(&scan, lambda_min);
    if !(width <= band) {
        failures.push(Failure::new("log_band", format!("lambda>={lambda_min}"), width, band));
    }
    Ok(failures)
}

pub const SOLVER_KEYS: &[Key] = &[
    key("nu", "1"),
    key("dt", "0.0001"),
    key("kappa", "0.005"),
    key("tau", "3"),
    key("t_end", "0.5"),
    key("n_grid", "256"),
    key("zeta", "off"),
    key("theta_init", "sin:1:1"),
    key("seed", "0"),
    key("noise", "true"),
    key("sample_every", "100"),
];

fn solver_config(cfg: &Config) -> Result<SolverConfig, CliError> {
    let s = SolverConfig {
        nu: cfg.get("nu")?,
        dt: cfg.get("dt")?,
        kappa: cfg.get("kappa")?,
        tau: cfg.get("tau")?,
        t_end: cfg.get("t_end")?,
        n_grid: cfg.get("n_grid")?,
        zeta: cfg.raw("zeta").parse().map_err(|e: Error| usage(format!("key \"zeta\": {e}")))?,
        theta_init: cfg
            .raw("theta_init")
            .parse()
            .map_err(|e: Error| usage(format!("key \"theta_init\": {e}")))?,
        seed: cfg.get("seed")?,
        noise: cfg.get("noise")?,
    };
    s.validate().map_err(|e| usage(e.to_string()))?;
    Ok(s)
}

pub fn burgers_run(cfg: &Config, dir: &RunDir) -> Outcome {
    let solver = solver_config(cfg)?;
    let every: usize = cfg.get("sample_every")?;
    let mut sim = Simulation::new(&solver)?;
    let mut records = Vec::new();
    let result = sim.run_with(every, |_, _, r| records.push(r.clone()));
    write_trajectory_csv(&records, dir.file("trajectory.csv")?)?;
    write_schedule_csv(sim.schedule(), dir.file("schedule.csv")?)?;
    match result {
        Ok(_) => Ok(Vec::new()),
        Err(Error::Divergence { t, what, value }) => {
            let last_good = t - solver.dt;
            Ok(vec![Failure::new(
                "divergence",
                format!("{what};t={t};last_good_t={last_good}"),
                value,
                crate::dynamics::BLOWUP_L2,
            )])
        }
        Err(e) => Err(e.into()),
    }
}

pub const GALERKIN_KEYS: &[Key] = &[
    key("nu", "1"),
    key("dt", "0.0001"),
    key("kappa", "0.005"),
    key("tau", "3"),
    key("t_end", "0.5"),
    key("n_grid", "512"),
    key("zeta", "off"),
    key("theta_init", "sin:1:1"),
    key("seed", "0"),
    key("noise", "true"),
    key("levels", "8,16,32,64"),
    key("seeds", "10"),
    key("min_decreasing", "8"),
];

pub fn galerkin_converge(cfg: &Config, dir: &RunDir) -> Outcome {
    let levels: Vec<f64> = cfg.list("levels")?;
    if levels.len() < 2 {
        return Err(usage(format!(
            "key \"levels\" needs at least two Galerkin levels, got {}",
            levels.len()
        )));
    }
    let solver = solver_config(cfg)?;
    let count: u64 = cfg.get("seeds")?;
    let seeds: Vec<u64> = (solver.seed..solver.seed + count).collect();
    let report = galerkin_study(&solver, &levels, &seeds)?;
    report.write_csv(dir.file("galerkin.csv")?)?;
    let need: usize = cfg.get("min_decreasing")?;
    let got = report.decreasing_seeds();
    Ok(if got >= need {
        Vec::new()
    } else {
        vec![Failure::new("galerkin_decreasing", "seeds", got as f64, need as f64)]
    })
}

pub const ENHANCE_KEYS: &[Key] = &[
    key("tau", "3"),
    key("n_max", "6"),
    key("seeds", "200"),
    key("seed", "0"),
    key("kappa", "0.2"),
    key("p", "2"),
    key("n_grid", "512"),
    key("t", "1"),
    key("nu", "1"),
];

pub fn enhance_converge(cfg: &Config, dir: &RunDir) -> Outcome {
    let n_max: usize = cfg.get("n_max")?;
    if n_max < 2 {
        return Err(usage(format!("key \"n_max\" must be at least 2, got {n_max}")));
    }
    let base: u64 = cfg.get("seed")?;
    let count: u64 = cfg.get("seeds")?;
    let conv = ConvergenceConfig {
        levels: ConvergenceConfig::power_levels(cfg.get("tau")?, n_max),
        seeds: base..base + count,
        kappa: cfg.get("kappa")?,
        p: cfg.get("p")?,
        n_grid: cfg.get("n_grid")?,
        t: cfg.get("t")?,
        nu: cfg.get("nu")?,
    };
    let report = enhancement_convergence(&conv)?;
    report.write_csv(dir.file("enhance.csv")?)?;
    let mut failures = Vec::new();
    if !report.strictly_decreasing() {
        failures.push(Failure::new("median_decreasing", "medians", 0.0, 1.0));
    }
    if !(report.exponent < 0.0) {
        failures.push(Failure::new("decay_exponent", "fitted", report.exponent, 0.0));
    }
    Ok(failures)
}

pub const BONY_KEYS: &[Key] = &[
    key("alpha", "0.6"),
    key("beta", "-0.4"),
    key("trials", "100"),
    key("seed", "0"),
    key("decay", "2"),
    key("sizes", "64,128,256,512"),
    key("max_growth", "0.1"),
];

pub fn bony_check(cfg: &Config, dir: &RunDir) -> Outcome {
    let base: u64 = cfg.get("seed")?;
    let trials: u64 = cfg.get("trials")?;
    let mut audit = AuditConfig::new(cfg.get("alpha")?, cfg.get("beta")?, trials);
    audit.seeds = base..base + trials;
    audit.sizes = cfg.list("sizes")?;
    audit.decay = cfg.get("decay")?;
    let report = bony_audit(&audit)?;
    report.write_csv(dir.file("bony.csv")?)?;
    let max_growth: f64 = cfg.get("max_growth")?;
    let mut failures = Vec::new();
    for row in report.rows.iter().filter(|r| !r.ratio.is_finite()) {
        failures.push(Failure::new(
            "finite",
            format!("{};n={};seed={}", row.estimate.id(), row.n, row.seed),
            row.ratio,
            f64::INFINITY,
        ));
    }
    for est in report.audited() {
        let g = report.worst_growth(est);
        if !(g < max_growth) {
            failures.push(Failure::new("growth", est.id(), g, max_growth));
        }
    }
    Ok(failures)
}

pub const ANDERSON_KEYS: &[Key] = &[
    key("n_grid", "64"),
    key("a", "50"),
    key("tol", "1e-12"),
    key("max_iter", "200"),
    key("eta", "cos:1:1"),
    key("g", "sin:2:1"),
    key("c", "0"),
    key("adaptive", "true"),
    key("residual_tol", "1e-8"),
    key("nu", "1"),
    key("kappa", "0.1"),
    key("t", "1"),
];

/// `eta` is either a trigonometric sum or `noise:<seed>:<lambda>`, the
/// enhanced noise of an OU sample at time `t`.
fn anderson_pair(cfg: &Config, grid: &Arc<Grid>) -> Result<(RoughPair, bool), CliError> {
    let raw = cfg.raw("eta");
    if let Some(rest) = raw.strip_prefix("noise:") {
        let (seed, lambda) = rest
            .split_once(':')
            .and_then(|(s, l)| Some((s.parse::<u64>().ok()?, l.parse::<f64>().ok()?)))
            .ok_or_else(|| usage(format!("key \"eta\": expected noise:<seed>:<lambda>, got {raw:?}")))?;
        let nu: f64 = cfg.get("nu")?;
        let t: f64 = cfg.get("t")?;
        let ou = OuState::sample_at(grid, nu, seed, t)?;
        let noise = enhance(ou.x(), t, nu, lambda, cfg.get("kappa")?, &CutoffProfile)?;
        return Ok((RoughPair::from_enhanced(&noise, nu)?, true));
    }
    let eta = trig_field(cfg, "eta", grid)?;
    Ok((lift(&eta, cfg.get("c")?), false))
}

fn trig_field(cfg: &Config, name: &str, grid: &Arc<Grid>) -> Result<SpectralField, CliError> {
    let ic: InitialCondition = cfg
        .raw(name)
        .parse()
        .map_err(|e: Error| usage(format!("key {name:?}: {e}")))?;
    Ok(ic.field(grid)?)
}

pub fn anderson_solve(cfg: &Config, dir: &RunDir) -> Outcome {
    let grid = Grid::new(cfg.get("n_grid")?).map_err(|e| usage(format!("key \"n_grid\": {e}")))?;
    let (pair, rough) = anderson_pair(cfg, &grid)?;
    let g = trig_field(cfg, "g", &grid)?;
    let (a, tol, max_iter): (f64, f64, usize) = (cfg.get("a")?, cfg.get("tol")?, cfg.get("max_iter")?);
    let result = if cfg.get("adaptive")? {
        solve_adaptive(&pair, &g, a, tol, max_iter)
    } else {
        resolvent_solve(&pair, &g, a, tol, max_iter)
    };
    let sol = match result {
        Ok(s) => s,
        Err(Error::NonContraction { a, iterations, increment }) => {
            return Ok(vec![Failure::new(
                "contraction",
                format!("a={a};iterations={iterations}"),
                increment,
                tol,
            )])
        }
        Err(e) => return Err(e.into()),
    };
    write_trace_csv(&sol.trace, dir.file("anderson.csv")?)?;
    println!("converged in {} iteration(s) at a = {}", sol.iterations, sol.a);
    let residual = sol.trace.last().map_or(f64::NAN, |r| r.residual);
    let limit: f64 = cfg.get("residual_tol")?;
    Ok(if rough || residual <= limit {
        Vec::new()
    } else {
        vec![Failure::new("residual", "l2", residual, limit)]
    })
}
