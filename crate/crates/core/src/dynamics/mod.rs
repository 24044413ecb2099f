//! Time integration of the decomposed system, the adaptive cutoff schedule
//! and energy diagnostics.

mod config;
mod decomposition;
mod diagnostics;
mod run;
mod schedule;
mod step;
mod zeta;

pub use config::{InitialCondition, SolverConfig, ZetaMode};
pub use decomposition::{split_high_low, w_sharp, DecompositionState};
pub use diagnostics::{write_trajectory_csv, DiagnosticRecord, GronwallEnvelope};
pub use run::{
    galerkin_distances, galerkin_study, high_frequency_ratio, write_schedule_csv, GalerkinReport,
    RunOutput, Simulation,
};
pub use schedule::Schedule;
pub use step::{step_w, step_y, w_nonlinearity, y_nonlinearity, Propagator, BLOWUP_L2};
pub use zeta::{synth_zeta, ZetaSource};
