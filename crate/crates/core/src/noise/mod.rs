//! Ornstein–Uhlenbeck noise, renormalization constants and the enhanced
//! noise.

mod convergence;
mod enhanced;
mod norms;
mod ou;
mod renorm;
pub mod rng;

pub use convergence::{enhancement_convergence, ConvergenceConfig, ConvergenceReport};
pub use enhanced::{
    enhance, enhanced_noise, resonant_enhancement, wick_check, write_wick_csv, EnhancedNoise, WickConfig, WickRow,
};
pub use norms::{noise_norms, NoiseNorms};
pub use ou::{ou_covariance, step_variance, OuState};
pub use renorm::{log_band_width, log_bound_scan, renorm_constant, renorm_constant_truncated, LogBoundRow};
