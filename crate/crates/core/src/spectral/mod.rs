//! Fourier grid, fields, Littlewood–Paley blocks, norms and multipliers.

mod field;
mod grid;
pub mod norms;
mod ops;
mod profile;

pub use field::SpectralField;
pub use grid::Grid;
pub use norms::{besov_norm, besov_norm_dyadic, holder_norm, homogeneous_sobolev_norm, lp_norm, sobolev_norm};
pub use ops::{apply_multiplier, low_sum, lp_block, project_high, project_low, split_frequencies};
pub use profile::{chi, rho, smoothstep, CutoffProfile, LpPartition, CHI_INNER, CHI_OUTER};
