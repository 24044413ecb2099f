//! Bony paraproducts, resonant products and commutators.
//!
//! Every pointwise product is evaluated on the `3n/2` zero-padded grid and
//! truncated back to the resolved band, so products of band-limited fields
//! are exact up to rounding.

pub mod audit;
mod commutator;
mod product;

pub use commutator::{commutator_ca, commutator_cprec, commutator_r};
pub use product::{
    bony_parts, paraproduct, paraproduct_cached, paraproduct_hi_lo, product, resonant, resonant_cached,
    BlockCache, BonyParts,
};
