//! Paracontrolled resolvent of `Delta - eta` for a possibly distributional
//! potential `eta`.

mod pair;
mod solve;

pub use pair::{lift, lift_with, sigma_symbol, ParacontrolledFn, RoughPair};
pub use solve::{
    quadratic_form, resolvent_solve, shifted_symbol, solve_adaptive, write_trace_csv,
    ResolventSolution, TraceRow, GAMMA, MAX_DOUBLINGS,
};
