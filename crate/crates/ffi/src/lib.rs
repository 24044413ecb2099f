//! C ABI over `burgers-core`.
//!
//! Handles are opaque pointers created by `*_new` and released by `*_free`.
//! Every fallible function returns a [`BurgersStatus`]; outputs are written
//! through caller-provided pointers only on success.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use burgers_core::anderson::{lift, resolvent_solve};
use burgers_core::dynamics::{InitialCondition, Simulation, SolverConfig, ZetaMode};
use burgers_core::noise::renorm_constant;
use burgers_core::spectral::{CutoffProfile, Grid, SpectralField};
use burgers_core::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BurgersStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Divergence = 3,
    NonContraction = 4,
    BufferSize = 5,
    Internal = 6,
}

impl From<&Error> for BurgersStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Divergence { .. } => BurgersStatus::Divergence,
            Error::NonContraction { .. } => BurgersStatus::NonContraction,
            Error::Io(_) | Error::Csv(_) => BurgersStatus::Internal,
            _ => BurgersStatus::InvalidArgument,
        }
    }
}

/// Solver parameters. `theta_init` is a nul-terminated initial-condition
/// string such as `"sin:1:1+cos:3:0.5"`, or null for the default.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BurgersSolverParams {
    pub nu: f64,
    pub dt: f64,
    pub kappa: f64,
    pub tau: f64,
    pub t_end: f64,
    pub n_grid: usize,
    pub seed: u64,
    /// Nonzero enables the driving noise.
    pub noise: i32,
    /// Nonzero enables the synthetic rough forcing with this seed.
    pub zeta_enabled: i32,
    pub zeta_seed: u64,
    pub theta_init: *const c_char,
}

/// Opaque simulation handle.
pub struct BurgersSimulation {
    inner: Simulation,
}

fn guard(f: impl FnOnce() -> BurgersStatus) -> BurgersStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(BurgersStatus::Internal)
}

/// Fills `out` with the library defaults.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn burgers_solver_params_default(out: *mut BurgersSolverParams) -> BurgersStatus {
    if out.is_null() {
        return BurgersStatus::NullPointer;
    }
    let d = SolverConfig::default();
    out.write(BurgersSolverParams {
        nu: d.nu,
        dt: d.dt,
        kappa: d.kappa,
        tau: d.tau,
        t_end: d.t_end,
        n_grid: d.n_grid,
        seed: d.seed,
        noise: d.noise as i32,
        zeta_enabled: 0,
        zeta_seed: 0,
        theta_init: ptr::null(),
    });
    BurgersStatus::Ok
}

unsafe fn solver_config(p: &BurgersSolverParams) -> Result<SolverConfig, BurgersStatus> {
    let theta_init = if p.theta_init.is_null() {
        SolverConfig::default().theta_init
    } else {
        let s = CStr::from_ptr(p.theta_init)
            .to_str()
            .map_err(|_| BurgersStatus::InvalidArgument)?;
        s.parse::<InitialCondition>()
            .map_err(|_| BurgersStatus::InvalidArgument)?
    };
    Ok(SolverConfig {
        nu: p.nu,
        dt: p.dt,
        kappa: p.kappa,
        tau: p.tau,
        t_end: p.t_end,
        n_grid: p.n_grid,
        zeta: if p.zeta_enabled != 0 {
            ZetaMode::Synthetic { seed: p.zeta_seed }
        } else {
            ZetaMode::Off
        },
        theta_init,
        seed: p.seed,
        noise: p.noise != 0,
    })
}

/// Creates a simulation at `t = 0`.
///
/// # Safety
/// `params` must point to a valid struct whose `theta_init` is null or a
/// nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn burgers_simulation_new(
    params: *const BurgersSolverParams,
    out: *mut *mut BurgersSimulation,
) -> BurgersStatus {
    if params.is_null() || out.is_null() {
        return BurgersStatus::NullPointer;
    }
    guard(|| {
        let cfg = match solver_config(&*params) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match Simulation::new(&cfg) {
            Ok(inner) => {
                out.write(Box::into_raw(Box::new(BurgersSimulation { inner })));
                BurgersStatus::Ok
            }
            Err(e) => (&e).into(),
        }
    })
}

/// Releases a simulation. Null is ignored.
///
/// # Safety
/// `sim` must be null or a handle from [`burgers_simulation_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn burgers_simulation_free(sim: *mut BurgersSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances by `steps` time steps.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn burgers_simulation_step(sim: *mut BurgersSimulation, steps: usize) -> BurgersStatus {
    let Some(sim) = sim.as_mut() else {
        return BurgersStatus::NullPointer;
    };
    guard(|| {
        for _ in 0..steps {
            if let Err(e) = sim.inner.step() {
                return (&e).into();
            }
        }
        BurgersStatus::Ok
    })
}

/// Current time.
///
/// # Safety
/// `sim` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn burgers_simulation_time(sim: *const BurgersSimulation, out: *mut f64) -> BurgersStatus {
    match (sim.as_ref(), out.is_null()) {
        (Some(s), false) => {
            out.write(s.inner.time());
            BurgersStatus::Ok
        }
        _ => BurgersStatus::NullPointer,
    }
}

/// Grid size `N`.
///
/// # Safety
/// `sim` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn burgers_simulation_grid_size(sim: *const BurgersSimulation, out: *mut usize) -> BurgersStatus {
    match (sim.as_ref(), out.is_null()) {
        (Some(s), false) => {
            out.write(s.inner.grid().n());
            BurgersStatus::Ok
        }
        _ => BurgersStatus::NullPointer,
    }
}

/// `||w||_{L^2}`.
///
/// # Safety
/// `sim` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn burgers_simulation_w_l2(sim: *const BurgersSimulation, out: *mut f64) -> BurgersStatus {
    match (sim.as_ref(), out.is_null()) {
        (Some(s), false) => {
            out.write(s.inner.w().l2_norm());
            BurgersStatus::Ok
        }
        _ => BurgersStatus::NullPointer,
    }
}

/// Grid values of `w` at `x_j = j / N`; `len` must equal `N`.
///
/// # Safety
/// `sim` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn burgers_simulation_w_values(
    sim: *const BurgersSimulation,
    buf: *mut f64,
    len: usize,
) -> BurgersStatus {
    let Some(s) = sim.as_ref() else {
        return BurgersStatus::NullPointer;
    };
    if buf.is_null() {
        return BurgersStatus::NullPointer;
    }
    let values = s.inner.w().values();
    if len != values.len() {
        return BurgersStatus::BufferSize;
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, len);
    BurgersStatus::Ok
}

/// Renormalization constant `r_lambda(t)`; `t` may be infinite.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn burgers_renorm_constant(lambda: f64, t: f64, nu: f64, out: *mut f64) -> BurgersStatus {
    if out.is_null() {
        return BurgersStatus::NullPointer;
    }
    match renorm_constant(lambda, t, nu, &CutoffProfile) {
        Ok(r) => {
            out.write(r);
            BurgersStatus::Ok
        }
        Err(e) => (&e).into(),
    }
}

/// Solves `(a - Delta + eta) f = g` for a smooth potential given by its
/// grid values, with the paracontrolled fixed point. All arrays have length
/// `n`, a power of two; `eta` and `g` are projected onto the resolved band.
///
/// # Safety
/// `eta` and `g` must be valid for `n` reads, `f_out` for `n` writes and
/// `iterations` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn burgers_resolvent_solve(
    n: usize,
    eta: *const f64,
    g: *const f64,
    a: f64,
    tol: f64,
    max_iter: usize,
    f_out: *mut f64,
    iterations: *mut usize,
) -> BurgersStatus {
    if eta.is_null() || g.is_null() || f_out.is_null() {
        return BurgersStatus::NullPointer;
    }
    guard(|| {
        let grid = match Grid::new(n) {
            Ok(g) => g,
            Err(e) => return (&e).into(),
        };
        let eta_vals = std::slice::from_raw_parts(eta, n);
        let g_vals = std::slice::from_raw_parts(g, n);
        let solve = || -> burgers_core::Result<(Vec<f64>, usize)> {
            let eta = SpectralField::from_values(&grid, eta_vals)?;
            let rhs = SpectralField::from_values(&grid, g_vals)?;
            let sol = resolvent_solve(&lift(&eta, 0.0), &rhs, a, tol, max_iter)?;
            Ok((sol.f.f.values(), sol.iterations))
        };
        match solve() {
            Ok((values, iters)) => {
                ptr::copy_nonoverlapping(values.as_ptr(), f_out, n);
                if !iterations.is_null() {
                    iterations.write(iters);
                }
                BurgersStatus::Ok
            }
            Err(e) => (&e).into(),
        }
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn burgers_status_message(status: BurgersStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BurgersStatus::Ok => c"ok",
        BurgersStatus::NullPointer => c"null pointer argument",
        BurgersStatus::InvalidArgument => c"invalid argument",
        BurgersStatus::Divergence => c"run diverged",
        BurgersStatus::NonContraction => c"fixed point did not contract",
        BurgersStatus::BufferSize => c"buffer length does not match the grid",
        BurgersStatus::Internal => c"internal error",
    };
    s.as_ptr()
}
