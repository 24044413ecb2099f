#ifndef BURGERS_H
#define BURGERS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum BurgersStatus {
  BURGERS_STATUS_OK = 0,
  BURGERS_STATUS_NULL_POINTER = 1,
  BURGERS_STATUS_INVALID_ARGUMENT = 2,
  BURGERS_STATUS_DIVERGENCE = 3,
  BURGERS_STATUS_NON_CONTRACTION = 4,
  BURGERS_STATUS_BUFFER_SIZE = 5,
  BURGERS_STATUS_INTERNAL = 6,
} BurgersStatus;

/**
 * Opaque simulation handle.
 */
typedef struct BurgersSimulation BurgersSimulation;

/**
 * Solver parameters. `theta_init` is a nul-terminated initial-condition
 * string such as `"sin:1:1+cos:3:0.5"`, or null for the default.
 */
typedef struct BurgersSolverParams {
  double nu;
  double dt;
  double kappa;
  double tau;
  double t_end;
  size_t n_grid;
  uint64_t seed;
  /**
   * Nonzero enables the driving noise.
   */
  int32_t noise;
  /**
   * Nonzero enables the synthetic rough forcing with this seed.
   */
  int32_t zeta_enabled;
  uint64_t zeta_seed;
  const char *theta_init;
} BurgersSolverParams;

/**
 * Fills `out` with the library defaults.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum BurgersStatus burgers_solver_params_default(struct BurgersSolverParams *out);

/**
 * Creates a simulation at `t = 0`.
 *
 * # Safety
 * `params` must point to a valid struct whose `theta_init` is null or a
 * nul-terminated string; `out` must be valid for writes.
 */
enum BurgersStatus burgers_simulation_new(const struct BurgersSolverParams *params,
                                          struct BurgersSimulation **out);

/**
 * Releases a simulation. Null is ignored.
 *
 * # Safety
 * `sim` must be null or a handle from [`burgers_simulation_new`] that has
 * not been freed.
 */
void burgers_simulation_free(struct BurgersSimulation *sim);

/**
 * Advances by `steps` time steps.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum BurgersStatus burgers_simulation_step(struct BurgersSimulation *sim, size_t steps);

/**
 * Current time.
 *
 * # Safety
 * `sim` must be a live handle and `out` valid for writes.
 */
enum BurgersStatus burgers_simulation_time(const struct BurgersSimulation *sim, double *out);

/**
 * Grid size `N`.
 *
 * # Safety
 * `sim` must be a live handle and `out` valid for writes.
 */
enum BurgersStatus burgers_simulation_grid_size(const struct BurgersSimulation *sim, size_t *out);

/**
 * `||w||_{L^2}`.
 *
 * # Safety
 * `sim` must be a live handle and `out` valid for writes.
 */
enum BurgersStatus burgers_simulation_w_l2(const struct BurgersSimulation *sim, double *out);

/**
 * Grid values of `w` at `x_j = j / N`; `len` must equal `N`.
 *
 * # Safety
 * `sim` must be a live handle and `buf` valid for `len` writes.
 */
enum BurgersStatus burgers_simulation_w_values(const struct BurgersSimulation *sim,
                                               double *buf,
                                               size_t len);

/**
 * Renormalization constant `r_lambda(t)`; `t` may be infinite.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum BurgersStatus burgers_renorm_constant(double lambda, double t, double nu, double *out);

/**
 * Solves `(a - Delta + eta) f = g` for a smooth potential given by its
 * grid values, with the paracontrolled fixed point. All arrays have length
 * `n`, a power of two; `eta` and `g` are projected onto the resolved band.
 *
 * # Safety
 * `eta` and `g` must be valid for `n` reads, `f_out` for `n` writes and
 * `iterations` null or valid for one write.
 */
enum BurgersStatus burgers_resolvent_solve(size_t n,
                                           const double *eta,
                                           const double *g,
                                           double a,
                                           double tol,
                                           size_t max_iter,
                                           double *f_out,
                                           size_t *iterations);

/**
 * Static description of a status code.
 */
const char *burgers_status_message(enum BurgersStatus status);

#endif  /* BURGERS_H */
