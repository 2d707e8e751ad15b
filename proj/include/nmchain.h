/* nmchain — chain-mapped oscillator bath dynamics.
 *
 * C interface to the shared library. Handles are opaque; every function that
 * can fail returns an nmc_status (or reports one through an out parameter)
 * and leaves a human-readable message retrievable with nmc_last_error().
 *
 * Trajectories are exchanged as flat double arrays on uniform grids starting
 * at t = 0: `samples` values spaced `dt` apart. Mode matrices are row-major,
 * one row per mode, `samples` columns.
 */

#ifndef NMCHAIN_H
#define NMCHAIN_H

#include <stddef.h>

#if defined(_WIN32)
#define NMC_API __declspec(dllexport)
#else
#define NMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nmc_status {
    NMC_OK = 0,
    NMC_ERR_INVALID = 1,              /* malformed input or violated precondition */
    NMC_ERR_BREAKDOWN = 2,            /* chain construction stopped early */
    NMC_ERR_NEAR_DEGENERATE = 3,      /* kernel frequencies collide */
    NMC_ERR_MULTIVALUED = 4,          /* resolvent frequencies not both real */
    NMC_ERR_DEGENERATE_RESOLVENT = 5, /* resolvent frequencies coincide */
    NMC_ERR_DIMENSION = 6,            /* array size mismatch */
    NMC_ERR_UNSTABLE = 7              /* trajectory ran away */
} nmc_status;

typedef struct nmc_bath nmc_bath;     /* independent-oscillator bath */
typedef struct nmc_chain nmc_chain;   /* chain parameters + orthogonal transform */
typedef struct nmc_kernel nmc_kernel; /* memory kernel as a sine sum */

NMC_API const char* nmc_status_name(nmc_status status);

/* Message describing the most recent failure on this thread. */
NMC_API const char* nmc_last_error(void);

/* ---- bath ------------------------------------------------------------- */

NMC_API nmc_bath* nmc_bath_create(const double* omega, const double* c, size_t n);

/* Ohmic spectral density with exponential cutoff, discretized on n_modes
 * points over (0, 4*cutoff]; log_grid != 0 selects the logarithmic grid. */
NMC_API nmc_bath* nmc_bath_ohmic(double coupling_scale, double cutoff, size_t n_modes,
                                 int log_grid);

NMC_API void nmc_bath_free(nmc_bath* bath);
NMC_API size_t nmc_bath_size(const nmc_bath* bath);
NMC_API nmc_status nmc_bath_get(const nmc_bath* bath, double* omega, double* c);

/* Returns the number of validation issues; writes a semicolon-separated
 * description into msg (if msg != NULL and cap > 0). Zero means valid. */
NMC_API int nmc_bath_validate(const nmc_bath* bath, char* msg, size_t cap);

/* 1 if the full tracer+bath quadratic form is positive semi-definite,
 * 0 if not, -1 on error. */
NMC_API int nmc_bath_stable(const nmc_bath* bath, double system_omega);

/* Copy of the bath with all couplings multiplied by factor. */
NMC_API nmc_bath* nmc_bath_scaled(const nmc_bath* bath, double factor);

/* ---- chain transform --------------------------------------------------- */

/* Solves the inverse eigenvalue problem. On breakdown returns NULL with
 * status NMC_ERR_BREAKDOWN and the completed chain length in
 * *effective_length. status and effective_length may be NULL. */
NMC_API nmc_chain* nmc_chain_solve(const nmc_bath* bath, nmc_status* status,
                                   size_t* effective_length);

NMC_API void nmc_chain_free(nmc_chain* chain);
NMC_API size_t nmc_chain_size(const nmc_chain* chain);
NMC_API double nmc_chain_system_coupling(const nmc_chain* chain);

/* omega_chain: N entries; coupling: N-1 entries (either may be NULL). */
NMC_API nmc_status nmc_chain_get(const nmc_chain* chain, double* omega_chain,
                                 double* coupling);

/* Row-major N*N orthogonal transform. */
NMC_API nmc_status nmc_chain_transform(const nmc_chain* chain, double* o);

/* X0 = O q0, Xdot0 = O qdot0; all arrays length N. */
NMC_API nmc_status nmc_chain_map_state(const nmc_chain* chain, const double* q0,
                                       const double* qdot0, double* X0, double* Xdot0);

/* ---- memory kernels ----------------------------------------------------- */

NMC_API nmc_kernel* nmc_kernel_tracer(double omega);
NMC_API nmc_kernel* nmc_kernel_next(const nmc_kernel* kernel, double omega_i);
NMC_API void nmc_kernel_free(nmc_kernel* kernel);
NMC_API int nmc_kernel_level(const nmc_kernel* kernel);
NMC_API size_t nmc_kernel_terms(const nmc_kernel* kernel);
NMC_API nmc_status nmc_kernel_get(const nmc_kernel* kernel, double* amplitude,
                                  double* frequency);
NMC_API nmc_status nmc_kernel_sample(const nmc_kernel* kernel, double dt, size_t samples,
                                     double* out);

/* Trapezoidal evaluation of the nesting convolution on a sampled kernel. */
NMC_API nmc_status nmc_kernel_quadrature(const double* k_prev, size_t samples, double dt,
                                         double omega_i, double* out);

/* ---- dynamics ------------------------------------------------------------ */

#define NMC_METHOD_VELOCITY_VERLET 0
#define NMC_METHOD_RK4 1

/* Direct integration of the independent-oscillator equations. x_out has
 * `samples` entries; modes_out (optional) is N x samples row-major;
 * energy_drift (optional) receives the worst relative energy deviation. */
NMC_API nmc_status nmc_simulate_io(const nmc_bath* bath, double system_omega, double x0,
                                   double v0, const double* q0, const double* qdot0,
                                   double dt, size_t samples, int method, double* x_out,
                                   double* modes_out, double* energy_drift);

NMC_API nmc_status nmc_simulate_chain(const nmc_chain* chain, double system_omega,
                                      double x0, double v0, const double* X0,
                                      const double* Xdot0, double dt, size_t samples,
                                      int method, double* x_out, double* modes_out,
                                      double* energy_drift);

/* Forcing term of the tracer integral equation. free_modes = 0 builds it
 * from integrated chain trajectories (exact); free_modes != 0 uses the
 * free-evolution modes (diagnostic). */
NMC_API nmc_status nmc_forcing(const nmc_chain* chain, double system_omega, double x0,
                               double v0, const double* X0, const double* Xdot0,
                               double dt, size_t samples, int free_modes, double* fn_out);

/* Resolvent frequencies and discriminant of the closed-form kernel. */
NMC_API nmc_status nmc_resolvent_params(double system_omega, double omega1,
                                        double coupling, double* mu1, double* mu2,
                                        double* delta);

/* Closed-form solution from a precomputed forcing term. */
NMC_API nmc_status nmc_solve_exact(const nmc_chain* chain, double system_omega,
                                   const double* forcing, double dt, size_t samples,
                                   double* x_out);

/* Trapezoidal Volterra marching for the same equation. */
NMC_API nmc_status nmc_solve_volterra(const nmc_chain* chain, double system_omega,
                                      const double* forcing, double dt, size_t samples,
                                      double* x_out);

/* ---- generalized Langevin check ------------------------------------------ */

/* Friction kernel terms eta(t) = sum a_k cos(w_k t); arrays length N. */
NMC_API nmc_status nmc_gle_eta(const nmc_bath* bath, double* amplitude, double* frequency);

/* Stochastic force on the grid. */
NMC_API nmc_status nmc_gle_force(const nmc_bath* bath, double system_omega, double x0,
                                 double v0, const double* q0, const double* qdot0,
                                 double dt, size_t samples, double* g_out);

/* Langevin residual of a sampled tracer trajectory; r_out has samples-2
 * entries covering the interior nodes. */
NMC_API nmc_status nmc_gle_residual(const nmc_bath* bath, double system_omega, double x0,
                                    double v0, const double* q0, const double* qdot0,
                                    const double* x, double dt, size_t samples,
                                    double* r_out);

#ifdef __cplusplus
}
#endif

#endif /* NMCHAIN_H */
