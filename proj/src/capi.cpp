#include "nmchain.h"

#include <cstring>
#include <exception>
#include <string>

#include "nmchain/bath.hpp"
#include "nmchain/chain.hpp"
#include "nmchain/dynamics.hpp"
#include "nmchain/errors.hpp"
#include "nmchain/forcing.hpp"
#include "nmchain/gle.hpp"
#include "nmchain/kernels.hpp"
#include "nmchain/trajectory.hpp"

using namespace nmchain;

struct nmc_bath {
    IOBath bath;
};

struct nmc_chain {
    ChainBath chain;
    ChainTransform transform;
    IOBath source; // retained for the free-mode diagnostic path
};

struct nmc_kernel {
    KernelSeries kernel;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& what) { g_last_error = what; }

nmc_status classify(const std::exception& ex) {
    set_error(ex.what());
    if (dynamic_cast<const breakdown_error*>(&ex)) return NMC_ERR_BREAKDOWN;
    if (dynamic_cast<const near_degenerate_error*>(&ex)) return NMC_ERR_NEAR_DEGENERATE;
    if (dynamic_cast<const multivalued_error*>(&ex)) return NMC_ERR_MULTIVALUED;
    if (dynamic_cast<const degenerate_resolvent_error*>(&ex)) return NMC_ERR_DEGENERATE_RESOLVENT;
    if (dynamic_cast<const dimension_error*>(&ex)) return NMC_ERR_DIMENSION;
    if (dynamic_cast<const instability_error*>(&ex)) return NMC_ERR_UNSTABLE;
    return NMC_ERR_INVALID;
}

template <typename Fn>
nmc_status guarded(Fn&& fn) {
    try {
        fn();
        return NMC_OK;
    } catch (const std::exception& ex) {
        return classify(ex);
    } catch (...) {
        set_error("unknown error");
        return NMC_ERR_INVALID;
    }
}

IntegratorConfig make_config(double dt, size_t samples, int method) {
    if (samples < 2) throw error("at least 2 samples required");
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = dt * static_cast<double>(samples - 1);
    cfg.method = (method == NMC_METHOD_RK4) ? IntegratorMethod::Rk4
                                            : IntegratorMethod::VelocityVerlet;
    return cfg;
}

void copy_result(const IntegrationResult& res, size_t samples, double* x_out,
                 double* modes_out, double* energy_drift) {
    std::memcpy(x_out, res.x.values.data(), samples * sizeof(double));
    if (modes_out) {
        for (size_t i = 0; i < res.modes.size(); ++i)
            std::memcpy(modes_out + i * samples, res.modes[i].values.data(),
                        samples * sizeof(double));
    }
    if (energy_drift) *energy_drift = res.energy_drift;
}

} // namespace

extern "C" {

const char* nmc_status_name(nmc_status status) {
    switch (status) {
        case NMC_OK: return "ok";
        case NMC_ERR_INVALID: return "invalid argument";
        case NMC_ERR_BREAKDOWN: return "chain breakdown";
        case NMC_ERR_NEAR_DEGENERATE: return "near-degenerate frequencies";
        case NMC_ERR_MULTIVALUED: return "resolvent frequencies not real";
        case NMC_ERR_DEGENERATE_RESOLVENT: return "degenerate resolvent";
        case NMC_ERR_DIMENSION: return "dimension mismatch";
        case NMC_ERR_UNSTABLE: return "unstable trajectory";
    }
    return "unknown";
}

const char* nmc_last_error(void) { return g_last_error.c_str(); }

/* ---- bath ------------------------------------------------------------- */

nmc_bath* nmc_bath_create(const double* omega, const double* c, size_t n) {
    if (!omega || !c || n == 0) {
        set_error("nmc_bath_create: null array or empty bath");
        return nullptr;
    }
    auto* handle = new nmc_bath;
    handle->bath.omega.assign(omega, omega + n);
    handle->bath.c.assign(c, c + n);
    return handle;
}

nmc_bath* nmc_bath_ohmic(double coupling_scale, double cutoff, size_t n_modes, int log_grid) {
    nmc_bath* handle = nullptr;
    const nmc_status st = guarded([&] {
        SpectralDensitySpec spec;
        spec.kind = SpectralKind::OhmicExpCutoff;
        spec.coupling_scale = coupling_scale;
        spec.cutoff = cutoff;
        spec.n_modes = n_modes;
        spec.grid = log_grid ? GridKind::Logarithmic : GridKind::Linear;
        handle = new nmc_bath{discretize_spectral_density(spec)};
    });
    return st == NMC_OK ? handle : nullptr;
}

void nmc_bath_free(nmc_bath* bath) { delete bath; }

size_t nmc_bath_size(const nmc_bath* bath) { return bath ? bath->bath.size() : 0; }

nmc_status nmc_bath_get(const nmc_bath* bath, double* omega, double* c) {
    if (!bath) {
        set_error("nmc_bath_get: null handle");
        return NMC_ERR_INVALID;
    }
    const size_t n = bath->bath.size();
    if (omega) std::memcpy(omega, bath->bath.omega.data(), n * sizeof(double));
    if (c) std::memcpy(c, bath->bath.c.data(), n * sizeof(double));
    return NMC_OK;
}

int nmc_bath_validate(const nmc_bath* bath, char* msg, size_t cap) {
    if (!bath) return -1;
    const ValidationReport report = validate_bath(bath->bath);
    if (msg && cap > 0) {
        std::string joined;
        for (const auto& issue : report.issues) {
            if (!joined.empty()) joined += "; ";
            joined += issue.message + " (index " + std::to_string(issue.index) + ")";
        }
        std::strncpy(msg, joined.c_str(), cap - 1);
        msg[cap - 1] = '\0';
    }
    return static_cast<int>(report.issues.size());
}

int nmc_bath_stable(const nmc_bath* bath, double system_omega) {
    if (!bath) return -1;
    int verdict = -1;
    const nmc_status st = guarded([&] {
        verdict = stability_check(bath->bath, SystemOscillator{system_omega}) ? 1 : 0;
    });
    return st == NMC_OK ? verdict : -1;
}

nmc_bath* nmc_bath_scaled(const nmc_bath* bath, double factor) {
    if (!bath) {
        set_error("nmc_bath_scaled: null handle");
        return nullptr;
    }
    return new nmc_bath{scale_couplings(bath->bath, factor)};
}

/* ---- chain transform --------------------------------------------------- */

nmc_chain* nmc_chain_solve(const nmc_bath* bath, nmc_status* status, size_t* effective_length) {
    if (status) *status = NMC_OK;
    if (effective_length) *effective_length = 0;
    if (!bath) {
        set_error("nmc_chain_solve: null handle");
        if (status) *status = NMC_ERR_INVALID;
        return nullptr;
    }
    try {
        IepResult res = solve_iep(bath->bath);
        return new nmc_chain{std::move(res.chain), std::move(res.transform), bath->bath};
    } catch (const breakdown_error& ex) {
        set_error(ex.what());
        if (status) *status = NMC_ERR_BREAKDOWN;
        if (effective_length) *effective_length = ex.effective_length();
        return nullptr;
    } catch (const std::exception& ex) {
        if (status) *status = classify(ex);
        return nullptr;
    }
}

void nmc_chain_free(nmc_chain* chain) { delete chain; }

size_t nmc_chain_size(const nmc_chain* chain) { return chain ? chain->chain.size() : 0; }

double nmc_chain_system_coupling(const nmc_chain* chain) {
    return chain ? chain->chain.system_coupling : 0.0;
}

nmc_status nmc_chain_get(const nmc_chain* chain, double* omega_chain, double* coupling) {
    if (!chain) {
        set_error("nmc_chain_get: null handle");
        return NMC_ERR_INVALID;
    }
    const size_t n = chain->chain.size();
    if (omega_chain)
        std::memcpy(omega_chain, chain->chain.omega_chain.data(), n * sizeof(double));
    if (coupling && n > 1)
        std::memcpy(coupling, chain->chain.coupling.data(), (n - 1) * sizeof(double));
    return NMC_OK;
}

nmc_status nmc_chain_transform(const nmc_chain* chain, double* o) {
    if (!chain || !o) {
        set_error("nmc_chain_transform: null argument");
        return NMC_ERR_INVALID;
    }
    const auto& data = chain->transform.data();
    std::memcpy(o, data.data(), data.size() * sizeof(double));
    return NMC_OK;
}

nmc_status nmc_chain_map_state(const nmc_chain* chain, const double* q0, const double* qdot0,
                               double* X0, double* Xdot0) {
    if (!chain || !q0 || !qdot0 || !X0 || !Xdot0) {
        set_error("nmc_chain_map_state: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const size_t n = chain->chain.size();
        PhaseState phase;
        phase.q0.assign(q0, q0 + n);
        phase.qdot0.assign(qdot0, qdot0 + n);
        const ChainState state = map_state(chain->transform, phase);
        std::memcpy(X0, state.X0.data(), n * sizeof(double));
        std::memcpy(Xdot0, state.Xdot0.data(), n * sizeof(double));
    });
}

/* ---- memory kernels ----------------------------------------------------- */

nmc_kernel* nmc_kernel_tracer(double omega) {
    nmc_kernel* handle = nullptr;
    const nmc_status st = guarded([&] { handle = new nmc_kernel{tracer_kernel(omega)}; });
    return st == NMC_OK ? handle : nullptr;
}

nmc_kernel* nmc_kernel_next(const nmc_kernel* kernel, double omega_i) {
    if (!kernel) {
        set_error("nmc_kernel_next: null handle");
        return nullptr;
    }
    nmc_kernel* handle = nullptr;
    const nmc_status st =
        guarded([&] { handle = new nmc_kernel{next_kernel(kernel->kernel, omega_i)}; });
    return st == NMC_OK ? handle : nullptr;
}

void nmc_kernel_free(nmc_kernel* kernel) { delete kernel; }

int nmc_kernel_level(const nmc_kernel* kernel) { return kernel ? kernel->kernel.level : -1; }

size_t nmc_kernel_terms(const nmc_kernel* kernel) {
    return kernel ? kernel->kernel.terms.size() : 0;
}

nmc_status nmc_kernel_get(const nmc_kernel* kernel, double* amplitude, double* frequency) {
    if (!kernel) {
        set_error("nmc_kernel_get: null handle");
        return NMC_ERR_INVALID;
    }
    for (size_t i = 0; i < kernel->kernel.terms.size(); ++i) {
        if (amplitude) amplitude[i] = kernel->kernel.terms[i].amplitude;
        if (frequency) frequency[i] = kernel->kernel.terms[i].frequency;
    }
    return NMC_OK;
}

nmc_status nmc_kernel_sample(const nmc_kernel* kernel, double dt, size_t samples, double* out) {
    if (!kernel || !out) {
        set_error("nmc_kernel_sample: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const Trajectory t = kernel->kernel.sample(Grid{dt, samples});
        std::memcpy(out, t.values.data(), samples * sizeof(double));
    });
}

nmc_status nmc_kernel_quadrature(const double* k_prev, size_t samples, double dt,
                                 double omega_i, double* out) {
    if (!k_prev || !out) {
        set_error("nmc_kernel_quadrature: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        Trajectory prev;
        prev.t0 = 0.0;
        prev.dt = dt;
        prev.values.assign(k_prev, k_prev + samples);
        const Trajectory next = kernel_quadrature(prev, omega_i);
        std::memcpy(out, next.values.data(), samples * sizeof(double));
    });
}

/* ---- dynamics ------------------------------------------------------------ */

nmc_status nmc_simulate_io(const nmc_bath* bath, double system_omega, double x0, double v0,
                           const double* q0, const double* qdot0, double dt, size_t samples,
                           int method, double* x_out, double* modes_out, double* energy_drift) {
    if (!bath || !q0 || !qdot0 || !x_out) {
        set_error("nmc_simulate_io: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const size_t n = bath->bath.size();
        PhaseState phase;
        phase.x0 = x0;
        phase.v0 = v0;
        phase.q0.assign(q0, q0 + n);
        phase.qdot0.assign(qdot0, qdot0 + n);
        const IntegrationResult res = integrate_io(bath->bath, SystemOscillator{system_omega},
                                                   phase, make_config(dt, samples, method));
        copy_result(res, samples, x_out, modes_out, energy_drift);
    });
}

nmc_status nmc_simulate_chain(const nmc_chain* chain, double system_omega, double x0, double v0,
                              const double* X0, const double* Xdot0, double dt, size_t samples,
                              int method, double* x_out, double* modes_out,
                              double* energy_drift) {
    if (!chain || !X0 || !Xdot0 || !x_out) {
        set_error("nmc_simulate_chain: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const size_t n = chain->chain.size();
        ChainState state;
        state.X0.assign(X0, X0 + n);
        state.Xdot0.assign(Xdot0, Xdot0 + n);
        const IntegrationResult res =
            integrate_chain(chain->chain, SystemOscillator{system_omega}, x0, v0, state,
                            make_config(dt, samples, method));
        copy_result(res, samples, x_out, modes_out, energy_drift);
    });
}

nmc_status nmc_forcing(const nmc_chain* chain, double system_omega, double x0, double v0,
                       const double* X0, const double* Xdot0, double dt, size_t samples,
                       int free_modes, double* fn_out) {
    if (!chain || !X0 || !Xdot0 || !fn_out) {
        set_error("nmc_forcing: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const size_t n = chain->chain.size();
        const SystemOscillator sys{system_omega};
        ChainState state;
        state.X0.assign(X0, X0 + n);
        state.Xdot0.assign(Xdot0, Xdot0 + n);
        const Grid grid{dt, samples};

        std::vector<Trajectory> modes;
        if (free_modes) {
            PhaseState phase;
            phase.x0 = x0;
            phase.v0 = v0;
            phase.q0 = chain->transform.apply_transpose(state.X0);
            phase.qdot0 = chain->transform.apply_transpose(state.Xdot0);
            modes = free_chain_modes(chain->transform, chain->source, phase, grid);
        } else {
            IntegratorConfig cfg = make_config(dt, samples, NMC_METHOD_RK4);
            modes = integrate_chain(chain->chain, sys, x0, v0, state, cfg).modes;
        }
        const Trajectory ftilde =
            accumulate_free_forcing(chain->chain, sys, x0, v0, state, grid);
        const Trajectory fn = assemble_forcing(chain->chain, sys, modes, ftilde);
        std::memcpy(fn_out, fn.values.data(), samples * sizeof(double));
    });
}

nmc_status nmc_resolvent_params(double system_omega, double omega1, double coupling,
                                double* mu1, double* mu2, double* delta) {
    return guarded([&] {
        ChainBath stub;
        stub.omega_chain = {omega1};
        stub.system_coupling = coupling;
        const ResolventParams p = resolvent_params(SystemOscillator{system_omega}, stub);
        if (mu1) *mu1 = p.mu1;
        if (mu2) *mu2 = p.mu2;
        if (delta) *delta = p.delta;
    });
}

nmc_status nmc_solve_exact(const nmc_chain* chain, double system_omega, const double* forcing,
                           double dt, size_t samples, double* x_out) {
    if (!chain || !forcing || !x_out) {
        set_error("nmc_solve_exact: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const SystemOscillator sys{system_omega};
        Trajectory fn;
        fn.t0 = 0.0;
        fn.dt = dt;
        fn.values.assign(forcing, forcing + samples);
        const ResolventParams p = resolvent_params(sys, chain->chain);
        const Trajectory x = solve_exact(fn, sys, chain->chain, p);
        std::memcpy(x_out, x.values.data(), samples * sizeof(double));
    });
}

nmc_status nmc_solve_volterra(const nmc_chain* chain, double system_omega,
                              const double* forcing, double dt, size_t samples,
                              double* x_out) {
    if (!chain || !forcing || !x_out) {
        set_error("nmc_solve_volterra: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        Trajectory fn;
        fn.t0 = 0.0;
        fn.dt = dt;
        fn.values.assign(forcing, forcing + samples);
        const Trajectory x = solve_volterra(fn, SystemOscillator{system_omega}, chain->chain);
        std::memcpy(x_out, x.values.data(), samples * sizeof(double));
    });
}

/* ---- generalized Langevin check ------------------------------------------ */

nmc_status nmc_gle_eta(const nmc_bath* bath, double* amplitude, double* frequency) {
    if (!bath) {
        set_error("nmc_gle_eta: null handle");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const size_t n = bath->bath.size();
        PhaseState phase;
        phase.q0.assign(n, 0.0);
        phase.qdot0.assign(n, 0.0);
        const GLEComponents comp =
            build_gle(bath->bath, SystemOscillator{1.0}, phase, Grid{1.0, 2});
        for (size_t k = 0; k < comp.eta.size(); ++k) {
            if (amplitude) amplitude[k] = comp.eta[k].amplitude;
            if (frequency) frequency[k] = comp.eta[k].frequency;
        }
    });
}

nmc_status nmc_gle_force(const nmc_bath* bath, double system_omega, double x0, double v0,
                         const double* q0, const double* qdot0, double dt, size_t samples,
                         double* g_out) {
    if (!bath || !q0 || !qdot0 || !g_out) {
        set_error("nmc_gle_force: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const size_t n = bath->bath.size();
        PhaseState phase;
        phase.x0 = x0;
        phase.v0 = v0;
        phase.q0.assign(q0, q0 + n);
        phase.qdot0.assign(qdot0, qdot0 + n);
        const GLEComponents comp =
            build_gle(bath->bath, SystemOscillator{system_omega}, phase, Grid{dt, samples});
        std::memcpy(g_out, comp.g.values.data(), samples * sizeof(double));
    });
}

nmc_status nmc_gle_residual(const nmc_bath* bath, double system_omega, double x0, double v0,
                            const double* q0, const double* qdot0, const double* x, double dt,
                            size_t samples, double* r_out) {
    if (!bath || !q0 || !qdot0 || !x || !r_out) {
        set_error("nmc_gle_residual: null argument");
        return NMC_ERR_INVALID;
    }
    return guarded([&] {
        const size_t n = bath->bath.size();
        const SystemOscillator sys{system_omega};
        PhaseState phase;
        phase.x0 = x0;
        phase.v0 = v0;
        phase.q0.assign(q0, q0 + n);
        phase.qdot0.assign(qdot0, qdot0 + n);
        const GLEComponents comp = build_gle(bath->bath, sys, phase, Grid{dt, samples});
        Trajectory traj;
        traj.t0 = 0.0;
        traj.dt = dt;
        traj.values.assign(x, x + samples);
        const Trajectory r = gle_residual(traj, comp, sys);
        std::memcpy(r_out, r.values.data(), (samples - 2) * sizeof(double));
    });
}

} /* extern "C" */
