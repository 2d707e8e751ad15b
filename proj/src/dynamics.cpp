#include "nmchain/dynamics.hpp"

#include <cmath>
#include <utility>

#include "nmchain/errors.hpp"
#include "nmchain/kernels.hpp"

namespace nmchain {

namespace {

constexpr double runaway_limit = 1e12;

std::size_t step_count(const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
        throw error("integrator: dt and t_end must be positive");
    const double steps = cfg.t_end / cfg.dt;
    if (steps > 1e8)
        throw error("integrator: t_end/dt exceeds 1e8 steps");
    return static_cast<std::size_t>(std::llround(steps));
}

// Fixed-step integration of z'' = -A z for a linear accelerator functor
// acc(z, out). Positions are recorded every step; energy(z, v) monitors the
// conserved quadratic form.
template <typename Accel, typename Energy>
IntegrationResult integrate_linear(std::vector<double> z, std::vector<double> v,
                                   Accel&& acc, Energy&& energy,
                                   const IntegratorConfig& cfg) {
    const std::size_t dim = z.size();
    const std::size_t steps = step_count(cfg);
    const double dt = cfg.dt;

    IntegrationResult result;
    result.x.t0 = 0.0;
    result.x.dt = dt;
    result.x.values.resize(steps + 1);
    result.modes.resize(dim - 1);
    for (auto& m : result.modes) {
        m.t0 = 0.0;
        m.dt = dt;
        m.values.resize(steps + 1);
    }

    auto record = [&](std::size_t idx) {
        result.x.values[idx] = z[0];
        for (std::size_t i = 1; i < dim; ++i) result.modes[i - 1].values[idx] = z[i];
    };
    record(0);

    const double e0 = energy(z, v);
    const double e_scale = std::abs(e0) > 1e-30 ? std::abs(e0) : 1.0;
    double drift = 0.0;

    std::vector<double> a(dim), a_new(dim);
    std::vector<double> k1z(dim), k1v(dim), k2z(dim), k2v(dim), k3z(dim), k3v(dim),
        k4z(dim), k4v(dim), tmp(dim), tmpv(dim);

    acc(z, a);
    for (std::size_t s = 1; s <= steps; ++s) {
        if (cfg.method == IntegratorMethod::VelocityVerlet) {
            for (std::size_t i = 0; i < dim; ++i)
                z[i] += dt * v[i] + 0.5 * dt * dt * a[i];
            acc(z, a_new);
            for (std::size_t i = 0; i < dim; ++i)
                v[i] += 0.5 * dt * (a[i] + a_new[i]);
            std::swap(a, a_new);
        } else {
            // classic RK4 on (z, v)
            for (std::size_t i = 0; i < dim; ++i) { k1z[i] = v[i]; }
            acc(z, k1v);
            for (std::size_t i = 0; i < dim; ++i) {
                tmp[i] = z[i] + 0.5 * dt * k1z[i];
                tmpv[i] = v[i] + 0.5 * dt * k1v[i];
            }
            acc(tmp, k2v);
            for (std::size_t i = 0; i < dim; ++i) k2z[i] = tmpv[i];
            for (std::size_t i = 0; i < dim; ++i) {
                tmp[i] = z[i] + 0.5 * dt * k2z[i];
                tmpv[i] = v[i] + 0.5 * dt * k2v[i];
            }
            acc(tmp, k3v);
            for (std::size_t i = 0; i < dim; ++i) k3z[i] = tmpv[i];
            for (std::size_t i = 0; i < dim; ++i) {
                tmp[i] = z[i] + dt * k3z[i];
                tmpv[i] = v[i] + dt * k3v[i];
            }
            acc(tmp, k4v);
            for (std::size_t i = 0; i < dim; ++i) k4z[i] = tmpv[i];
            for (std::size_t i = 0; i < dim; ++i) {
                z[i] += dt / 6.0 * (k1z[i] + 2.0 * k2z[i] + 2.0 * k3z[i] + k4z[i]);
                v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
            }
            acc(z, a);
        }

        if (std::abs(z[0]) > runaway_limit)
            throw instability_error("integration aborted: |x| exceeded 1e12 at t = " +
                                    std::to_string(dt * static_cast<double>(s)));
        record(s);
        drift = std::max(drift, std::abs(energy(z, v) - e0) / e_scale);
    }

    result.energy_drift = drift;
    result.final_position = std::move(z);
    result.final_velocity = std::move(v);
    return result;
}

} // namespace

IntegrationResult integrate_io(const IOBath& bath, const SystemOscillator& sys,
                               const PhaseState& phase, const IntegratorConfig& cfg) {
    const std::size_t n = bath.size();
    if (bath.c.size() != n)
        throw dimension_error("integrate_io: malformed bath");
    if (phase.q0.size() != n || phase.qdot0.size() != n)
        throw dimension_error("integrate_io: phase-space dimension does not match bath");

    std::vector<double> z(n + 1), v(n + 1);
    z[0] = phase.x0;
    v[0] = phase.v0;
    for (std::size_t k = 0; k < n; ++k) {
        z[k + 1] = phase.q0[k];
        v[k + 1] = phase.qdot0[k];
    }

    const double w2sys = sys.Omega * sys.Omega;
    auto acc = [&](const std::vector<double>& q, std::vector<double>& out) {
        double coupling_sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) coupling_sum += bath.c[k] * q[k + 1];
        out[0] = -w2sys * q[0] + coupling_sum;
        for (std::size_t k = 0; k < n; ++k)
            out[k + 1] = -bath.omega[k] * bath.omega[k] * q[k + 1] + bath.c[k] * q[0];
    };
    auto energy = [&](const std::vector<double>& q, const std::vector<double>& p) {
        double e = 0.5 * (p[0] * p[0] + w2sys * q[0] * q[0]);
        for (std::size_t k = 0; k < n; ++k) {
            e += 0.5 * (p[k + 1] * p[k + 1] + bath.omega[k] * bath.omega[k] * q[k + 1] * q[k + 1]);
            e -= bath.c[k] * q[0] * q[k + 1];
        }
        return e;
    };
    return integrate_linear(std::move(z), std::move(v), acc, energy, cfg);
}

IntegrationResult integrate_chain(const ChainBath& chain, const SystemOscillator& sys,
                                  double x0, double v0, const ChainState& state,
                                  const IntegratorConfig& cfg) {
    const std::size_t n = chain.size();
    if (chain.coupling.size() + 1 != n)
        throw dimension_error("integrate_chain: coupling list must have N-1 entries");
    if (state.X0.size() != n || state.Xdot0.size() != n)
        throw dimension_error("integrate_chain: chain state does not match chain length");

    std::vector<double> z(n + 1), v(n + 1);
    z[0] = x0;
    v[0] = v0;
    for (std::size_t k = 0; k < n; ++k) {
        z[k + 1] = state.X0[k];
        v[k + 1] = state.Xdot0[k];
    }

    const double w2sys = sys.Omega * sys.Omega;
    const double d0 = chain.system_coupling;
    auto acc = [&](const std::vector<double>& q, std::vector<double>& out) {
        out[0] = -w2sys * q[0] + d0 * q[1];
        for (std::size_t i = 1; i <= n; ++i) {
            double f = -chain.omega_chain[i - 1] * chain.omega_chain[i - 1] * q[i];
            f += (i == 1 ? d0 : chain.coupling[i - 2]) * q[i - 1];
            if (i < n) f += chain.coupling[i - 1] * q[i + 1];
            out[i] = f;
        }
    };
    auto energy = [&](const std::vector<double>& q, const std::vector<double>& p) {
        double e = 0.5 * (p[0] * p[0] + w2sys * q[0] * q[0]);
        e -= d0 * q[0] * q[1];
        for (std::size_t i = 1; i <= n; ++i) {
            e += 0.5 * (p[i] * p[i] +
                        chain.omega_chain[i - 1] * chain.omega_chain[i - 1] * q[i] * q[i]);
            if (i < n) e -= chain.coupling[i - 1] * q[i] * q[i + 1];
        }
        return e;
    };
    return integrate_linear(std::move(z), std::move(v), acc, energy, cfg);
}

ResolventParams resolvent_params(const SystemOscillator& sys, const ChainBath& chain) {
    if (chain.size() == 0)
        throw dimension_error("resolvent_params: empty chain");
    if (!(sys.Omega > 0.0) || !(chain.omega_chain[0] > 0.0))
        throw error("resolvent_params: tracer and first-mode frequencies must be positive");

    const double w2 = sys.Omega * sys.Omega;
    const double w12 = chain.omega_chain[0] * chain.omega_chain[0];
    const double d = chain.system_coupling;

    ResolventParams p;
    p.delta = (w2 - w12) * (w2 - w12) + 4.0 * d * d;
    const double root = std::sqrt(p.delta);
    const double mu1_sq = 0.5 * (w2 + w12 + root);
    const double mu2_sq = 0.5 * (w2 + w12 - root);
    if (mu2_sq <= 0.0)
        throw multivalued_error(
            "resolvent_params: coupling too strong (D^2 >= Omega^2 Omega_1^2); "
            "the solution kernel is not a real two-frequency oscillation");
    p.mu1 = std::sqrt(mu1_sq);
    p.mu2 = std::sqrt(mu2_sq);
    if (p.mu1 - p.mu2 <= 1e-12 * p.mu1)
        throw degenerate_resolvent_error(
            "resolvent_params: the two kernel frequencies coincide; "
            "use solve_volterra or direct integration");
    return p;
}

Trajectory solve_exact(const Trajectory& forcing, const SystemOscillator& sys,
                       const ChainBath& chain, const ResolventParams& params) {
    check_grid(forcing);
    if (!(sys.Omega > 0.0))
        throw error("solve_exact: tracer frequency must be positive");
    const double d = chain.system_coupling;
    const double pref = d * d / (params.mu2 * params.mu2 - params.mu1 * params.mu1);
    std::vector<HarmonicTerm> kernel{
        {pref / params.mu1, params.mu1},
        {-pref / params.mu2, params.mu2},
    };
    Trajectory out = convolve_sine_terms(kernel, forcing);
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] += forcing.values[j];
    return out;
}

namespace {

// Marching with a sampled kernel (K(0) = 0 keeps it explicit); used when the
// closed-form K_1 is degenerate.
Trajectory volterra_sampled(const Trajectory& forcing, const Trajectory& kernel, double coef) {
    const std::size_t n = forcing.values.size();
    const double dt = forcing.dt;
    Trajectory x;
    x.t0 = forcing.t0;
    x.dt = dt;
    x.values.resize(n);
    x.values[0] = forcing.values[0];
    for (std::size_t j = 1; j < n; ++j) {
        double acc = 0.5 * kernel.values[j] * x.values[0];
        for (std::size_t i = 1; i < j; ++i)
            acc += kernel.values[j - i] * x.values[i];
        x.values[j] = forcing.values[j] + coef * dt * acc;
    }
    return x;
}

} // namespace

Trajectory solve_volterra(const Trajectory& forcing, const SystemOscillator& sys,
                          const ChainBath& chain) {
    check_grid(forcing);
    if (chain.size() == 0)
        throw dimension_error("solve_volterra: empty chain");

    const double coef = chain.system_coupling * chain.system_coupling /
                        (sys.Omega * chain.omega_chain[0]);

    KernelSeries k1;
    try {
        k1 = next_kernel(tracer_kernel(sys.Omega), chain.omega_chain[0]);
    } catch (const near_degenerate_error&) {
        // Omega ~ Omega_1: evaluate K_1 by quadrature instead.
        const Trajectory k0 = tracer_kernel(sys.Omega).sample(forcing.grid());
        const Trajectory k1_samples = kernel_quadrature(k0, chain.omega_chain[0]);
        return volterra_sampled(forcing, k1_samples, coef);
    }

    const std::size_t n = forcing.values.size();
    const double dt = forcing.dt;
    const std::size_t m = k1.terms.size();

    Trajectory x;
    x.t0 = forcing.t0;
    x.dt = dt;
    x.values.resize(n);
    x.values[0] = forcing.values[0];

    // Running trapezoidal prefixes of cos(nu s) x(s) and sin(nu s) x(s),
    // complete through the previous node; K_1(0) = 0 makes the marching
    // explicit (the current node cancels between the two prefixes).
    std::vector<double> ic(m, 0.0), is(m, 0.0);
    std::vector<double> cos_prev(m), sin_prev(m);
    for (std::size_t q = 0; q < m; ++q) {
        cos_prev[q] = std::cos(k1.terms[q].frequency * forcing.t0);
        sin_prev[q] = std::sin(k1.terms[q].frequency * forcing.t0);
    }

    for (std::size_t j = 1; j < n; ++j) {
        const double t = forcing.t0 + dt * static_cast<double>(j);
        double conv = 0.0;
        for (std::size_t q = 0; q < m; ++q) {
            const double nu = k1.terms[q].frequency;
            const double cos_t = std::cos(nu * t);
            const double sin_t = std::sin(nu * t);
            const double half_prev = 0.5 * dt * x.values[j - 1];
            const double icj = ic[q] + half_prev * cos_prev[q];
            const double isj = is[q] + half_prev * sin_prev[q];
            conv += k1.terms[q].amplitude * (sin_t * icj - cos_t * isj);
        }
        x.values[j] = forcing.values[j] + coef * conv;

        for (std::size_t q = 0; q < m; ++q) {
            const double nu = k1.terms[q].frequency;
            const double cos_t = std::cos(nu * t);
            const double sin_t = std::sin(nu * t);
            ic[q] += 0.5 * dt * (cos_prev[q] * x.values[j - 1] + cos_t * x.values[j]);
            is[q] += 0.5 * dt * (sin_prev[q] * x.values[j - 1] + sin_t * x.values[j]);
            cos_prev[q] = cos_t;
            sin_prev[q] = sin_t;
        }
    }
    return x;
}

} // namespace nmchain
