#include "nmchain/gle.hpp"

#include <cmath>

#include "nmchain/errors.hpp"
#include "nmchain/kernels.hpp"

namespace nmchain {

double GLEComponents::eta_at(double t) const {
    double acc = 0.0;
    for (const auto& term : eta) acc += term.amplitude * std::cos(term.frequency * t);
    return acc;
}

double GLEComponents::eta_zero() const {
    double acc = 0.0;
    for (const auto& term : eta) acc += term.amplitude;
    return acc;
}

GLEComponents build_gle(const IOBath& bath, const SystemOscillator& sys,
                        const PhaseState& phase, const Grid& grid) {
    (void)sys; // the force and kernel depend on the bath and initial data only
    const std::size_t n = bath.size();
    if (bath.c.size() != n)
        throw dimension_error("build_gle: malformed bath");
    if (phase.q0.size() != n || phase.qdot0.size() != n)
        throw dimension_error("build_gle: phase-space dimension does not match bath");
    for (double w : bath.omega)
        if (!(w > 0.0)) throw error("build_gle: bath frequencies must be positive");

    GLEComponents out;
    out.eta.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = bath.omega[k];
        out.eta.push_back({bath.c[k] * bath.c[k] / (w * w), w});
    }

    out.g = make_trajectory(grid);
    for (std::size_t j = 0; j < out.g.values.size(); ++j) {
        const double t = out.g.time(j);
        double val = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            val += bath.c[k] * free_term(bath.omega[k], phase.q0[k], phase.qdot0[k], t);
        val -= out.eta_at(t) * phase.x0;
        out.g.values[j] = val;
    }
    return out;
}

Trajectory gle_residual(const Trajectory& x, const GLEComponents& components,
                        const SystemOscillator& sys) {
    check_grid(x);
    check_same_grid(x, components.g);
    const std::size_t n = x.values.size();
    if (n < 3)
        throw error("gle_residual: need at least 3 samples for finite differences");
    const double dt = x.dt;

    // x' on every node: centered in the interior, one-sided second order at
    // the ends (only the left end feeds the convolution).
    Trajectory xdot;
    xdot.t0 = x.t0;
    xdot.dt = dt;
    xdot.values.resize(n);
    xdot.values[0] = (-3.0 * x.values[0] + 4.0 * x.values[1] - x.values[2]) / (2.0 * dt);
    for (std::size_t j = 1; j + 1 < n; ++j)
        xdot.values[j] = (x.values[j + 1] - x.values[j - 1]) / (2.0 * dt);
    xdot.values[n - 1] =
        (3.0 * x.values[n - 1] - 4.0 * x.values[n - 2] + x.values[n - 3]) / (2.0 * dt);

    const Trajectory friction = convolve_cosine_terms(components.eta, xdot);

    const double stiffness = sys.Omega * sys.Omega - components.eta_zero();

    Trajectory r;
    r.t0 = x.t0 + dt;
    r.dt = dt;
    r.values.resize(n - 2);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double xddot = (x.values[j + 1] - 2.0 * x.values[j] + x.values[j - 1]) / (dt * dt);
        r.values[j - 1] = xddot + friction.values[j] + stiffness * x.values[j] - components.g.values[j];
    }
    return r;
}

} // namespace nmchain
