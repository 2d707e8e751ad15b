#pragma once

#include <vector>

#include "nmchain/bath.hpp"
#include "nmchain/trajectory.hpp"

namespace nmchain {

// Friction kernel and stochastic force of the generalized Langevin form of
// the tracer equation. Formally solving each bath oscillator and integrating
// the response by parts yields
//   x''(t) + integral eta(t-s) x'(s) ds + (Omega^2 - eta(0)) x(t) = g(t)
// with
//   eta(t) = sum_k (c_k^2/omega_k^2) cos(omega_k t)
//   g(t)   = sum_k c_k (q_k(0) cos(omega_k t) + qdot_k(0) sin(omega_k t)/omega_k)
//          - eta(t) x(0).
// The static kernel value eta(0) renormalizes the harmonic stiffness, which
// keeps g a function of initial data only. eta is even and |eta(t)| <= eta(0).
struct GLEComponents {
    std::vector<HarmonicTerm> eta; // cosine-sum friction kernel
    Trajectory g;                  // stochastic force on the grid

    double eta_at(double t) const;
    double eta_zero() const; // sum c_k^2/omega_k^2
};

GLEComponents build_gle(const IOBath& bath, const SystemOscillator& sys,
                        const PhaseState& phase, const Grid& grid);

// Residual of the Langevin form for a sampled tracer trajectory,
//   r(t) = x''(t) + integral eta(t-s) x'(s) ds + (Omega^2 - eta(0)) x(t) - g(t),
// with centered finite differences for the derivatives (second-order one-sided
// at t = 0 for x'). Defined on the interior nodes; a trajectory that solves
// the coupled equations drives r to zero at second order in dt.
Trajectory gle_residual(const Trajectory& x, const GLEComponents& components,
                        const SystemOscillator& sys);

} // namespace nmchain
