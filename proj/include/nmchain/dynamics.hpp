#pragma once

#include <cstddef>
#include <vector>

#include "nmchain/bath.hpp"
#include "nmchain/chain.hpp"
#include "nmchain/trajectory.hpp"

namespace nmchain {

enum class IntegratorMethod { VelocityVerlet, Rk4 };

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    IntegratorMethod method = IntegratorMethod::VelocityVerlet;
};

// Direct integration output: tracer and mode positions on the step grid,
// the worst relative deviation of the conserved energy, and the final
// phase-space point (tracer first) for reversibility checks.
struct IntegrationResult {
    Trajectory x;
    std::vector<Trajectory> modes;
    double energy_drift = 0.0;
    std::vector<double> final_position;
    std::vector<double> final_velocity;
};

IntegrationResult integrate_io(const IOBath& bath, const SystemOscillator& sys,
                               const PhaseState& phase, const IntegratorConfig& cfg);

IntegrationResult integrate_chain(const ChainBath& chain, const SystemOscillator& sys,
                                  double x0, double v0, const ChainState& state,
                                  const IntegratorConfig& cfg);

// Frequencies of the closed-form solution kernel. The Volterra equation
//   x = (D^2/(Omega Omega_1)) conv(K_1, x) + F_N
// resolves through the factorization
//   (s^2 + Omega^2)(s^2 + Omega_1^2) - D^2 = (s^2 + mu_1^2)(s^2 + mu_2^2),
// i.e. mu_{1,2}^2 = (Omega^2 + Omega_1^2 +- sqrt(delta))/2 with
//   delta = (Omega^2 - Omega_1^2)^2 + 4 D^2,
// the normal-mode frequencies of the tracer + first-mode pair. Both are real
// and positive iff D^2 < Omega^2 Omega_1^2; otherwise the motion is unbounded
// and the oscillatory closed form does not apply (multivalued_error).
struct ResolventParams {
    double mu1 = 0.0;   // larger frequency
    double mu2 = 0.0;   // smaller frequency
    double delta = 0.0; // discriminant of the factorization
};

ResolventParams resolvent_params(const SystemOscillator& sys, const ChainBath& chain);

// Closed-form solution of the tracer integral equation:
//   x(t) = F_N(t) + D^2/(mu1 mu2 (mu2^2 - mu1^2))
//          * integral (mu2 sin(mu1 (t-s)) - mu1 sin(mu2 (t-s))) F_N(s) ds,
// evaluated by trapezoidal convolution. Symmetric under mu1 <-> mu2.
Trajectory solve_exact(const Trajectory& forcing, const SystemOscillator& sys,
                       const ChainBath& chain, const ResolventParams& params);

// Forward trapezoidal marching for the same Volterra equation of the second
// kind; works whether or not the resolvent factorization is oscillatory.
Trajectory solve_volterra(const Trajectory& forcing, const SystemOscillator& sys,
                          const ChainBath& chain);

} // namespace nmchain
