#pragma once

#include <cstddef>
#include <vector>

#include "nmchain/trajectory.hpp"

namespace nmchain {

// Relative tolerance below which two kernel frequencies are treated as a
// clash; the closed-form partial fractions are singular there.
inline constexpr double kernel_frequency_tol = 1e-9;

// Nested memory kernel represented as a finite sine sum,
//   K(tau) = sum_m a_m sin(nu_m tau),
// so K(0) = 0 exactly. Level i is built from level i-1 by convolution with
// sin(Omega_i tau):
//   K_i(tau) = integral over [0, tau] of K_{i-1}(tau - u) sin(Omega_i u) du,
// which maps a sin(nu tau) to
//   a*Omega_i/(Omega_i^2 - nu^2) sin(nu tau) - a*nu/(Omega_i^2 - nu^2) sin(Omega_i tau).
// Level 0 is sin(Omega tau) for the tracer frequency Omega. Near zero,
// K_i(tau) vanishes like tau^(2i+1).
struct KernelSeries {
    std::vector<HarmonicTerm> terms;
    int level = 0;

    double operator()(double tau) const;
    Trajectory sample(const Grid& grid) const;
};

// K_0 for a tracer of frequency omega > 0.
KernelSeries tracer_kernel(double omega);

// One nesting step. Throws near_degenerate_error when omega_i collides with
// an existing term frequency; callers then switch to kernel_quadrature.
KernelSeries next_kernel(const KernelSeries& prev, double omega_i);

// Quadrature fallback for the same convolution on a sampled kernel.
// Second-order accurate in the grid spacing.
Trajectory kernel_quadrature(const Trajectory& k_prev, double omega_i);

// Free harmonic evolution from initial data:
//   f(t) = x0 cos(omega t) + v0 sin(omega t)/omega,
// with the omega -> 0 limit x0 + v0 t.
double free_term(double omega, double x0, double v0, double t);
Trajectory free_evolution(double omega, double x0, double v0, const Grid& grid);

} // namespace nmchain
