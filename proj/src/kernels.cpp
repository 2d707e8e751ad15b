#include "nmchain/kernels.hpp"

#include <cmath>
#include <string>

#include "nmchain/errors.hpp"

namespace nmchain {

double KernelSeries::operator()(double tau) const {
    double acc = 0.0;
    for (const auto& term : terms) acc += term.amplitude * std::sin(term.frequency * tau);
    return acc;
}

Trajectory KernelSeries::sample(const Grid& grid) const {
    Trajectory out = make_trajectory(grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = (*this)(out.time(i));
    return out;
}

KernelSeries tracer_kernel(double omega) {
    if (!(omega > 0.0))
        throw error("tracer_kernel: frequency must be positive");
    KernelSeries k;
    k.terms.push_back({1.0, omega});
    k.level = 0;
    return k;
}

KernelSeries next_kernel(const KernelSeries& prev, double omega_i) {
    if (!(omega_i > 0.0))
        throw error("next_kernel: frequency must be positive");
    for (const auto& term : prev.terms) {
        const double scale = std::max(std::abs(term.frequency), std::abs(omega_i));
        if (std::abs(term.frequency - omega_i) <= kernel_frequency_tol * scale)
            throw near_degenerate_error(
                "next_kernel: frequency " + std::to_string(omega_i) +
                " collides with an existing kernel frequency; use kernel_quadrature");
    }

    KernelSeries out;
    out.level = prev.level + 1;
    out.terms.reserve(prev.terms.size() + 1);
    double new_amp = 0.0; // accumulated sin(omega_i tau) coefficient
    for (const auto& term : prev.terms) {
        const double denom = omega_i * omega_i - term.frequency * term.frequency;
        out.terms.push_back({term.amplitude * omega_i / denom, term.frequency});
        new_amp -= term.amplitude * term.frequency / denom;
    }
    out.terms.push_back({new_amp, omega_i});
    return out;
}

Trajectory kernel_quadrature(const Trajectory& k_prev, double omega_i) {
    check_grid(k_prev);
    // integral over [0,tau] of K(tau-u) sin(w u) du
    //   = integral over [0,tau] of K(v) sin(w (tau-v)) dv
    //   = sin(w tau) * I_cos(tau) - cos(w tau) * I_sin(tau)
    // with prefix integrals of cos(w v) K(v) and sin(w v) K(v).
    std::vector<HarmonicTerm> single{{1.0, omega_i}};
    return convolve_sine_terms(single, k_prev);
}

double free_term(double omega, double x0, double v0, double t) {
    if (omega == 0.0) return x0 + v0 * t;
    return x0 * std::cos(omega * t) + v0 * std::sin(omega * t) / omega;
}

Trajectory free_evolution(double omega, double x0, double v0, const Grid& grid) {
    Trajectory out = make_trajectory(grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = free_term(omega, x0, v0, out.time(i));
    return out;
}

} // namespace nmchain
