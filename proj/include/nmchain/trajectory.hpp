#pragma once

#include <cstddef>
#include <vector>

namespace nmchain {

// Uniform time grid starting at t = 0.
struct Grid {
    double dt = 0.0;
    std::size_t samples = 0;

    double time(std::size_t i) const noexcept { return dt * static_cast<double>(i); }
    double t_end() const noexcept { return samples == 0 ? 0.0 : dt * static_cast<double>(samples - 1); }
};

// Sampled real-valued function of time on a uniform grid.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double time(std::size_t i) const noexcept { return t0 + dt * static_cast<double>(i); }
    Grid grid() const noexcept { return Grid{dt, values.size()}; }
};

// One a*sin(nu t) (or a*cos(nu t)) contribution to a kernel.
struct HarmonicTerm {
    double amplitude = 0.0;
    double frequency = 0.0;
};

Trajectory make_trajectory(const Grid& grid);
void check_grid(const Trajectory& t);
void check_same_grid(const Trajectory& a, const Trajectory& b);

double max_abs(const Trajectory& t);
double max_abs_difference(const Trajectory& a, const Trajectory& b);

// y(t_j) = trapezoidal integral over [0, t_j] of K(t_j - s) f(s) with
// K(tau) = sum_m a_m sin(nu_m tau). Evaluated with running prefix sums of
// cos(nu s) f(s) and sin(nu s) f(s); identical to the O(n^2) trapezoidal
// convolution but O(n) per term.
Trajectory convolve_sine_terms(const std::vector<HarmonicTerm>& terms, const Trajectory& f);

// Same with K(tau) = sum_m a_m cos(nu_m tau).
Trajectory convolve_cosine_terms(const std::vector<HarmonicTerm>& terms, const Trajectory& f);

// Reference O(n^2) trapezoidal convolution of two sampled functions sharing
// a grid: y(t_j) = integral over [0, t_j] of k(t_j - s) f(s) ds.
Trajectory convolve_sampled(const Trajectory& kernel, const Trajectory& f);

} // namespace nmchain
