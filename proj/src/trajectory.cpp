#include "nmchain/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "nmchain/errors.hpp"

namespace nmchain {

Trajectory make_trajectory(const Grid& grid) {
    if (!(grid.dt > 0.0))
        throw error("make_trajectory: dt must be positive");
    if (grid.samples < 2)
        throw error("make_trajectory: a grid needs at least 2 samples");
    Trajectory t;
    t.t0 = 0.0;
    t.dt = grid.dt;
    t.values.assign(grid.samples, 0.0);
    return t;
}

void check_grid(const Trajectory& t) {
    if (!(t.dt > 0.0) || t.values.size() < 2)
        throw error("trajectory grid is malformed (dt <= 0 or fewer than 2 samples)");
}

void check_same_grid(const Trajectory& a, const Trajectory& b) {
    check_grid(a);
    check_grid(b);
    if (a.values.size() != b.values.size() || a.dt != b.dt || a.t0 != b.t0)
        throw dimension_error("trajectories do not share a grid");
}

double max_abs(const Trajectory& t) {
    double m = 0.0;
    for (double v : t.values) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_difference(const Trajectory& a, const Trajectory& b) {
    check_same_grid(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

Trajectory convolve_sine_terms(const std::vector<HarmonicTerm>& terms, const Trajectory& f) {
    check_grid(f);
    const std::size_t n = f.values.size();
    const double dt = f.dt;

    Trajectory out;
    out.t0 = f.t0;
    out.dt = dt;
    out.values.assign(n, 0.0);

    for (const auto& term : terms) {
        const double nu = term.frequency;
        double ic = 0.0; // integral of cos(nu s) f(s)
        double is = 0.0; // integral of sin(nu s) f(s)
        double cos_prev = std::cos(nu * f.t0);
        double sin_prev = std::sin(nu * f.t0);
        for (std::size_t j = 1; j < n; ++j) {
            const double t = f.t0 + dt * static_cast<double>(j);
            const double cos_t = std::cos(nu * t);
            const double sin_t = std::sin(nu * t);
            ic += 0.5 * dt * (cos_prev * f.values[j - 1] + cos_t * f.values[j]);
            is += 0.5 * dt * (sin_prev * f.values[j - 1] + sin_t * f.values[j]);
            out.values[j] += term.amplitude * (sin_t * ic - cos_t * is);
            cos_prev = cos_t;
            sin_prev = sin_t;
        }
    }
    return out;
}

Trajectory convolve_cosine_terms(const std::vector<HarmonicTerm>& terms, const Trajectory& f) {
    check_grid(f);
    const std::size_t n = f.values.size();
    const double dt = f.dt;

    Trajectory out;
    out.t0 = f.t0;
    out.dt = dt;
    out.values.assign(n, 0.0);

    for (const auto& term : terms) {
        const double nu = term.frequency;
        double ic = 0.0;
        double is = 0.0;
        double cos_prev = std::cos(nu * f.t0);
        double sin_prev = std::sin(nu * f.t0);
        for (std::size_t j = 1; j < n; ++j) {
            const double t = f.t0 + dt * static_cast<double>(j);
            const double cos_t = std::cos(nu * t);
            const double sin_t = std::sin(nu * t);
            ic += 0.5 * dt * (cos_prev * f.values[j - 1] + cos_t * f.values[j]);
            is += 0.5 * dt * (sin_prev * f.values[j - 1] + sin_t * f.values[j]);
            out.values[j] += term.amplitude * (cos_t * ic + sin_t * is);
            cos_prev = cos_t;
            sin_prev = sin_t;
        }
    }
    return out;
}

Trajectory convolve_sampled(const Trajectory& kernel, const Trajectory& f) {
    check_same_grid(kernel, f);
    const std::size_t n = f.values.size();
    const double dt = f.dt;

    Trajectory out;
    out.t0 = f.t0;
    out.dt = dt;
    out.values.assign(n, 0.0);

    for (std::size_t j = 1; j < n; ++j) {
        double acc = 0.5 * (kernel.values[j] * f.values[0] + kernel.values[0] * f.values[j]);
        for (std::size_t i = 1; i < j; ++i)
            acc += kernel.values[j - i] * f.values[i];
        out.values[j] = acc * dt;
    }
    return out;
}

} // namespace nmchain
