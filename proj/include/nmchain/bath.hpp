#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nmchain {

// A tracer particle coupled star-wise to independent harmonic oscillators:
//   x''   = -Omega^2 x + sum_k c_k q_k
//   q_k'' = -omega_k^2 q_k + c_k x
// Frequencies are strictly increasing and positive; couplings are real and
// carry frequency^2 units. Mass is 1 throughout.
struct IOBath {
    std::vector<double> omega; // oscillator frequencies, ascending
    std::vector<double> c;     // bilinear couplings

    std::size_t size() const noexcept { return omega.size(); }
};

struct SystemOscillator {
    double Omega = 1.0; // tracer frequency, >= 0 (renormalized, user-supplied)
};

// Initial phase-space data of tracer and bath.
struct PhaseState {
    double x0 = 0.0;
    double v0 = 0.0;
    std::vector<double> q0;
    std::vector<double> qdot0;
};

enum class SpectralKind { OhmicExpCutoff, UserTable };
enum class GridKind { Linear, Logarithmic };

// Recipe for turning a spectral density J(omega) into a finite bath.
// For OhmicExpCutoff, J(omega) = coupling_scale * omega * exp(-omega/cutoff)
// sampled on n_modes points over (0, 4*cutoff]; the logarithmic grid spans
// [4e-3*cutoff, 4*cutoff]. UserTable passes table_omega/table_c through.
struct SpectralDensitySpec {
    SpectralKind kind = SpectralKind::OhmicExpCutoff;
    double coupling_scale = 1.0;
    double cutoff = 1.0;
    std::size_t n_modes = 1;
    GridKind grid = GridKind::Linear;
    std::vector<double> table_omega;
    std::vector<double> table_c;
};

struct ValidationIssue {
    std::string message;
    std::size_t index = 0;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const noexcept { return issues.empty(); }
};

// Relative tolerance below which two bath frequencies count as duplicates.
inline constexpr double duplicate_frequency_tol = 1e-12;

// Checks ordering, positivity, duplicate frequencies and zero couplings.
// Pure: same bath, same report.
ValidationReport validate_bath(const IOBath& bath);

// Deterministic discretization of the recipe above; c_k^2 = (2/pi) J(w_k) w_k dW_k.
IOBath discretize_spectral_density(const SpectralDensitySpec& spec);

// True iff the full (N+1)x(N+1) quadratic form of tracer + bath is positive
// semi-definite (smallest eigenvalue >= -1e-10). False signals unbounded motion.
bool stability_check(const IOBath& bath, const SystemOscillator& sys);

// Bath with every coupling scaled by `factor` (frequencies untouched).
IOBath scale_couplings(const IOBath& bath, double factor);

} // namespace nmchain
