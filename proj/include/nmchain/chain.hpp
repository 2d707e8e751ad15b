#pragma once

#include <cstddef>
#include <vector>

#include "nmchain/bath.hpp"

namespace nmchain {

// Nearest-neighbor chain equivalent of an independent-oscillator bath:
//   x''   = -Omega^2 x + D X_1
//   X_i'' = -Omega_i^2 X_i + D_{i-1} X_{i-1} + D_i X_{i+1}
//   X_N'' = -Omega_N^2 X_N + D_{N-1} X_{N-1}
// The chain matrix T is tridiagonal with diagonal Omega_j^2 and off-diagonal
// -D_j, D_j > 0, and shares the spectrum {omega_k^2} of the source bath.
struct ChainBath {
    std::vector<double> omega_chain;     // Omega_j, N entries (not ordered in general)
    std::vector<double> coupling;        // D_j, N-1 entries, positive
    double system_coupling = 0.0;        // D = ||c||, couples tracer to X_1

    std::size_t size() const noexcept { return omega_chain.size(); }
};

// Orthogonal map X = O q between independent and chain coordinates.
// Row 1 is c_k / D; column k is the T-eigenvector with eigenvalue omega_k^2.
class ChainTransform {
public:
    ChainTransform() = default;
    ChainTransform(std::size_t n, std::vector<double> row_major);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }
    const std::vector<double>& data() const noexcept { return data_; }

    std::vector<double> apply(const std::vector<double>& v) const;           // O v
    std::vector<double> apply_transpose(const std::vector<double>& v) const; // O^T v

    // max |O O^T - I| entry, for diagnostics and tests
    double orthogonality_defect() const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct ChainState {
    std::vector<double> X0;
    std::vector<double> Xdot0;
};

struct IepResult {
    ChainBath chain;
    ChainTransform transform;
};

// Residual threshold for Lanczos breakdown, relative to max(omega^2).
inline constexpr double breakdown_tol = 1e-12;

// Solves the Jacobi inverse eigenvalue problem by Lanczos iteration on
// diag(omega^2) with start vector c/||c|| and full reorthogonalization.
// Basis-vector signs alternate so every off-diagonal of T is negative,
// giving D_j = -sum_k omega_k^2 O_jk O_{j+1,k} > 0.
// Throws breakdown_error when the residual vanishes before step N (zero
// couplings or an effectively degenerate spectrum).
IepResult solve_iep(const IOBath& bath);

// Characteristic polynomials P_0..P_N of the leading principal minors of the
// chain matrix, evaluated at lambda:
//   P_{j+1} = (Omega_{j+1}^2 - lambda) P_j - D_j^2 P_{j-1},  P_{-1} = 0, P_0 = 1.
std::vector<double> charpoly_sequence(const ChainBath& chain, double lambda);

// Rebuilds the transform from the polynomial recurrence:
//   O_jk proportional to (c_k / D) * P_{j-1}(omega_k^2) / (D_1 ... D_{j-1}),
// rows renormalized to unit norm. Exponentially ill-conditioned; restricted
// to N <= 12 and used as a cross-check against solve_iep.
// Throws instability_error if an intermediate exceeds 1e12.
ChainTransform transform_from_polynomials(const IOBath& bath, const ChainBath& chain);

// X0 = O q0, Xdot0 = O qdot0.
ChainState map_state(const ChainTransform& transform, const PhaseState& phase);

} // namespace nmchain
