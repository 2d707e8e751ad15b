#include "nmchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nmchain/errors.hpp"

namespace nmchain {

ChainTransform::ChainTransform(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n_ * n_)
        throw dimension_error("ChainTransform: storage size does not match n*n");
}

std::vector<double> ChainTransform::apply(const std::vector<double>& v) const {
    if (v.size() != n_) throw dimension_error("ChainTransform::apply: dimension mismatch");
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_; ++k) acc += data_[i * n_ + k] * v[k];
        out[i] = acc;
    }
    return out;
}

std::vector<double> ChainTransform::apply_transpose(const std::vector<double>& v) const {
    if (v.size() != n_) throw dimension_error("ChainTransform::apply_transpose: dimension mismatch");
    std::vector<double> out(n_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
        const double vk = v[k];
        for (std::size_t i = 0; i < n_; ++i) out[i] += data_[k * n_ + i] * vk;
    }
    return out;
}

double ChainTransform::orthogonality_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n_; ++k) dot += data_[i * n_ + k] * data_[j * n_ + k];
            if (i == j) dot -= 1.0;
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

IepResult solve_iep(const IOBath& bath) {
    const std::size_t n = bath.size();
    if (n == 0 || bath.c.size() != n)
        throw dimension_error("solve_iep: malformed bath");
    for (std::size_t k = 0; k < n; ++k)
        if (!(bath.omega[k] > 0.0))
            throw error("solve_iep: frequencies must be positive");
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (!(bath.omega[k + 1] > bath.omega[k]))
            throw error("solve_iep: frequencies must be strictly increasing");

    std::vector<double> lambda(n); // omega_k^2
    double lambda_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        lambda[k] = bath.omega[k] * bath.omega[k];
        lambda_max = std::max(lambda_max, lambda[k]);
    }

    double norm_c = 0.0;
    for (double ck : bath.c) norm_c += ck * ck;
    norm_c = std::sqrt(norm_c);
    if (!(norm_c > 0.0))
        throw error("solve_iep: couplings are all zero");

    // Krylov basis vectors, one per chain mode.
    std::vector<std::vector<double>> basis;
    basis.reserve(n);
    basis.emplace_back(n);
    for (std::size_t k = 0; k < n; ++k) basis[0][k] = bath.c[k] / norm_c;

    std::vector<double> alpha;  // Omega_j^2
    std::vector<double> beta;   // D_j
    alpha.reserve(n);
    beta.reserve(n > 0 ? n - 1 : 0);

    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& u = basis[j];
        for (std::size_t k = 0; k < n; ++k) w[k] = lambda[k] * u[k];

        double a = 0.0;
        for (std::size_t k = 0; k < n; ++k) a += u[k] * w[k];
        alpha.push_back(a);

        if (j + 1 == n) break;

        for (std::size_t k = 0; k < n; ++k) w[k] -= a * u[k];
        if (j > 0) {
            const auto& up = basis[j - 1];
            for (std::size_t k = 0; k < n; ++k) w[k] -= beta[j - 1] * up[k];
        }
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : basis) {
                double dot = 0.0;
                for (std::size_t k = 0; k < n; ++k) dot += v[k] * w[k];
                for (std::size_t k = 0; k < n; ++k) w[k] -= dot * v[k];
            }
        }

        double b = 0.0;
        for (std::size_t k = 0; k < n; ++k) b += w[k] * w[k];
        b = std::sqrt(b);
        if (b < breakdown_tol * lambda_max) {
            throw breakdown_error(j + 1,
                "solve_iep: Krylov residual vanished at step " + std::to_string(j + 1) +
                " of " + std::to_string(n) +
                "; the bath couples only to a " + std::to_string(j + 1) + "-mode chain");
        }
        beta.push_back(b);
        basis.emplace_back(n);
        for (std::size_t k = 0; k < n; ++k) basis[j + 1][k] = w[k] / b;
    }

    // Alternate sign flips turn the positive Lanczos off-diagonals into the
    // -D_j convention; D_j itself stays beta_j > 0.
    std::vector<double> o(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t k = 0; k < n; ++k) o[j * n + k] = sign * basis[j][k];
    }

    IepResult result;
    result.chain.omega_chain.resize(n);
    for (std::size_t j = 0; j < n; ++j) result.chain.omega_chain[j] = std::sqrt(alpha[j]);
    result.chain.coupling = std::move(beta);
    result.chain.system_coupling = norm_c;
    result.transform = ChainTransform(n, std::move(o));
    return result;
}

std::vector<double> charpoly_sequence(const ChainBath& chain, double lambda) {
    const std::size_t n = chain.size();
    if (n == 0) throw dimension_error("charpoly_sequence: empty chain");
    if (chain.coupling.size() + 1 != n)
        throw dimension_error("charpoly_sequence: coupling list must have N-1 entries");

    std::vector<double> p(n + 1);
    p[0] = 1.0;
    double prev = 0.0; // P_{-1}
    for (std::size_t j = 0; j < n; ++j) {
        const double diag = chain.omega_chain[j] * chain.omega_chain[j] - lambda;
        const double dj2 = (j == 0) ? 0.0 : chain.coupling[j - 1] * chain.coupling[j - 1];
        p[j + 1] = diag * p[j] - dj2 * prev;
        prev = p[j];
    }
    return p;
}

ChainTransform transform_from_polynomials(const IOBath& bath, const ChainBath& chain) {
    const std::size_t n = chain.size();
    if (n == 0 || bath.size() != n)
        throw dimension_error("transform_from_polynomials: dimension mismatch");
    if (n > 12)
        throw error("transform_from_polynomials: restricted to N <= 12 (polynomial recurrence is unstable)");

    const double d_total = chain.system_coupling;
    if (!(d_total > 0.0))
        throw error("transform_from_polynomials: system coupling must be positive");

    constexpr double overflow_limit = 1e12;

    std::vector<double> o(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = bath.omega[k] * bath.omega[k];
        const auto p = charpoly_sequence(chain, lam);
        const double weight = bath.c[k] / d_total;
        double inv_prod = 1.0; // 1 / (D_1 ... D_{j-1})
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) inv_prod /= chain.coupling[j - 1];
            const double entry = weight * p[j] * inv_prod;
            if (!std::isfinite(entry) || std::abs(p[j] * inv_prod) > overflow_limit)
                throw instability_error("transform_from_polynomials: intermediate exceeded 1e12");
            o[j * n + k] = entry;
        }
    }
    // restore unit row norms lost to round-off
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0.0;
        for (std::size_t k = 0; k < n; ++k) norm += o[j * n + k] * o[j * n + k];
        norm = std::sqrt(norm);
        if (!(norm > 0.0))
            throw instability_error("transform_from_polynomials: zero row");
        for (std::size_t k = 0; k < n; ++k) o[j * n + k] /= norm;
    }
    return ChainTransform(n, std::move(o));
}

ChainState map_state(const ChainTransform& transform, const PhaseState& phase) {
    if (phase.q0.size() != transform.size() || phase.qdot0.size() != transform.size())
        throw dimension_error("map_state: phase-space dimension does not match transform");
    return ChainState{transform.apply(phase.q0), transform.apply(phase.qdot0)};
}

} // namespace nmchain
