#include "doctest.h"

#include <cmath>
#include <random>

#include "nmchain/chain.hpp"
#include "nmchain/errors.hpp"
#include "nmchain/linalg.hpp"
#include "oracles.hpp"

using namespace nmchain;

namespace {

// Tridiagonal matrix of the chain, for spectrum round-trips.
std::vector<double> chain_eigenvalues(const ChainBath& chain) {
    std::vector<double> d(chain.size()), e(chain.coupling);
    for (std::size_t j = 0; j < chain.size(); ++j)
        d[j] = chain.omega_chain[j] * chain.omega_chain[j];
    for (double& v : e) v = -v;
    return linalg::tridiag_eigenvalues(d, e);
}

// max |T - O diag(w^2) O^T| entry
double reconstruction_defect(const IOBath& bath, const ChainBath& chain,
                             const ChainTransform& o) {
    const std::size_t n = bath.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += o(i, k) * bath.omega[k] * bath.omega[k] * o(j, k);
            double t_ij = 0.0;
            if (i == j) t_ij = chain.omega_chain[i] * chain.omega_chain[i];
            else if (i + 1 == j) t_ij = -chain.coupling[i];
            else if (j + 1 == i) t_ij = -chain.coupling[j];
            worst = std::max(worst, std::abs(acc - t_ij));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("hand-solvable two-mode chain") {
    // omega^2 = (1, 4), c = (1, 1): start vector (1,1)/sqrt(2) gives
    // Omega_1^2 = Omega_2^2 = 2.5, D_1 = 1.5, D = sqrt(2);
    // trace 5 = 1 + 4, det 2.5^2 - 1.5^2 = 4 = 1*4.
    IOBath bath{{1.0, 2.0}, {1.0, 1.0}};
    const auto [chain, transform] = solve_iep(bath);

    CHECK(chain.system_coupling == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    REQUIRE(chain.size() == 2);
    CHECK(chain.omega_chain[0] * chain.omega_chain[0] == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(chain.omega_chain[1] * chain.omega_chain[1] == doctest::Approx(2.5).epsilon(1e-14));
    REQUIRE(chain.coupling.size() == 1);
    CHECK(chain.coupling[0] == doctest::Approx(1.5).epsilon(1e-14));

    // row 1 is c/D, row 2 is (1, -1)/sqrt(2) up to the global sign
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(transform(0, 0) == doctest::Approx(s).epsilon(1e-14));
    CHECK(transform(0, 1) == doctest::Approx(s).epsilon(1e-14));
    CHECK(std::abs(transform(1, 0)) == doctest::Approx(s).epsilon(1e-14));
    CHECK(transform(1, 0) == doctest::Approx(-transform(1, 1)).epsilon(1e-14));

    const auto eig = chain_eigenvalues(chain);
    CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eig[1] == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(reconstruction_defect(bath, chain, transform) < 1e-13);
}

TEST_CASE("single-mode bath maps to itself") {
    IOBath bath{{1.7}, {0.3}};
    const auto [chain, transform] = solve_iep(bath);
    CHECK(chain.system_coupling == doctest::Approx(0.3));
    CHECK(chain.omega_chain[0] == doctest::Approx(1.7));
    CHECK(chain.coupling.empty());
    CHECK(transform(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("zero coupling component triggers breakdown with effective length") {
    IOBath bath{{1.0, 2.0}, {1.0, 0.0}};
    try {
        solve_iep(bath);
        FAIL("expected breakdown");
    } catch (const breakdown_error& ex) {
        CHECK(ex.effective_length() == 1);
    }
}

TEST_CASE("all-zero couplings are rejected outright") {
    IOBath bath{{1.0, 2.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(solve_iep(bath), error);
}

TEST_CASE("characteristic polynomial sequence on the two-mode chain") {
    IOBath bath{{1.0, 2.0}, {1.0, 1.0}};
    const auto [chain, transform] = solve_iep(bath);

    // lambda = 1 is an eigenvalue: P_2(1) = (2.5-1)^2 - 1.5^2 = 0
    const auto at_one = charpoly_sequence(chain, 1.0);
    REQUIRE(at_one.size() == 3);
    CHECK(at_one[0] == doctest::Approx(1.0));
    CHECK(at_one[1] == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(at_one[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));

    // P_2(0) = 2.5*2.5 - 2.25 = 4 = det T
    const auto at_zero = charpoly_sequence(chain, 0.0);
    CHECK(at_zero[2] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("single-mode charpoly vanishes at its frequency squared") {
    ChainBath chain;
    chain.omega_chain = {1.3};
    chain.system_coupling = 0.2;
    const auto p = charpoly_sequence(chain, 1.3 * 1.3);
    REQUIRE(p.size() == 2);
    CHECK(p[1] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("charpoly roots sit at the bath eigenvalues (derivative-scaled)") {
    std::mt19937_64 gen(404);
    const auto bath = oracles::random_stable_bath(gen, 6, 2.0);
    const auto [chain, transform] = solve_iep(bath);
    for (double w : bath.omega) {
        const double lam = w * w;
        const double h = 1e-6;
        const double p = charpoly_sequence(chain, lam).back();
        const double pp = charpoly_sequence(chain, lam + h).back();
        const double pm = charpoly_sequence(chain, lam - h).back();
        const double deriv = (pp - pm) / (2.0 * h);
        CHECK(std::abs(p) <= 1e-8 * std::abs(deriv));
    }
}

TEST_CASE("polynomial transform equals the hand case including row signs") {
    IOBath bath{{1.0, 2.0}, {1.0, 1.0}};
    const auto [chain, lanczos] = solve_iep(bath);
    const auto poly = transform_from_polynomials(bath, chain);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(poly(0, 0) == doctest::Approx(s).epsilon(1e-14));
    CHECK(poly(0, 1) == doctest::Approx(s).epsilon(1e-14));
    CHECK(poly(1, 0) == doctest::Approx(s).epsilon(1e-14));
    CHECK(poly(1, 1) == doctest::Approx(-s).epsilon(1e-14));
}

TEST_CASE("polynomial transform: first row is the normalized couplings") {
    std::mt19937_64 gen(17);
    const auto bath = oracles::random_stable_bath(gen, 5, 2.0);
    const auto [chain, lanczos] = solve_iep(bath);
    const auto poly = transform_from_polynomials(bath, chain);
    for (std::size_t k = 0; k < bath.size(); ++k)
        CHECK(poly(0, k) ==
              doctest::Approx(bath.c[k] / chain.system_coupling).epsilon(1e-13));
}

TEST_CASE("polynomial transform matches Lanczos after row sign alignment") {
    std::mt19937_64 gen(2024);
    for (std::size_t n : {2u, 3u, 5u, 8u, 12u}) {
        const auto bath = oracles::random_stable_bath(gen, n, 2.0);
        const auto [chain, lanczos] = solve_iep(bath);
        const auto poly = transform_from_polynomials(bath, chain);
        for (std::size_t j = 0; j < n; ++j) {
            const double sign = (poly(j, 0) * lanczos(j, 0) < 0.0) ? -1.0 : 1.0;
            for (std::size_t k = 0; k < n; ++k)
                CHECK(sign * poly(j, k) == doctest::Approx(lanczos(j, k)).scale(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("polynomial transform refuses large chains") {
    std::mt19937_64 gen(5);
    const auto bath = oracles::random_stable_bath(gen, 13, 2.0);
    const auto [chain, transform] = solve_iep(bath);
    CHECK_THROWS_AS(transform_from_polynomials(bath, chain), error);
}

TEST_CASE("spectrum round-trip, orthogonality, trace and determinant") {
    std::mt19937_64 gen(31337);
    for (std::size_t n : {2u, 4u, 8u, 16u, 32u, 64u}) {
        const auto bath = oracles::random_stable_bath(gen, n, 2.0);
        const auto [chain, transform] = solve_iep(bath);

        CHECK(transform.orthogonality_defect() < 1e-10);

        const auto eig = chain_eigenvalues(chain);
        double trace_t = 0.0, trace_w = 0.0;
        double logdet_t = 0.0, logdet_w = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double lam = bath.omega[k] * bath.omega[k];
            CHECK(std::abs(eig[k] - lam) <= 1e-10 * lam);
            trace_t += chain.omega_chain[k] * chain.omega_chain[k];
            trace_w += lam;
            logdet_t += std::log(eig[k]);
            logdet_w += std::log(lam);
        }
        CHECK(trace_t == doctest::Approx(trace_w).epsilon(1e-10));
        CHECK(logdet_t == doctest::Approx(logdet_w).epsilon(1e-9));
        CHECK(reconstruction_defect(bath, chain, transform) < 1e-10);
    }
}

TEST_CASE("map_state: zeros, hand case, and transpose columns") {
    IOBath bath{{1.0, 2.0}, {1.0, 1.0}};
    const auto [chain, transform] = solve_iep(bath);

    PhaseState zero;
    zero.q0 = {0.0, 0.0};
    zero.qdot0 = {0.0, 0.0};
    const auto mapped_zero = map_state(transform, zero);
    CHECK(mapped_zero.X0[0] == 0.0);
    CHECK(mapped_zero.X0[1] == 0.0);

    PhaseState ones;
    ones.q0 = {1.0, 1.0};
    ones.qdot0 = {0.0, 0.0};
    const auto mapped = map_state(transform, ones);
    CHECK(mapped.X0[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(mapped.X0[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

    // q0 = k-th column of O^T  ->  X0 = e_k
    for (std::size_t k = 0; k < 2; ++k) {
        PhaseState col;
        col.q0 = {transform(k, 0), transform(k, 1)};
        col.qdot0 = {0.0, 0.0};
        const auto unit = map_state(transform, col);
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(unit.X0[j] == doctest::Approx(j == k ? 1.0 : 0.0).scale(1.0).epsilon(1e-14));
    }
}

TEST_CASE("map_state round-trips through the transpose") {
    std::mt19937_64 gen(808);
    const auto bath = oracles::random_stable_bath(gen, 6, 2.0);
    const auto [chain, transform] = solve_iep(bath);
    const auto phase = oracles::random_phase(gen, 6);
    const auto state = map_state(transform, phase);
    const auto back = transform.apply_transpose(state.X0);
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(back[k] == doctest::Approx(phase.q0[k]).scale(1.0).epsilon(1e-12));
}

TEST_CASE("map_state rejects mismatched dimensions") {
    IOBath bath{{1.0, 2.0}, {1.0, 1.0}};
    const auto [chain, transform] = solve_iep(bath);
    PhaseState bad;
    bad.q0 = {1.0};
    bad.qdot0 = {1.0};
    CHECK_THROWS_AS(map_state(transform, bad), dimension_error);
}
