#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "nmchain/linalg.hpp"
#include "oracles.hpp"

using namespace nmchain;

TEST_CASE("tridiagonal QL reproduces the discrete Laplacian spectrum") {
    // eigenvalues of tridiag(-1, 2, -1) of size n: 2 - 2 cos(k pi / (n+1))
    const std::size_t n = 24;
    std::vector<double> d(n, 2.0), e(n - 1, -1.0);
    const auto eig = linalg::tridiag_eigenvalues(d, e);
    for (std::size_t k = 0; k < n; ++k) {
        const double expected =
            2.0 - 2.0 * std::cos(static_cast<double>(k + 1) * std::numbers::pi /
                                 static_cast<double>(n + 1));
        CHECK(eig[k] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("tridiagonal QL is insensitive to off-diagonal signs") {
    std::vector<double> d{2.5, 2.5};
    const auto a = linalg::tridiag_eigenvalues(d, {1.5});
    const auto b = linalg::tridiag_eigenvalues(d, {-1.5});
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-15));
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("dense symmetric eigenvalues match the 2x2 closed form") {
    const double W2 = 4.0, w2 = 1.0, c = 0.5;
    std::vector<double> a{W2, -c, -c, w2};
    const auto eig = linalg::symmetric_eigenvalues(a, 2);
    const oracles::TwoModeOracle oracle(W2, w2, c);
    CHECK(eig[0] == doctest::Approx(oracle.lam2).epsilon(1e-14));
    CHECK(eig[1] == doctest::Approx(oracle.lam1).epsilon(1e-14));
}

TEST_CASE("dense path agrees with the tridiagonal path and the invariants") {
    std::mt19937_64 gen(991);
    const std::size_t n = 12;
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = oracles::uniform(gen, -1.0, 1.0);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }

    double trace = 0.0, frob = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += a[i * n + i];
    for (double v : a) frob += v * v;

    const auto eig = linalg::symmetric_eigenvalues(a, n);
    double trace_eig = 0.0, frob_eig = 0.0;
    for (double lam : eig) {
        trace_eig += lam;
        frob_eig += lam * lam;
    }
    CHECK(trace_eig == doctest::Approx(trace).epsilon(1e-12));
    CHECK(frob_eig == doctest::Approx(frob).epsilon(1e-12));
}

TEST_CASE("n = 1 and empty inputs behave") {
    const auto one = linalg::symmetric_eigenvalues({3.5}, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(3.5));
    CHECK(linalg::tridiag_eigenvalues({}, {}).empty());
}
