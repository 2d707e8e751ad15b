#include "nmchain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nmchain/errors.hpp"

namespace nmchain::linalg {

namespace {

// QL with implicit shifts on (d, e); e[i] couples d[i] and d[i+1],
// e[n-1] is workspace. Eigenvalues land in d, unordered.
void ql_implicit(std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n);
    e[n - 1] = 0.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw error("tridiagonal QL: no convergence in 60 iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    if (!d.empty() && e.size() + 1 != d.size())
        throw dimension_error("tridiag_eigenvalues: off-diagonal size must be n-1");
    ql_implicit(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n)
        throw dimension_error("symmetric_eigenvalues: storage size does not match n*n");
    if (n == 0) return {};

    std::vector<double> d(n, 0.0), e(n, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    // Householder reduction (eigenvalues only, no vector accumulation).
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                const double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    double gg = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) gg += at(j, k) * at(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) gg += at(k, j) * at(i, k);
                    e[j] = gg / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = at(i, j);
                    const double gg = e[j] - hh * f;
                    e[j] = gg;
                    for (std::size_t k = 0; k <= j; ++k)
                        at(j, k) -= f * e[k] + gg * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
    e.erase(e.begin()); // e[0] is unused padding; e[i] couples rows i-1 and i

    return tridiag_eigenvalues(std::move(d), std::move(e));
}

} // namespace nmchain::linalg
