#include "nmchain/bath.hpp"

#include <cmath>
#include <numbers>

#include "nmchain/errors.hpp"
#include "nmchain/linalg.hpp"

namespace nmchain {

ValidationReport validate_bath(const IOBath& bath) {
    ValidationReport report;
    const std::size_t n = bath.size();

    if (n == 0) {
        report.issues.push_back({"bath is empty", 0});
        return report;
    }
    if (bath.c.size() != n) {
        report.issues.push_back({"coupling list length differs from frequency list length", 0});
        return report;
    }

    for (std::size_t k = 0; k < n; ++k) {
        if (!(bath.omega[k] > 0.0))
            report.issues.push_back({"non-positive frequency", k});
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (bath.omega[k + 1] < bath.omega[k]) {
            report.issues.push_back({"frequencies not increasing", k + 1});
        } else {
            const double scale = std::max(std::abs(bath.omega[k]), std::abs(bath.omega[k + 1]));
            if (std::abs(bath.omega[k + 1] - bath.omega[k]) <= duplicate_frequency_tol * scale)
                report.issues.push_back({"duplicate frequency", k + 1});
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (bath.c[k] == 0.0)
            report.issues.push_back({"zero coupling", k});
    }
    return report;
}

IOBath discretize_spectral_density(const SpectralDensitySpec& spec) {
    if (spec.kind == SpectralKind::UserTable) {
        if (spec.table_omega.size() != spec.table_c.size())
            throw dimension_error("discretize_spectral_density: table lengths differ");
        if (spec.table_omega.empty())
            throw error("discretize_spectral_density: empty table");
        return IOBath{spec.table_omega, spec.table_c};
    }

    if (spec.n_modes == 0)
        throw error("discretize_spectral_density: n_modes must be >= 1");
    if (!(spec.cutoff > 0.0))
        throw error("discretize_spectral_density: cutoff must be positive");
    if (!(spec.coupling_scale > 0.0))
        throw error("discretize_spectral_density: coupling_scale must be positive");

    const std::size_t n = spec.n_modes;
    const double wmax = 4.0 * spec.cutoff;

    IOBath bath;
    bath.omega.resize(n);
    bath.c.resize(n);

    auto density = [&](double w) { return spec.coupling_scale * w * std::exp(-w / spec.cutoff); };

    if (spec.grid == GridKind::Linear) {
        // nodes at right bin edges: w_k = k * wmax / n
        const double dw = wmax / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = dw * static_cast<double>(k + 1);
            bath.omega[k] = w;
            bath.c[k] = std::sqrt(2.0 / std::numbers::pi * density(w) * w * dw);
        }
    } else {
        // geometric bins from wmax*1e-3 up to wmax, nodes at right edges
        const double wmin = wmax * 1e-3;
        const double ratio = std::pow(wmax / wmin, 1.0 / static_cast<double>(n));
        double left = wmin;
        for (std::size_t k = 0; k < n; ++k) {
            const double right = wmin * std::pow(ratio, static_cast<double>(k + 1));
            const double dw = right - left;
            bath.omega[k] = right;
            bath.c[k] = std::sqrt(2.0 / std::numbers::pi * density(right) * right * dw);
            left = right;
        }
    }
    return bath;
}

bool stability_check(const IOBath& bath, const SystemOscillator& sys) {
    const std::size_t n = bath.size();
    if (bath.c.size() != n)
        throw dimension_error("stability_check: coupling list length differs from frequency list length");

    // Quadratic form of the potential: diag(Omega^2, omega_k^2) with the
    // tracer row/column carrying -c_k. The spectrum is invariant under any
    // sign flip of individual couplings.
    const std::size_t m = n + 1;
    std::vector<double> a(m * m, 0.0);
    a[0] = sys.Omega * sys.Omega;
    for (std::size_t k = 0; k < n; ++k) {
        a[(k + 1) * m + (k + 1)] = bath.omega[k] * bath.omega[k];
        a[k + 1] = -bath.c[k];
        a[(k + 1) * m] = -bath.c[k];
    }
    const auto eig = linalg::symmetric_eigenvalues(std::move(a), m);
    return eig.front() >= -1e-10;
}

IOBath scale_couplings(const IOBath& bath, double factor) {
    IOBath scaled = bath;
    for (double& ck : scaled.c) ck *= factor;
    return scaled;
}

} // namespace nmchain
