#include "nmchain/forcing.hpp"

#include <cmath>

#include "nmchain/errors.hpp"

namespace nmchain {

namespace {

double chain_frequency(const SystemOscillator& sys, const ChainBath& chain, std::size_t l) {
    return l == 0 ? sys.Omega : chain.omega_chain[l - 1];
}

double chain_coupling(const ChainBath& chain, std::size_t l) {
    return l == 0 ? chain.system_coupling : chain.coupling[l - 1];
}

} // namespace

std::vector<KernelSeries> kernel_ladder(const SystemOscillator& sys, const ChainBath& chain,
                                        std::size_t max_level) {
    if (max_level > chain.size())
        throw dimension_error("kernel_ladder: level exceeds chain length");
    std::vector<KernelSeries> ladder;
    ladder.reserve(max_level + 1);
    ladder.push_back(tracer_kernel(sys.Omega));
    for (std::size_t i = 1; i <= max_level; ++i)
        ladder.push_back(next_kernel(ladder.back(), chain.omega_chain[i - 1]));
    return ladder;
}

double ladder_prefactor(const SystemOscillator& sys, const ChainBath& chain, std::size_t i) {
    double prod = 1.0;
    for (std::size_t l = 0; l < i; ++l)
        prod *= chain_coupling(chain, l) / chain_frequency(sys, chain, l);
    return prod;
}

Trajectory accumulate_free_forcing(const ChainBath& chain, const SystemOscillator& sys,
                                   double x0, double v0, const ChainState& state,
                                   const Grid& grid) {
    return accumulate_free_forcing(chain, sys, x0, v0, state, grid, chain.size());
}

Trajectory accumulate_free_forcing(const ChainBath& chain, const SystemOscillator& sys,
                                   double x0, double v0, const ChainState& state,
                                   const Grid& grid, std::size_t level) {
    const std::size_t n = chain.size();
    if (level > n)
        throw dimension_error("accumulate_free_forcing: level exceeds chain length");
    if (state.X0.size() != n || state.Xdot0.size() != n)
        throw dimension_error("accumulate_free_forcing: chain state does not match chain length");
    if (!(sys.Omega > 0.0))
        throw error("accumulate_free_forcing: tracer frequency must be positive");

    Trajectory ftilde = free_evolution(sys.Omega, x0, v0, grid);
    if (level == 0) return ftilde;

    KernelSeries kernel = tracer_kernel(sys.Omega); // K_{i-1} while processing level i
    for (std::size_t i = 1; i <= level; ++i) {
        const double pref = ladder_prefactor(sys, chain, i);
        if (pref != 0.0) {
            const Trajectory fi =
                free_evolution(chain.omega_chain[i - 1], state.X0[i - 1], state.Xdot0[i - 1], grid);
            const Trajectory conv = convolve_sine_terms(kernel.terms, fi);
            for (std::size_t j = 0; j < ftilde.values.size(); ++j)
                ftilde.values[j] += pref * conv.values[j];
        }
        if (i < level) kernel = next_kernel(kernel, chain.omega_chain[i - 1]);
    }
    return ftilde;
}

Trajectory assemble_forcing(const ChainBath& chain, const SystemOscillator& sys,
                            const std::vector<Trajectory>& chain_modes,
                            const Trajectory& free_part) {
    const std::size_t n = chain.size();
    if (chain_modes.size() != n)
        throw dimension_error("assemble_forcing: expected one trajectory per chain mode");
    check_grid(free_part);
    for (const auto& traj : chain_modes) check_same_grid(traj, free_part);

    Trajectory fn = free_part;
    if (n < 2) return fn; // the mode sum starts at i = 2

    const auto kernels = kernel_ladder(sys, chain, n);
    for (std::size_t i = 2; i <= n; ++i) {
        // (prod_{l<=i} D_l/Omega_l)(D_{i-1}/D_i) with D_i cancelled; finite at i = N.
        const double coef =
            ladder_prefactor(sys, chain, i) * chain_coupling(chain, i - 1) / chain.omega_chain[i - 1];
        if (coef == 0.0) continue;
        const Trajectory conv = convolve_sine_terms(kernels[i].terms, chain_modes[i - 2]);
        for (std::size_t j = 0; j < fn.values.size(); ++j)
            fn.values[j] += coef * conv.values[j];
    }
    return fn;
}

std::vector<Trajectory> free_chain_modes(const ChainTransform& transform, const IOBath& bath,
                                         const PhaseState& phase, const Grid& grid) {
    const std::size_t n = transform.size();
    if (bath.size() != n || phase.q0.size() != n || phase.qdot0.size() != n)
        throw dimension_error("free_chain_modes: dimension mismatch");

    std::vector<Trajectory> modes;
    modes.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        Trajectory traj = make_trajectory(grid);
        for (std::size_t k = 0; k < n; ++k) {
            const double o_jk = transform(j, k);
            if (o_jk == 0.0) continue;
            const double w = bath.omega[k];
            for (std::size_t s = 0; s < traj.values.size(); ++s)
                traj.values[s] += o_jk * free_term(w, phase.q0[k], phase.qdot0[k], traj.time(s));
        }
        modes.push_back(std::move(traj));
    }
    return modes;
}

Trajectory truncated_reconstruction(const ChainBath& chain, const SystemOscillator& sys,
                                    double x0, double v0, const ChainState& state,
                                    const Trajectory& x,
                                    const std::vector<Trajectory>& chain_modes,
                                    std::size_t n) {
    const std::size_t chain_len = chain.size();
    if (n == 0 || n > chain_len)
        throw dimension_error("truncated_reconstruction: level must be in [1, N]");
    if (chain_modes.size() != chain_len)
        throw dimension_error("truncated_reconstruction: expected one trajectory per chain mode");
    check_grid(x);
    for (const auto& traj : chain_modes) check_same_grid(traj, x);

    Trajectory rec = accumulate_free_forcing(chain, sys, x0, v0, state, x.grid(), n);
    const auto kernels = kernel_ladder(sys, chain, n);

    for (std::size_t i = 1; i <= n; ++i) {
        const double coef =
            ladder_prefactor(sys, chain, i) * chain_coupling(chain, i - 1) / chain.omega_chain[i - 1];
        if (coef == 0.0) continue;
        const Trajectory& source = (i == 1) ? x : chain_modes[i - 2];
        const Trajectory conv = convolve_sine_terms(kernels[i].terms, source);
        for (std::size_t j = 0; j < rec.values.size(); ++j)
            rec.values[j] += coef * conv.values[j];
    }

    if (n < chain_len) {
        const double tail = ladder_prefactor(sys, chain, n + 1);
        if (tail != 0.0) {
            const Trajectory conv = convolve_sine_terms(kernels[n].terms, chain_modes[n]);
            for (std::size_t j = 0; j < rec.values.size(); ++j)
                rec.values[j] += tail * conv.values[j];
        }
    }
    return rec;
}

} // namespace nmchain
