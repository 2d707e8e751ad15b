#pragma once

#include <cstddef>
#include <vector>

#include "nmchain/bath.hpp"
#include "nmchain/chain.hpp"
#include "nmchain/kernels.hpp"
#include "nmchain/trajectory.hpp"

namespace nmchain {

// The tracer obeys the integral identity
//   x(t) = (D^2/(Omega Omega_1)) * integral K_1(t-s) x(s) ds + F_N(t)
// where F_N collects everything that does not depend on x: the free part
// built from initial data and the convolutions of deeper chain modes.
//
// With Omega_0 = Omega, D_0 = D, the free part obeys
//   ftilde_i(t) = ftilde_{i-1}(t)
//               + (prod_{l<i} D_l/Omega_l) * integral K_{i-1}(t-s) f_i(s) ds
// and
//   F_N(t) = ftilde_N(t)
//          + sum_{i=2..N} (prod_{l<i} D_l/Omega_l) (D_{i-1}/Omega_i)
//            * integral K_i(t-s) X_{i-1}(s) ds.

// Kernels K_0..K_max for the tracer/chain frequency ladder.
// Throws near_degenerate_error on a frequency clash.
std::vector<KernelSeries> kernel_ladder(const SystemOscillator& sys, const ChainBath& chain,
                                        std::size_t max_level);

// prod_{l=0}^{i-1} D_l / Omega_l   (empty product = 1)
double ladder_prefactor(const SystemOscillator& sys, const ChainBath& chain, std::size_t i);

// ftilde_n on the grid; n defaults to the full chain length.
Trajectory accumulate_free_forcing(const ChainBath& chain, const SystemOscillator& sys,
                                   double x0, double v0, const ChainState& state,
                                   const Grid& grid);
Trajectory accumulate_free_forcing(const ChainBath& chain, const SystemOscillator& sys,
                                   double x0, double v0, const ChainState& state,
                                   const Grid& grid, std::size_t level);

// F_N from ftilde_N and the chain-mode trajectories X_1..X_N (the last one
// is not referenced; the sum stops at X_{N-1}).
Trajectory assemble_forcing(const ChainBath& chain, const SystemOscillator& sys,
                            const std::vector<Trajectory>& chain_modes,
                            const Trajectory& free_part);

// Free-evolution chain modes rebuilt from the independent oscillators:
//   X_j(s) = sum_k O_jk (q_k(0) cos(omega_k s) + qdot_k(0) sin(omega_k s)/omega_k).
// Diagnostic only: it ignores the back-action of the tracer on the bath.
std::vector<Trajectory> free_chain_modes(const ChainTransform& transform, const IOBath& bath,
                                         const PhaseState& phase, const Grid& grid);

// Level-n reconstruction of the tracer from oracle trajectories:
//   x_n(t) = ftilde_n(t)
//          + sum_{i=1..n} (prod_{l<i} D_l/Omega_l)(D_{i-1}/Omega_i) conv(K_i, X_{i-1})
//          + (prod_{l<=n} D_l/Omega_l) conv(K_n, X_{n+1})      [absent for n = N]
// with X_0 = x. Exact for every n up to quadrature error, which is what the
// truncation tests measure.
Trajectory truncated_reconstruction(const ChainBath& chain, const SystemOscillator& sys,
                                    double x0, double v0, const ChainState& state,
                                    const Trajectory& x,
                                    const std::vector<Trajectory>& chain_modes,
                                    std::size_t n);

} // namespace nmchain
