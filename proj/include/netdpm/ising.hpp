#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "netdpm/model.hpp"
#include "netdpm/network.hpp"

namespace netdpm {

// Unnormalized log of the weighted Ising prior:
//   sum_i omega_tilde_i log pi_{z_i} + sum_{edges i<j} rho_{z_i} w_ij I[z_i = z_j]
// with pair coupling w_ij = (omega_i + omega_j) / 2. With unit node weights
// each edge contributes rho_z once, which makes the single-site conditional
// exactly ising_conditional below.
double ising_log_prior(std::span<const std::uint8_t> z, const FeatureNetwork& net,
                       const IsingPriorConfig& cfg);

// omega_tilde_i log pi_k + rho_k sum_j w_ij I[z_j = k]; z_i itself is ignored.
double ising_local_energy(int i, Label k, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                          const IsingPriorConfig& cfg);

// log P(z_i = 1 | z_-i) - log P(z_i = 0 | z_-i).
double ising_log_odds(int i, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                      const IsingPriorConfig& cfg);

// P(z_i = 1 | z_-i) under the prior alone.
double ising_conditional(int i, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                         const IsingPriorConfig& cfg);

// Change of ising_log_prior when z_i is flipped; O(degree).
double ising_flip_delta(int i, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                        const IsingPriorConfig& cfg);

inline double logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace netdpm
