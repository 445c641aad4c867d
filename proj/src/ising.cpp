#include "netdpm/ising.hpp"

#include <cmath>

#include "netdpm/error.hpp"

namespace netdpm {

namespace {

void check_length(std::span<const std::uint8_t> z, const FeatureNetwork& net) {
  if (z.size() != net.size()) throw DomainError("label vector length does not match network size");
}

}  // namespace

double ising_log_prior(std::span<const std::uint8_t> z, const FeatureNetwork& net,
                       const IsingPriorConfig& cfg) {
  check_length(z, net);
  const double log_pi[2] = {std::log(cfg.pi0), std::log(1.0 - cfg.pi0)};
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(z.size()); ++i) {
    const int zi = z[static_cast<std::size_t>(i)] ? 1 : 0;
    total += net.omega_tilde(i) * log_pi[zi];
    auto nb = net.neighbors(i);
    auto w = net.couplings(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      const int j = nb[e];
      if (j > i && (z[static_cast<std::size_t>(j)] ? 1 : 0) == zi) total += cfg.rho[static_cast<std::size_t>(zi)] * w[e];
    }
  }
  return total;
}

double ising_local_energy(int i, Label k, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                          const IsingPriorConfig& cfg) {
  const std::uint8_t want = k == Label::kSelected ? 1 : 0;
  auto nb = net.neighbors(i);
  auto w = net.couplings(i);
  double agree = 0.0;
  for (std::size_t e = 0; e < nb.size(); ++e) {
    if ((z[static_cast<std::size_t>(nb[e])] != 0) == (want != 0)) agree += w[e];
  }
  return net.omega_tilde(i) * std::log(cfg.pi(k)) + cfg.rho_of(k) * agree;
}

double ising_log_odds(int i, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                      const IsingPriorConfig& cfg) {
  auto nb = net.neighbors(i);
  auto w = net.couplings(i);
  double with_one = 0.0;
  double with_zero = 0.0;
  for (std::size_t e = 0; e < nb.size(); ++e) {
    if (z[static_cast<std::size_t>(nb[e])]) {
      with_one += w[e];
    } else {
      with_zero += w[e];
    }
  }
  return net.omega_tilde(i) * (std::log1p(-cfg.pi0) - std::log(cfg.pi0)) + cfg.rho[1] * with_one -
         cfg.rho[0] * with_zero;
}

double ising_conditional(int i, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                         const IsingPriorConfig& cfg) {
  check_length(z, net);
  return logistic(ising_log_odds(i, z, net, cfg));
}

double ising_flip_delta(int i, std::span<const std::uint8_t> z, const FeatureNetwork& net,
                        const IsingPriorConfig& cfg) {
  const double odds = ising_log_odds(i, z, net, cfg);
  return z[static_cast<std::size_t>(i)] ? -odds : odds;
}

}  // namespace netdpm
