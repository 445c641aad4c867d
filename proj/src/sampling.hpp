#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "netdpm/model.hpp"
#include "netdpm/network.hpp"
#include "netdpm/random.hpp"

namespace netdpm::detail {

// Draw from N(mean, sd^2) restricted to the open interval (lo, hi); either
// bound may be infinite. Robert's exponential / uniform rejection schemes.
double sample_truncated_normal(Rng& rng, double mean, double sd, double lo, double hi);

// Draw mu from the posterior of a fresh component given one observation r,
//   p(mu) ~ N(mu; gamma, xi2) (beta + (r - mu)^2 / 2)^{-(alpha + 1/2)},
// restricted to (lo, hi). Rejection from the truncated prior first, then a
// fine-grid inverse CDF when acceptance is poor.
double sample_birth_mean(Rng& rng, double r, const ClassPrior& prior, double lo, double hi);

// Birth of a component for observation r: mean from sample_birth_mean,
// variance from IG(alpha + 1/2, beta + (r - mu)^2 / 2).
MixtureComponent sample_birth(Rng& rng, double r, const ClassPrior& prior, double lo, double hi);

// One Gibbs update of a component's (variance, mean): the variance given the
// current mean from centered_ss = sum (r - mean)^2, then the mean given the
// new variance from the data sum, truncated to (lo, hi).
void update_component(Rng& rng, MixtureComponent& comp, std::size_t n, double sum, double centered_ss,
                      const ClassPrior& prior, double lo, double hi);

// Moves `value` strictly inside (lo, hi) if rounding put it on a bound.
double strictly_inside(double value, double lo, double hi);

// Sample an index from normalized probabilities.
std::size_t sample_categorical(Rng& rng, std::span<const double> probs);

// 80th-percentile thresholding initializer shared by the samplers; features
// in `fixed` start (and stay) selected.
std::vector<std::uint8_t> initial_labels(std::span<const double> r, std::span<const std::uint8_t> fixed);

// Local Ising energies omega_tilde_i log pi_k + rho_k sum_j w_ij I[z_j = k]
// for both k, with per-node coupling totals precomputed.
class IsingEnergies {
 public:
  IsingEnergies(const FeatureNetwork& net, const IsingPriorConfig& cfg);

  std::array<double, 2> operator()(int i, std::span<const std::uint8_t> z) const {
    double agree_one = 0.0;
    auto nb = net_->neighbors(i);
    auto w = net_->couplings(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (z[static_cast<std::size_t>(nb[e])]) agree_one += w[e];
    }
    const double agree_zero = coupling_total_[static_cast<std::size_t>(i)] - agree_one;
    const double wt = net_->omega_tilde(i);
    return {wt * log_pi_[0] + rho_[0] * agree_zero, wt * log_pi_[1] + rho_[1] * agree_one};
  }

 private:
  const FeatureNetwork* net_;
  std::array<double, 2> log_pi_;
  std::array<double, 2> rho_;
  std::vector<double> coupling_total_;
};

// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

}  // namespace netdpm::detail
