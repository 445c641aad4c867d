#include "netdpm/samplers.hpp"

#include <algorithm>

#include "netdpm/error.hpp"
#include "netdpm/quadrature.hpp"

namespace netdpm {

void SamplerConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) throw ConfigError("burn-in must lie in [0, iterations)");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (quadrature_nodes < 10 || quadrature_nodes > kMaxQuadratureNodes) {
    throw ConfigError("quadrature nodes must lie in [10, " + std::to_string(kMaxQuadratureNodes) + "]");
  }
  if (progress_stride < 1) throw ConfigError("progress stride must be >= 1");
}

std::size_t SelectionReport::num_selected() const {
  return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), 1));
}

SelectionReport make_report(std::vector<double> probabilities, double threshold) {
  SelectionReport rep;
  rep.threshold = threshold;
  rep.selected.resize(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) rep.selected[i] = probabilities[i] > threshold ? 1 : 0;
  rep.probabilities = std::move(probabilities);
  return rep;
}

SelectionReport posterior_summary(const PosteriorDraws& draws, SelectionRule rule, double threshold) {
  if (draws.retained < 1) throw InvalidStateError("posterior summary needs at least one retained draw");
  std::vector<double> probs(draws.inclusion_tallies.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = static_cast<double>(draws.inclusion_tallies[i]) / draws.retained;
  }
  auto rep = make_report(std::move(probs), rule == SelectionRule::kMode ? 0.5 : threshold);
  rep.log_score = draws.mean_log_pseudo_likelihood;
  return rep;
}

}  // namespace netdpm
