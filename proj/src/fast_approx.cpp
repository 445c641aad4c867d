#include "netdpm/fast_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "chain.hpp"
#include "netdpm/density.hpp"
#include "netdpm/error.hpp"
#include "netdpm/ising.hpp"
#include "netdpm/parallel.hpp"
#include "netdpm/random.hpp"
#include "sampling.hpp"

namespace netdpm {

namespace {

std::vector<MixtureComponent> renormalized(std::span<const MixtureComponent> comps) {
  double total = 0.0;
  for (const auto& c : comps) total += c.weight;
  std::vector<MixtureComponent> out(comps.begin(), comps.end());
  for (auto& c : out) c.weight /= total;
  return out;
}

void check_group(const std::vector<MixtureComponent>& group, const char* name) {
  if (group.empty()) throw DomainError(std::string("density pair has an empty ") + name);
  double total = 0.0;
  for (const auto& c : group) {
    if (!(c.weight > 0.0) || !(c.variance > 0.0)) {
      throw DomainError(std::string("density pair ") + name + " has a nonpositive weight or variance");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError(std::string("density pair ") + name + " weights do not sum to one");
}

// log logistic(x) without overflow.
double log_logistic(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

}  // namespace

void GuidedDensityPair::validate() const {
  check_group(phi0, "phi0");
  check_group(phi1, "phi1");
  double top0 = phi0.front().mean;
  for (const auto& c : phi0) top0 = std::max(top0, c.mean);
  for (const auto& c : phi1) {
    if (!(c.mean >= top0)) throw DomainError("density pair phi1 means must not lie below phi0 means");
  }
}

GuidedDensityPair guided_pair(const OrderedDensitySet& draw) {
  const auto part = hodc_run(draw);
  const auto& split = part.final_split();
  std::span<const MixtureComponent> comps(draw.components);
  GuidedDensityPair pair;
  pair.phi0 = renormalized(comps.subspan(static_cast<std::size_t>(split[0].first), static_cast<std::size_t>(split[0].size())));
  pair.phi1 = renormalized(comps.subspan(static_cast<std::size_t>(split[1].first), static_cast<std::size_t>(split[1].size())));
  return pair;
}

std::vector<GuidedDensityPair> build_guided_pairs(std::span<const OrderedDensitySet> draws, int V,
                                                  std::vector<std::string>* warnings) {
  if (V < 1) throw DomainError("number of density pairs must be >= 1");
  const std::size_t M = draws.size();
  if (static_cast<std::size_t>(V) > M) {
    throw DomainError("asked for " + std::to_string(V) + " density pairs from " + std::to_string(M) + " draws");
  }
  std::vector<GuidedDensityPair> out;
  for (std::size_t j = 0; j < static_cast<std::size_t>(V); ++j) {
    const std::size_t idx = j * M / static_cast<std::size_t>(V);
    if (draws[idx].size() < 2) {
      if (warnings) warnings->push_back("draw " + std::to_string(idx + 1) + " has a single component; skipped");
      continue;
    }
    out.push_back(guided_pair(draws[idx]));
  }
  return out;
}

void Net3Config::validate() const {
  if (sweeps < 1) throw ConfigError("sweeps must be >= 1");
  if (burn_in < 0 || burn_in >= sweeps) throw ConfigError("burn-in must lie in [0, sweeps)");
}

LabelChainResult net_dpm3_chain(const StatisticsVector& r, const FeatureNetwork& net, const GuidedDensityPair& pair,
                                const IsingPriorConfig& ising, int sweeps, int burn_in, std::uint64_t seed,
                                bool track_pseudo_likelihood, std::span<const std::uint8_t> fixed) {
  Net3Config{sweeps, burn_in}.validate();
  ising.validate();
  pair.validate();
  detail::check_chain_inputs(r, net, fixed);
  const std::size_t n = r.size();
  std::vector<double> log_ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_ratio[i] = log_class_density(r.values[i], pair.phi1) - log_class_density(r.values[i], pair.phi0);
    if (std::isnan(log_ratio[i])) {
      throw NumericalError("density ratio undefined for feature '" + r.feature_ids[i] + "'");
    }
  }
  std::vector<std::uint8_t> pinned(n, 0);
  if (!fixed.empty()) std::copy(fixed.begin(), fixed.end(), pinned.begin());

  const detail::IsingEnergies energies(net, ising);
  auto z = detail::initial_labels(r.values, pinned);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<long> tallies(n, 0);
  Rng rng(seed);
  double pl_sum = 0.0;

  for (int t = 0; t < sweeps; ++t) {
    const bool retain = t >= burn_in;
    const bool track = track_pseudo_likelihood && retain;
    rng.shuffle(std::span<int>(perm));
    for (int i : perm) {
      const auto idx = static_cast<std::size_t>(i);
      if (pinned[idx]) continue;
      const auto e = energies(i, z);
      const double odds = log_ratio[idx] + e[1] - e[0];
      const bool one = rng.uniform() < logistic(odds);
      z[idx] = one ? 1 : 0;
      if (track) pl_sum += one ? log_logistic(odds) : log_logistic(-odds);
    }
    if (retain) {
      for (std::size_t i = 0; i < n; ++i) tallies[i] += z[i];
    }
  }

  LabelChainResult out;
  const double kept = sweeps - burn_in;
  out.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.probabilities[i] = static_cast<double>(tallies[i]) / kept;
  if (track_pseudo_likelihood) out.log_score = pl_sum / kept;
  return out;
}

SelectionReport net_dpm3_run(const StatisticsVector& r, const FeatureNetwork& net,
                             std::span<const GuidedDensityPair> pairs, const IsingPriorConfig& ising,
                             const Net3Config& cfg, std::span<const std::uint8_t> fixed) {
  cfg.validate();
  if (pairs.empty()) throw DomainError("NET-DPM-3 needs at least one density pair");
  std::vector<LabelChainResult> chains(pairs.size());
  parallel_for(pairs.size(), cfg.threads, [&](std::size_t v) {
    chains[v] = net_dpm3_chain(r, net, pairs[v], ising, cfg.sweeps, cfg.burn_in, derive_seed(cfg.seed, v),
                               cfg.track_pseudo_likelihood, fixed);
  });
  std::vector<double> probs(r.size(), 0.0);
  double score = 0.0;
  for (const auto& c : chains) {
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] += c.probabilities[i];
    if (c.log_score) score += *c.log_score;
  }
  const double V = static_cast<double>(pairs.size());
  for (double& p : probs) p /= V;
  auto rep = make_report(std::move(probs));
  if (cfg.track_pseudo_likelihood) rep.log_score = score / V;
  return rep;
}

IsingPriorConfig HyperGrid::point(std::size_t index) const {
  if (index >= size()) throw DomainError("grid point " + std::to_string(index) + " out of range");
  IsingPriorConfig cfg;
  cfg.pi0 = pi0_values[index / rho_pairs.size()];
  cfg.rho = rho_pairs[index % rho_pairs.size()];
  return cfg;
}

void HyperGrid::validate() const {
  if (size() == 0) throw ConfigError("hyperparameter grid is empty");
  for (double p : pi0_values) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("grid pi0 values must lie in (0,1)");
  }
  for (const auto& rho : rho_pairs) {
    if (!(rho[0] >= 0.0 && rho[1] >= 0.0)) throw ConfigError("grid smoothness values must be >= 0");
  }
  if (!weights.empty()) {
    if (weights.size() != size()) {
      throw ConfigError("grid has " + std::to_string(size()) + " points but " + std::to_string(weights.size()) + " weights");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ConfigError("grid weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("grid weights must sum to one");
  }
}

HyperGrid HyperGrid::cartesian(std::vector<double> pi0_values, std::span<const double> rho0_values,
                               std::span<const double> rho1_values, bool require_increasing) {
  HyperGrid g;
  g.pi0_values = std::move(pi0_values);
  for (double a : rho0_values) {
    for (double b : rho1_values) {
      if (!require_increasing || a < b) g.rho_pairs.push_back({a, b});
    }
  }
  return g;
}

HyperGrid HyperGrid::default_grid() {
  const std::vector<double> rho{0.5, 1.0, 5.0, 10.0, 15.0};
  return cartesian({0.75, 0.8, 0.85, 0.9}, rho, rho, true);
}

HyperGrid HyperGrid::single(const IsingPriorConfig& cfg) {
  HyperGrid g;
  g.pi0_values = {cfg.pi0};
  g.rho_pairs = {cfg.rho};
  return g;
}

AveragedReport model_average(const GridRunner& runner, const HyperGrid& grid, std::uint64_t seed,
                             AveragingWeights mode, unsigned threads, double threshold) {
  grid.validate();
  const std::size_t K = grid.size();
  AveragedReport out;
  out.per_point.resize(K);
  parallel_for(K, threads, [&](std::size_t k) {
    const auto cfg = grid.point(k);
    try {
      out.per_point[k] = runner(cfg, derive_seed(seed, k));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "grid point " << k + 1 << " (pi0=" << cfg.pi0 << ", rho0=" << cfg.rho[0] << ", rho1=" << cfg.rho[1]
          << "): " << e.what();
      throw Error(msg.str());
    }
  });

  const std::size_t n = out.per_point[0].probabilities.size();
  for (const auto& rep : out.per_point) {
    if (rep.probabilities.size() != n) throw InvalidStateError("grid points returned reports of different lengths");
  }
  out.weights.assign(K, 1.0 / static_cast<double>(K));
  if (mode == AveragingWeights::kPseudoLikelihood) {
    std::vector<double> scores(K);
    for (std::size_t k = 0; k < K; ++k) {
      if (!out.per_point[k].log_score) throw ConfigError("pseudo-likelihood weights need tracked log scores");
      scores[k] = *out.per_point[k].log_score;
    }
    normalize_log_weights(scores);
    out.weights = scores;
    out.non_uniform = true;
  } else if (!grid.weights.empty()) {
    out.weights = grid.weights;
    out.non_uniform = std::any_of(out.weights.begin(), out.weights.end(),
                                  [&](double w) { return w != out.weights.front(); });
  }

  std::vector<double> probs(n, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < n; ++i) probs[i] += out.weights[k] * out.per_point[k].probabilities[i];
  }
  for (double& p : probs) p = std::clamp(p, 0.0, 1.0);
  out.report = make_report(std::move(probs), threshold);
  return out;
}

std::vector<int> pick_sure_selected(const SelectionReport& report, const FeatureNetwork& net,
                                    const StatisticsVector& r, int count) {
  if (count < 0) throw DomainError("sure-selected count must be >= 0");
  const std::size_t n = r.size();
  if (report.selected.size() != n || net.size() != n) throw DomainError("report, network and statistics sizes differ");
  std::vector<int> score(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : net.neighbors(static_cast<int>(i))) score[i] += report.selected[static_cast<std::size_t>(j)];
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    if (score[ua] != score[ub]) return score[ua] > score[ub];
    if (r.values[ua] != r.values[ub]) return r.values[ua] > r.values[ub];
    return a < b;
  });
  idx.resize(std::min(n, static_cast<std::size_t>(count)));
  return idx;
}

SelectionReport std_dpm_selection(const StatisticsVector& r, std::span<const OrderedDensitySet> draws,
                                  double threshold) {
  r.validate();
  if (draws.empty()) throw DomainError("STD-DPM selection needs at least one draw");
  const std::size_t n = r.size();
  std::vector<double> probs(n, 0.0);
  std::vector<double> all;
  std::vector<double> upper;
  for (const auto& draw : draws) {
    if (draw.size() < 2) continue;
    const auto split = hodc_run(draw).final_split();
    const auto boundary = static_cast<std::size_t>(split[1].first);
    for (std::size_t i = 0; i < n; ++i) {
      all.clear();
      upper.clear();
      for (std::size_t g = 0; g < draw.size(); ++g) {
        const auto& c = draw.components[g];
        const double lw = std::log(c.weight) + log_normal_pdf(r.values[i], c.mean, c.variance);
        all.push_back(lw);
        if (g >= boundary) upper.push_back(lw);
      }
      probs[i] += std::exp(log_sum_exp(upper) - log_sum_exp(all));
    }
  }
  for (double& p : probs) p = std::clamp(p / static_cast<double>(draws.size()), 0.0, 1.0);
  return make_report(std::move(probs), threshold);
}

BasePrior default_base_prior(std::span<const OrderedDensitySet> draws) {
  std::array<double, 2> mean_sum{0.0, 0.0};
  std::array<double, 2> var_sum{0.0, 0.0};
  int used = 0;
  for (const auto& draw : draws) {
    if (draw.size() < 2) continue;
    const auto split = hodc_run(draw).final_split();
    for (std::size_t k = 0; k < 2; ++k) {
      double w = 0.0;
      double m1 = 0.0;
      double m2 = 0.0;
      for (int g = split[k].first; g <= split[k].last; ++g) {
        const auto& c = draw.components[static_cast<std::size_t>(g)];
        w += c.weight;
        m1 += c.weight * c.mean;
        m2 += c.weight * (c.variance + c.mean * c.mean);
      }
      const double mean = m1 / w;
      mean_sum[k] += mean;
      var_sum[k] += std::max(m2 / w - mean * mean, 1e-12);
    }
    ++used;
  }
  if (used == 0) {
    throw InvalidStateError("every standard DPM draw has a single component; no class split to build a base prior from");
  }
  BasePrior prior;
  const std::array<double, 2> tau{10.0, 2.0};
  for (std::size_t k = 0; k < 2; ++k) {
    ClassPrior& p = prior.classes[k];
    p.gamma = mean_sum[k] / used;
    p.xi2 = var_sum[k] / used;
    const double sigma2 = p.xi2;
    p.alpha = sigma2 / p.xi2 + 1.0;
    p.beta = 10.0;
    p.tau = tau[k];
  }
  return prior;
}

}  // namespace netdpm
