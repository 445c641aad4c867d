#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netdpm/hodc.hpp"
#include "netdpm/model.hpp"
#include "netdpm/network.hpp"
#include "netdpm/samplers.hpp"

namespace netdpm {

/// Two-group split of one standard-DPM draw: the lower HODC cluster
/// estimates f0 and the upper one f1, each with weights renormalized to one.
struct GuidedDensityPair {
  std::vector<MixtureComponent> phi0;
  std::vector<MixtureComponent> phi1;

  void validate() const;
};

/// Two-group split of one ordered density set via hodc_run.
GuidedDensityPair guided_pair(const OrderedDensitySet& draw);

/// Picks V evenly thinned draws (indices j * M / V) and splits each with HODC.
/// Draws with a single component have no split; they are skipped and a
/// message is appended to `warnings` when given. Throws DomainError when V
/// exceeds the number of draws.
std::vector<GuidedDensityPair> build_guided_pairs(std::span<const OrderedDensitySet> draws, int V,
                                                  std::vector<std::string>* warnings = nullptr);

struct Net3Config {
  int sweeps = 10000;
  int burn_in = 2000;
  std::uint64_t seed = 1;
  bool track_pseudo_likelihood = false;
  // Workers for the per-pair chains; 0 = hardware concurrency.
  unsigned threads = 1;

  void validate() const;
};

/// Label-only Gibbs chain for one density pair. Returns per-feature
/// inclusion frequencies over the retained sweeps (and the chain average of
/// sum_i log P(z_i | rest) when tracked).
struct LabelChainResult {
  std::vector<double> probabilities;
  std::optional<double> log_score;
};
LabelChainResult net_dpm3_chain(const StatisticsVector& r, const FeatureNetwork& net, const GuidedDensityPair& pair,
                                const IsingPriorConfig& ising, int sweeps, int burn_in, std::uint64_t seed,
                                bool track_pseudo_likelihood = false, std::span<const std::uint8_t> fixed = {});

/// NET-DPM-3: one label chain per pair (stream seed derive_seed(seed, v)),
/// probabilities averaged with equal weights in pair order.
SelectionReport net_dpm3_run(const StatisticsVector& r, const FeatureNetwork& net,
                             std::span<const GuidedDensityPair> pairs, const IsingPriorConfig& ising,
                             const Net3Config& cfg, std::span<const std::uint8_t> fixed = {});

/// (pi0, rho) settings for model averaging: every pi0 value crossed with
/// every rho pair. `weights` is empty (uniform) or one entry per point.
struct HyperGrid {
  std::vector<double> pi0_values;
  std::vector<std::array<double, 2>> rho_pairs;
  std::vector<double> weights;

  std::size_t size() const { return pi0_values.size() * rho_pairs.size(); }
  IsingPriorConfig point(std::size_t index) const;
  void validate() const;

  // rho pairs from rho0_values x rho1_values, keeping rho0 < rho1 when asked.
  static HyperGrid cartesian(std::vector<double> pi0_values, std::span<const double> rho0_values,
                             std::span<const double> rho1_values, bool require_increasing = true);
  // pi0 in {0.75, 0.8, 0.85, 0.9}; rho from {0.5, 1, 5, 10, 15}^2 with rho0 < rho1.
  static HyperGrid default_grid();
  static HyperGrid single(const IsingPriorConfig& cfg);
};

enum class AveragingWeights { kUniform, kPseudoLikelihood };

struct AveragedReport {
  SelectionReport report;
  std::vector<SelectionReport> per_point;
  std::vector<double> weights;
  bool non_uniform = false;
};

// Runs the chosen sampler at one grid point with the given stream seed.
using GridRunner = std::function<SelectionReport(const IsingPriorConfig&, std::uint64_t seed)>;

/// Runs `runner` at every grid point (seed derive_seed(seed, index)) and
/// combines the inclusion probabilities. kUniform uses grid.weights (or
/// equal weights); kPseudoLikelihood uses weights proportional to
/// exp(log_score), which every point must report. A failing point aborts
/// with its configuration in the message.
AveragedReport model_average(const GridRunner& runner, const HyperGrid& grid, std::uint64_t seed,
                             AveragingWeights mode = AveragingWeights::kUniform, unsigned threads = 1,
                             double threshold = 0.5);

/// Top `count` features by number of neighbours selected in `report`; ties
/// go to the larger statistic, then the lower index.
std::vector<int> pick_sure_selected(const SelectionReport& report, const FeatureNetwork& net,
                                    const StatisticsVector& r, int count);

/// STD-DPM selection: per draw, the HODC upper cluster's share of the fitted
/// density at r_i; averaged over draws. Draws with one component count as
/// all-null.
SelectionReport std_dpm_selection(const StatisticsVector& r, std::span<const OrderedDensitySet> draws,
                                  double threshold = 0.5);

/// Base prior from a standard DPM fit: per class, the mean and variance of
/// the HODC cluster mixture averaged over draws give gamma_k and xi2_k.
/// The class variance also plays sigma2_k in alpha_k = sigma2_k / xi2_k + 1,
/// so alpha_k = 2; beta_k = 10 and tau = (10, 2).
BasePrior default_base_prior(std::span<const OrderedDensitySet> draws);

}  // namespace netdpm
