#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netdpm/hodc.hpp"
#include "netdpm/model.hpp"
#include "netdpm/network.hpp"
#include "netdpm/quadrature.hpp"

namespace netdpm {

struct SamplerConfig {
  int iterations = 5000;
  int burn_in = 2000;
  int thin = 1;
  std::uint64_t seed = 1;
  int quadrature_nodes = kDefaultQuadratureNodes;

  // Keep a MixtureState per retained iteration (assignments only when
  // store_assignments is set; they cost n ints per draw).
  bool keep_snapshots = true;
  bool store_assignments = false;
  // Recount n_g and m_k from scratch and check the order restriction at
  // every retained iteration; throws InvalidStateError on a mismatch.
  bool validate_each_draw = false;
  // Accumulate the chain average of sum_i log P(z_i | rest) (model averaging).
  bool track_pseudo_likelihood = false;

  // Called every progress_stride iterations with the iteration count.
  std::function<void(int)> progress;
  int progress_stride = 500;

  void validate() const;
  int retained_count() const { return (iterations - burn_in) / thin; }
};

struct PosteriorDraws {
  std::vector<MixtureState> snapshots;
  std::vector<int> inclusion_tallies;  // per feature: retained draws with z_i = 1
  int retained = 0;
  std::optional<double> mean_log_pseudo_likelihood;
};

/// Per-feature inclusion probabilities with hard labels.
struct SelectionReport {
  std::vector<double> probabilities;
  std::vector<std::uint8_t> selected;
  double threshold = 0.5;
  std::optional<double> log_score;  // chain-averaged log pseudo-likelihood, when tracked

  std::size_t num_selected() const;
};

// Hard labels from probabilities: selected iff probability > threshold.
SelectionReport make_report(std::vector<double> probabilities, double threshold = 0.5);

enum class SelectionRule { kMode, kThreshold };

/// Inclusion probability = tally / retained draws. kMode labels features
/// with probability > 0.5; kThreshold uses `threshold` (also strict).
SelectionReport posterior_summary(const PosteriorDraws& draws, SelectionRule rule = SelectionRule::kMode,
                                  double threshold = 0.5);

/// Full network-coupled DPM sampler (infinite mixture per class).
///
/// Each sweep visits features in a fresh random order and redraws (g_i, z_i)
/// jointly over the occupied components of both classes plus one new
/// component per class, then redraws (mean, variance) of every occupied
/// component with the mean truncated between its neighbours. Features set
/// in `fixed` keep z_i = 1.
PosteriorDraws net_dpm1_run(const StatisticsVector& r, const FeatureNetwork& net, const BasePrior& prior,
                            const IsingPriorConfig& ising, const SamplerConfig& cfg,
                            std::span<const std::uint8_t> fixed = {});

/// Finite-mixture approximation with L0 null and L1 selected components.
/// The component set never changes; weights are integrated out.
PosteriorDraws net_dpm2_run(const StatisticsVector& r, const FeatureNetwork& net, const BasePrior& prior,
                            const IsingPriorConfig& ising, int L0, int L1, const SamplerConfig& cfg,
                            std::span<const std::uint8_t> fixed = {});

/// Pooled base prior for the network-free DPM: gamma = mean(r),
/// xi2 = var(r), alpha = 2, beta = var(r) / 2 (prior mean variance var/2),
/// tau = 1.
ClassPrior default_std_dpm_prior(const StatisticsVector& r);

/// Network-free DPM of normals. Each retained draw exports its occupied
/// components sorted by mean with weights n_g / n.
std::vector<OrderedDensitySet> std_dpm_run(const StatisticsVector& r, const ClassPrior& prior,
                                           const SamplerConfig& cfg);

}  // namespace netdpm
