#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netdpm/model.hpp"
#include "netdpm/network.hpp"
#include "netdpm/random.hpp"

namespace netdpm {

/// Preferential-attachment (Barabasi-Albert) graph. With attach_edges = 1
/// growth starts from a single edge 0-1; otherwise from a clique on
/// attach_edges + 1 nodes. Each later node links to attach_edges distinct
/// existing nodes chosen with probability proportional to degree.
FeatureNetwork generate_scale_free(int n, int attach_edges, std::uint64_t seed);

/// Final state of `sweeps` Gibbs sweeps over the Ising prior, started from
/// independent Bernoulli(1 - pi0) labels.
std::vector<std::uint8_t> sample_ising_labels(const FeatureNetwork& net, const IsingPriorConfig& cfg, int sweeps,
                                              std::uint64_t seed);

/// One class-conditional generator. Text forms:
///   normal(mean,var)
///   gaussian-mixture(w1,mean1,var1;w2,mean2,var2;...)
///   gamma-mixture(w1,shape1,rate1;...)
///   empirical(path)  (one value per line, '#' comments)
struct ClassDistribution {
  enum class Kind { kGaussianMixture, kGammaMixture, kEmpirical };
  struct Part {
    double weight;
    double a;  // mean or shape
    double b;  // variance or rate
  };

  Kind kind = Kind::kGaussianMixture;
  std::vector<Part> parts;
  std::vector<double> sample;  // empirical values
  std::string source;          // empirical file path, for echo

  static ClassDistribution parse(const std::string& text);
  static ClassDistribution gaussian(double mean, double variance);
  std::string to_string() const;
  double mean() const;
  double draw(Rng& rng) const;
  void validate() const;
};

struct StatisticsSpec {
  ClassDistribution null_dist = ClassDistribution::gaussian(0.0, 1.0);
  ClassDistribution alt_dist = ClassDistribution::gaussian(3.0, 1.0);
};

/// r_i drawn independently from the class of z_i.
StatisticsVector generate_statistics(std::span<const std::uint8_t> labels, const StatisticsSpec& spec,
                                     std::uint64_t seed);

/// Hand-designed subnetwork grafted onto a scale-free graph. Node indices
/// 0..m-1 are the designed nodes, m..m+scale_free_n-1 the scale-free part.
struct DesignedNetworkSpec {
  int designed_nodes = 11;
  std::vector<Edge> designed_edges;  // 0-based, within the designed nodes
  std::vector<int> ports;            // designed nodes that receive a bridge, cycled
  int scale_free_n = 83;
  int attach_edges = 1;
  int bridge_edges = 3;
  std::vector<int> selected;  // designed nodes with z = 1
  std::vector<int> target;    // designed nodes forming the target subnetwork

  // 11-node tree on genes 1..11: gene 5 is the hub of the target star
  // {1,...,5}, then the path 5-6-7-8 with 8-9, 8-10, 10-11. Ports 5, 6, 11;
  // selected {1,2,3,4,5,8,9,10}.
  static DesignedNetworkSpec defaults();
  void validate() const;
};

struct GroundTruth {
  FeatureNetwork network;
  std::vector<std::uint8_t> labels;
  std::vector<int> target;  // sorted node indices; empty when none
  std::uint64_t seed = 0;
};

GroundTruth build_designed_network(const DesignedNetworkSpec& spec, std::uint64_t seed);

/// Scale-free network with Ising labels.
GroundTruth build_ising_truth(int n, int attach_edges, const IsingPriorConfig& ising, int sweeps,
                              std::uint64_t seed);

struct SelectionMetrics {
  double gene_tpr = 0.0;
  double gene_fpr = 0.0;
  double gene_fdr = 0.0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  int true_negatives = 0;
  // Per replicate: 1 if a selected component equals the target exactly.
  double subnet_exact = 0.0;
  // Per replicate: 1 if a selected component strictly contains the target.
  double subnet_larger = 0.0;
  double subnet_fdr = 0.0;
};

SelectionMetrics score_selection(const GroundTruth& truth, std::span<const std::uint8_t> selected);

/// Means over replicates; subnet_fdr = sum larger / (sum exact + sum larger), 0 when both are 0.
SelectionMetrics aggregate_metrics(std::span<const SelectionMetrics> replicates);

}  // namespace netdpm
