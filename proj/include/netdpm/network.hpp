#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netdpm {

using Edge = std::pair<int, int>;

/// Undirected, unweighted feature network in compressed adjacency form.
///
/// Each node carries a weight omega_i > 0 and the derived neighbour average
/// omega_tilde_i = sum_j c_ij omega_j / sum_j c_ij (omega_i itself for
/// isolated nodes). The pair coupling used by the Ising prior for edge
/// (i, j) is (omega_i + omega_j) / 2, stored alongside each neighbour entry.
/// Immutable after construction.
class FeatureNetwork {
 public:
  FeatureNetwork() = default;

  // Builds from 0-based endpoint pairs. Duplicate and reversed pairs collapse
  // to one edge; self-loops and out-of-range endpoints throw DomainError.
  // An empty `omega` means unit weights.
  static FeatureNetwork from_edges(std::size_t n, std::span<const Edge> edges,
                                   std::vector<double> omega = {});

  std::size_t size() const { return omega_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }

  std::span<const int> neighbors(int i) const {
    const auto b = offsets_[static_cast<std::size_t>(i)];
    return {adjacency_.data() + b, offsets_[static_cast<std::size_t>(i) + 1] - b};
  }
  std::span<const double> couplings(int i) const {
    const auto b = offsets_[static_cast<std::size_t>(i)];
    return {coupling_.data() + b, offsets_[static_cast<std::size_t>(i) + 1] - b};
  }
  int degree(int i) const { return static_cast<int>(neighbors(i).size()); }
  double omega(int i) const { return omega_[static_cast<std::size_t>(i)]; }
  double omega_tilde(int i) const { return omega_tilde_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& omega_tilde() const { return omega_tilde_; }

  bool has_edge(int i, int j) const;
  // Edges as (i, j) with i < j, sorted.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<int> adjacency_;
  std::vector<double> coupling_;
  std::vector<double> omega_;
  std::vector<double> omega_tilde_;
};

// One row of an edge-list file. `value` is the optional third column.
struct EdgeRow {
  std::string a;
  std::string b;
  double value = 1.0;
  std::size_t line = 0;
};

/// Resolves id-based edge rows against the statistics ids. Rows whose third
/// column is 0 are skipped; any other value is an edge (c_ij is binary).
/// Unknown ids raise IngestionError listing the offenders; nonpositive node
/// weights raise DomainError. Missing node weights default to 1.
FeatureNetwork load_network(std::span<const EdgeRow> rows, std::span<const std::string> feature_ids,
                            const std::unordered_map<std::string, double>& node_weights = {});

struct Subnetwork {
  std::vector<int> nodes;  // sorted
  std::vector<Edge> edges;
};

struct SubnetworkExtraction {
  std::vector<Subnetwork> subnetworks;  // size >= 2, largest first
  std::vector<int> isolated;            // selected nodes with no selected neighbour
};

/// Connected components of the subgraph induced by the selected nodes.
SubnetworkExtraction extract_subnetworks(std::span<const std::uint8_t> selected,
                                         const FeatureNetwork& net);

}  // namespace netdpm
