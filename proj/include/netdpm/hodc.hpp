#pragma once

#include <span>
#include <utility>
#include <vector>

#include "netdpm/model.hpp"

namespace netdpm {

/// Gaussian components sorted by strictly increasing mean, with positive
/// weights. One posterior draw of a standard DPM fit is one such set.
struct OrderedDensitySet {
  std::vector<MixtureComponent> components;

  std::size_t size() const { return components.size(); }
  void validate() const;
};

/// Squared L2 distance between two Gaussian mixtures, each renormalized to
/// unit total weight. Closed form via
///   int N(x; m1, v1) N(x; m2, v2) dx = N(m1 - m2; 0, v1 + v2).
/// Throws DomainError when either subset is empty.
double mixture_l2_distance(std::span<const MixtureComponent> a, std::span<const MixtureComponent> b);

// A contiguous run [first, last] of component indices (0-based, inclusive).
struct ClusterRange {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  friend bool operator==(const ClusterRange&, const ClusterRange&) = default;
};

/// Full merge history of hierarchical ordered density clustering.
/// steps[m] holds the L - m clusters present after m merges, for
/// m = 0 .. L - 2; merged_at[m] is the left index of the pair merged at
/// step m.
struct HodcPartition {
  std::vector<std::vector<ClusterRange>> steps;
  std::vector<int> merged_at;

  const std::vector<ClusterRange>& final_split() const { return steps.back(); }
  // (L0, L1): sizes of the lower and upper final clusters.
  std::pair<int, int> split_sizes() const {
    return {final_split()[0].size(), final_split()[1].size()};
  }
};

/// Greedy adjacent merging under the renormalized-mixture L2 distance until
/// two clusters remain. Ties merge the leftmost pair. Only distances next to
/// the latest merge are recomputed. Needs at least two components.
HodcPartition hodc_run(const OrderedDensitySet& set);

/// Averages the per-draw final split sizes (round half up, floored at 1).
/// Draws with fewer than two components carry no split and are skipped;
/// if none remain the result is (1, 1).
std::pair<int, int> estimate_component_counts(std::span<const OrderedDensitySet> draws);

}  // namespace netdpm
