#include "netdpm/hodc.hpp"

#include <cmath>
#include <numbers>

#include "netdpm/density.hpp"
#include "netdpm/error.hpp"

namespace netdpm {

void OrderedDensitySet::validate() const {
  for (std::size_t g = 0; g < components.size(); ++g) {
    const auto& c = components[g];
    if (!(c.weight > 0.0)) throw DomainError("component " + std::to_string(g + 1) + " has nonpositive weight");
    if (!(c.variance > 0.0)) throw DomainError("component " + std::to_string(g + 1) + " has nonpositive variance");
    if (g > 0 && !(components[g - 1].mean < c.mean)) {
      throw DomainError("component means must be strictly increasing (component " + std::to_string(g + 1) + ")");
    }
  }
}

namespace {

double total_weight(std::span<const MixtureComponent> s) {
  double w = 0.0;
  for (const auto& c : s) w += c.weight;
  return w;
}

// sum_a sum_b w_a w_b N(m_a - m_b; 0, v_a + v_b) with raw weights.
double cross_term(std::span<const MixtureComponent> a, std::span<const MixtureComponent> b) {
  double s = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) s += x.weight * y.weight * normal_pdf(x.mean - y.mean, 0.0, x.variance + y.variance);
  }
  return s;
}

}  // namespace

double mixture_l2_distance(std::span<const MixtureComponent> a, std::span<const MixtureComponent> b) {
  if (a.empty() || b.empty()) throw DomainError("L2 distance needs two nonempty mixtures");
  const double wa = total_weight(a);
  const double wb = total_weight(b);
  const double d = cross_term(a, a) / (wa * wa) + cross_term(b, b) / (wb * wb) -
                   2.0 * cross_term(a, b) / (wa * wb);
  return std::max(0.0, d);
}

HodcPartition hodc_run(const OrderedDensitySet& set) {
  set.validate();
  const int total = static_cast<int>(set.size());
  if (total < 2) throw DomainError("HODC needs at least two components to split");
  std::span<const MixtureComponent> comps(set.components);
  auto members = [&](const ClusterRange& c) {
    return comps.subspan(static_cast<std::size_t>(c.first), static_cast<std::size_t>(c.size()));
  };

  HodcPartition out;
  std::vector<ClusterRange> clusters;
  for (int g = 0; g < total; ++g) clusters.push_back({g, g});
  // gap[l] = distance between clusters l and l + 1.
  std::vector<double> gap;
  for (int l = 0; l + 1 < total; ++l) gap.push_back(mixture_l2_distance(members(clusters[l]), members(clusters[l + 1])));
  out.steps.push_back(clusters);

  while (clusters.size() > 2) {
    std::size_t best = 0;
    for (std::size_t l = 1; l < gap.size(); ++l) {
      if (gap[l] < gap[best]) best = l;
    }
    clusters[best].last = clusters[best + 1].last;
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    gap.erase(gap.begin() + static_cast<std::ptrdiff_t>(best));
    if (best > 0) gap[best - 1] = mixture_l2_distance(members(clusters[best - 1]), members(clusters[best]));
    if (best < gap.size()) gap[best] = mixture_l2_distance(members(clusters[best]), members(clusters[best + 1]));
    out.merged_at.push_back(static_cast<int>(best));
    out.steps.push_back(clusters);
  }
  return out;
}

std::pair<int, int> estimate_component_counts(std::span<const OrderedDensitySet> draws) {
  double sum0 = 0.0;
  double sum1 = 0.0;
  int used = 0;
  for (const auto& d : draws) {
    if (d.size() < 2) continue;
    auto [l0, l1] = hodc_run(d).split_sizes();
    sum0 += l0;
    sum1 += l1;
    ++used;
  }
  if (used == 0) return {1, 1};
  auto round_half_up = [](double x) { return std::max(1, static_cast<int>(std::floor(x + 0.5))); };
  return {round_half_up(sum0 / used), round_half_up(sum1 / used)};
}

}  // namespace netdpm
