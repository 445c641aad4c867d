#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "netdpm/error.hpp"
#include "netdpm/model.hpp"
#include "netdpm/network.hpp"
#include "netdpm/samplers.hpp"

namespace netdpm::detail {

inline void check_chain_inputs(const StatisticsVector& r, const FeatureNetwork& net,
                               std::span<const std::uint8_t> fixed) {
  r.validate();
  if (net.size() != r.size()) {
    throw DomainError("network has " + std::to_string(net.size()) + " nodes but there are " +
                      std::to_string(r.size()) + " statistics");
  }
  if (!fixed.empty() && fixed.size() != r.size()) {
    throw DomainError("sure-selected mask has " + std::to_string(fixed.size()) + " entries, expected " +
                      std::to_string(r.size()));
  }
}

// Drives a chain through burn-in and retention. Chain provides
//   double sweep(bool track)        one full sweep; sum of log P(z_i | rest) when tracked
//   MixtureState snapshot(bool)     current state, assignments optional
//   std::span<const uint8_t> labels()
//   void check() const              full recount; throws InvalidStateError
template <typename Chain>
PosteriorDraws run_chain(Chain& chain, const SamplerConfig& cfg, std::size_t n) {
  PosteriorDraws out;
  out.inclusion_tallies.assign(n, 0);
  if (cfg.keep_snapshots) out.snapshots.reserve(static_cast<std::size_t>(cfg.retained_count()));
  double pl_sum = 0.0;
  for (int t = 0; t < cfg.iterations; ++t) {
    const bool retain = t >= cfg.burn_in && (t - cfg.burn_in + 1) % cfg.thin == 0;
    const double pl = chain.sweep(cfg.track_pseudo_likelihood && retain);
    if (retain) {
      ++out.retained;
      auto z = chain.labels();
      for (std::size_t i = 0; i < n; ++i) out.inclusion_tallies[i] += z[i];
      if (cfg.validate_each_draw) chain.check();
      if (cfg.keep_snapshots) out.snapshots.push_back(chain.snapshot(cfg.store_assignments));
      pl_sum += pl;
    }
    if (cfg.progress && (t + 1) % cfg.progress_stride == 0) cfg.progress(t + 1);
  }
  if (cfg.track_pseudo_likelihood && out.retained > 0) out.mean_log_pseudo_likelihood = pl_sum / out.retained;
  return out;
}

}  // namespace netdpm::detail
