#pragma once

#include <vector>

#include "netdpm/model.hpp"

namespace netdpm {

inline constexpr int kDefaultQuadratureNodes = 40;

// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
class GaussHermiteRule {
 public:
  explicit GaussHermiteRule(int nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Shared, lazily built rule for a node count. Thread-safe.
const GaussHermiteRule& gauss_hermite_rule(int nodes);

// Largest node count the refinement in new_component_marginal will use.
inline constexpr int kMaxQuadratureNodes = 320;

/// Prior predictive density of r under a fresh component drawn from the
/// class base measure N(gamma, xi2) x IG(alpha, beta).
///
/// The variance is integrated in closed form; the remaining integral over
/// the mean is evaluated by Gauss-Hermite quadrature after mu = gamma +
/// sqrt(2) xi x. Starting from `nodes`, the rule is doubled until two
/// successive estimates agree to 1e-10 relative (capped at
/// kMaxQuadratureNodes). When even that rule has not settled (a Student-t
/// factor much narrower than xi), adaptive Gauss-Kronrod over mu is used.
/// Throws NumericalError on non-finite intermediates.
double new_component_marginal(double r, const ClassPrior& prior,
                              int nodes = kDefaultQuadratureNodes);
double log_new_component_marginal(double r, const ClassPrior& prior,
                                  int nodes = kDefaultQuadratureNodes);

// Same integral with exactly the given rule, no refinement.
double log_new_component_marginal_fixed(double r, const ClassPrior& prior,
                                        const GaussHermiteRule& rule);

}  // namespace netdpm
