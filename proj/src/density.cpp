#include "netdpm/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "netdpm/error.hpp"

namespace netdpm {

double log_normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -kLogSqrt2Pi - 0.5 * std::log(variance) - 0.5 * d * d / variance;
}

double normal_pdf(double x, double mean, double variance) {
  return std::exp(log_normal_pdf(x, mean, variance));
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

void normalize_log_weights(std::span<double> log_weights) {
  const double lse = log_sum_exp(log_weights);
  if (!std::isfinite(lse)) throw NumericalError("log-weights do not normalize (log-sum is not finite)");
  for (double& w : log_weights) w = std::exp(w - lse);
}

StatisticsVector transform_pvalues(std::span<const double> p, std::vector<std::string> feature_ids) {
  const boost::math::normal_distribution<double> std_normal;
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0 && p[i] < 1.0)) {
      std::ostringstream msg;
      msg << "p-value at index " << i << " is " << p[i] << "; must lie strictly inside (0,1)";
      throw DomainError(msg.str());
    }
    // -Phi^{-1}(p) = Phi^{-1}(1 - p), taken through the complement so small p keep precision.
    r[i] = boost::math::quantile(boost::math::complement(std_normal, p[i]));
  }
  if (feature_ids.empty()) {
    auto out = StatisticsVector::from_values(std::move(r));
    return out;
  }
  StatisticsVector out{std::move(r), std::move(feature_ids)};
  return out;
}

namespace {

void check_weights(std::span<const MixtureComponent> comps) {
  if (comps.empty()) throw InvalidStateError("mixture has no components");
  double total = 0.0;
  for (const auto& c : comps) total += c.weight;
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "mixture weights sum to " << total << ", expected 1";
    throw DomainError(msg.str());
  }
}

double log_mixture(double r, std::span<const MixtureComponent> comps) {
  double m = -std::numeric_limits<double>::infinity();
  // Two passes keep this allocation-free.
  for (const auto& c : comps) {
    if (c.weight > 0.0) m = std::max(m, std::log(c.weight) + log_normal_pdf(r, c.mean, c.variance));
  }
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (const auto& c : comps) {
    if (c.weight > 0.0) s += std::exp(std::log(c.weight) + log_normal_pdf(r, c.mean, c.variance) - m);
  }
  return m + std::log(s);
}

}  // namespace

double log_class_density(double r, std::span<const MixtureComponent> comps) {
  check_weights(comps);
  return log_mixture(r, comps);
}

double class_density(double r, std::span<const MixtureComponent> comps) {
  return std::exp(log_class_density(r, comps));
}

double marginal_density(double r, const MixtureState& state, double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw DomainError("p0 must lie in [0,1]");
  double out = 0.0;
  if (p0 > 0.0) out += p0 * class_density(r, state.null_components());
  if (p0 < 1.0) out += (1.0 - p0) * class_density(r, state.selected_components());
  return out;
}

NormalParams conjugate_mean_update(std::size_t n, double sum, double variance,
                                   const ClassPrior& prior) {
  const double denom = variance + prior.xi2 * static_cast<double>(n);
  return {(variance * prior.gamma + prior.xi2 * sum) / denom, variance * prior.xi2 / denom};
}

NormalParams conjugate_mean_update(std::span<const double> data, double variance,
                                   const ClassPrior& prior) {
  double sum = 0.0;
  for (double x : data) sum += x;
  return conjugate_mean_update(data.size(), sum, variance, prior);
}

InverseGammaParams conjugate_variance_update(std::size_t n, double sum, double sum_sq, double mean,
                                             const ClassPrior& prior) {
  const double ss = std::max(0.0, sum_sq - 2.0 * mean * sum + static_cast<double>(n) * mean * mean);
  return {prior.alpha + 0.5 * static_cast<double>(n), prior.beta + 0.5 * ss};
}

InverseGammaParams conjugate_variance_update(std::span<const double> data, double mean,
                                             const ClassPrior& prior) {
  double ss = 0.0;
  for (double x : data) ss += (x - mean) * (x - mean);
  return {prior.alpha + 0.5 * static_cast<double>(data.size()), prior.beta + 0.5 * ss};
}

}  // namespace netdpm
