#include "netdpm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "netdpm/density.hpp"
#include "netdpm/error.hpp"

namespace netdpm {

// Golub-Welsch eigenvalues as starting points, then Newton polishing on the
// orthonormal Hermite recurrence, which also yields the weights.
GaussHermiteRule::GaussHermiteRule(int nodes) {
  if (nodes < 1 || nodes > 400) throw DomainError("Gauss-Hermite node count must be in [1, 400]");
  const int n = nodes;
  const double pi_m4 = std::pow(std::numbers::pi, -0.25);
  nodes_.assign(static_cast<std::size_t>(n), 0.0);
  weights_.assign(static_cast<std::size_t>(n), 0.0);

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) sub[j - 1] = std::sqrt(j / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& start = eig.eigenvalues();

  for (int i = 0; i < n; ++i) {
    double z = start[i];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pi_m4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    nodes_[static_cast<std::size_t>(i)] = z;
    weights_[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
  }
}

const GaussHermiteRule& gauss_hermite_rule(int nodes) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nodes];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(nodes);
  return *slot;
}

double log_new_component_marginal_fixed(double r, const ClassPrior& prior,
                                        const GaussHermiteRule& rule) {
  const double a = prior.alpha;
  const double b = prior.beta;
  const double xi = std::sqrt(prior.xi2);
  const double shape = a + 0.5;
  // Gamma(a+1/2) b^a / (sqrt(2 pi) Gamma(a)) from the variance integral, and
  // 1/sqrt(pi) from the change of variables into the Hermite weight.
  const double log_const = std::lgamma(shape) + a * std::log(b) - std::lgamma(a) - kLogSqrt2Pi -
                           0.5 * std::log(std::numbers::pi);
  const auto& x = rule.nodes();
  const auto& w = rule.weights();
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = r - (prior.gamma + std::numbers::sqrt2 * xi * x[k]);
    terms[k] = std::log(w[k]) - shape * std::log(b + 0.5 * d * d);
    peak = std::max(peak, terms[k]);
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - peak);
  const double out = log_const + peak + std::log(s);
  if (!std::isfinite(out)) {
    std::ostringstream msg;
    msg << "new-component marginal is not finite (r=" << r << ", gamma=" << prior.gamma
        << ", xi2=" << prior.xi2 << ", alpha=" << a << ", beta=" << b << ", nodes=" << rule.size()
        << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

namespace {

// Adaptive Gauss-Kronrod over mu, split at gamma and r, scaled by the larger
// of the integrand values there.
double log_marginal_adaptive(double r, const ClassPrior& prior) {
  const double a = prior.alpha;
  const double b = prior.beta;
  const double shape = a + 0.5;
  const double log_const = std::lgamma(shape) + a * std::log(b) - std::lgamma(a) - kLogSqrt2Pi;
  auto log_f = [&](double mu) {
    const double d = r - mu;
    return log_normal_pdf(mu, prior.gamma, prior.xi2) - shape * std::log(b + 0.5 * d * d);
  };
  const double lo = std::min(prior.gamma, r);
  const double hi = std::max(prior.gamma, r);
  const double scale = std::max(log_f(lo), log_f(hi));
  auto f = [&](double mu) { return std::exp(log_f(mu) - scale); };
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double inf = std::numeric_limits<double>::infinity();
  double total = Rule::integrate(f, -inf, lo, 20, 1e-13) + Rule::integrate(f, hi, inf, 20, 1e-13);
  if (hi > lo) total += Rule::integrate(f, lo, hi, 20, 1e-13);
  return log_const + scale + std::log(total);
}

}  // namespace

double log_new_component_marginal(double r, const ClassPrior& prior, int nodes) {
  if (nodes < 10) throw DomainError("quadrature needs at least 10 nodes");
  double current = log_new_component_marginal_fixed(r, prior, gauss_hermite_rule(nodes));
  int n = nodes;
  bool converged = false;
  while (n < kMaxQuadratureNodes) {
    n = std::min(2 * n, kMaxQuadratureNodes);
    const double refined = log_new_component_marginal_fixed(r, prior, gauss_hermite_rule(n));
    converged = std::abs(refined - current) <= 1e-10;
    current = refined;
    if (converged) break;
  }
  if (converged) return current;
  const double out = log_marginal_adaptive(r, prior);
  if (!std::isfinite(out)) {
    std::ostringstream msg;
    msg << "new-component marginal is not finite (r=" << r << ", gamma=" << prior.gamma << ", xi2=" << prior.xi2
        << ", alpha=" << prior.alpha << ", beta=" << prior.beta << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

double new_component_marginal(double r, const ClassPrior& prior, int nodes) {
  return std::exp(log_new_component_marginal(r, prior, nodes));
}

}  // namespace netdpm
