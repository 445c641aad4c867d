#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "netdpm/model.hpp"

namespace oracle {

inline double normal_pdf(double x, double m, double v) {
  return std::exp(-0.5 * (x - m) * (x - m) / v) / std::sqrt(2 * std::numbers::pi * v);
}

// Adaptive Gauss-Kronrod on [lo, hi].
template <typename F>
double integrate(F f, double lo, double hi, double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 18, tol);
}

// Prior predictive of r under N(gamma, xi2) x IG(alpha, beta), integrating the
// Student-t kernel over mu numerically.
inline double new_component_marginal(double r, const netdpm::ClassPrior& p) {
  const double a = p.alpha, b = p.beta;
  const double c = std::lgamma(a + 0.5) - std::lgamma(a) - 0.5 * std::log(2 * std::numbers::pi * b);
  const double xi = std::sqrt(p.xi2);
  return integrate(
      [&](double x) {
        const double mu = p.gamma + xi * x;
        return std::exp(c - (a + 0.5) * std::log1p((r - mu) * (r - mu) / (2 * b)) - 0.5 * x * x) /
               std::sqrt(2 * std::numbers::pi);
      },
      -40.0, 40.0);
}

inline double mixture(const std::vector<netdpm::MixtureComponent>& m, double x) {
  double s = 0.0, w = 0.0;
  for (const auto& c : m) {
    s += c.weight * normal_pdf(x, c.mean, c.variance);
    w += c.weight;
  }
  return s / w;
}

}  // namespace oracle
