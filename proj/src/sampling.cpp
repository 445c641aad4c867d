#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "netdpm/density.hpp"
#include "netdpm/error.hpp"

namespace netdpm::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Standard normal restricted to [a, inf) intersected with (., b), a >= 0.
double right_tail(Rng& rng, double a, double b) {
  if (std::isfinite(b) && b * b - a * a <= 2.0) {
    for (;;) {
      const double z = a + (b - a) * rng.uniform();
      if (rng.uniform() < std::exp(0.5 * (a * a - z * z))) return z;
    }
  }
  if (a < 0.5) {
    for (;;) {
      const double z = std::abs(rng.normal());
      if (z > a && z < b) return z;
    }
  }
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(rng.uniform_open()) / lambda;
    const double d = z - lambda;
    if (z < b && rng.uniform() <= std::exp(-0.5 * d * d)) return z;
  }
}

double standard_truncated(Rng& rng, double a, double b) {
  if (a == -kInf && b == kInf) return rng.normal();
  if (a >= 0.0) return right_tail(rng, a, b);
  if (b <= 0.0) return -right_tail(rng, -b, -a);
  if (b - a >= std::sqrt(2.0 * std::numbers::pi)) {
    for (;;) {
      const double z = rng.normal();
      if (z > a && z < b) return z;
    }
  }
  for (;;) {
    const double z = a + (b - a) * rng.uniform();
    if (rng.uniform() < std::exp(-0.5 * z * z)) return z;
  }
}

double log_birth_kernel(double mu, double r, const ClassPrior& prior) {
  const double d = r - mu;
  return -(prior.alpha + 0.5) * std::log1p(0.5 * d * d / prior.beta);
}

double grid_birth_mean(Rng& rng, double r, const ClassPrior& prior, double lo, double hi) {
  const double xi = std::sqrt(prior.xi2);
  const double scale = std::max(xi, std::sqrt(prior.beta / (prior.alpha + 0.5)));
  const double width = 12.0 * scale;
  double left = std::min(prior.gamma, r) - width;
  double right = std::max(prior.gamma, r) + width;
  if (hi <= left) {
    left = hi - width;
    right = hi;
  } else if (lo >= right) {
    left = lo;
    right = lo + width;
  }
  left = std::max(left, lo);
  right = std::min(right, hi);

  constexpr int kCells = 2048;
  const double step = (right - left) / kCells;
  std::vector<double> mass(kCells);
  double peak = -kInf;
  for (int c = 0; c < kCells; ++c) {
    const double mu = left + (c + 0.5) * step;
    const double d = mu - prior.gamma;
    mass[static_cast<std::size_t>(c)] = -0.5 * d * d / prior.xi2 + log_birth_kernel(mu, r, prior);
    peak = std::max(peak, mass[static_cast<std::size_t>(c)]);
  }
  double total = 0.0;
  for (double& m : mass) {
    m = std::exp(m - peak);
    total += m;
  }
  double target = rng.uniform() * total;
  int cell = 0;
  for (; cell < kCells - 1; ++cell) {
    if (target < mass[static_cast<std::size_t>(cell)]) break;
    target -= mass[static_cast<std::size_t>(cell)];
  }
  return strictly_inside(left + (cell + rng.uniform()) * step, lo, hi);
}

}  // namespace

double strictly_inside(double value, double lo, double hi) {
  if (value > lo && value < hi) return value;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid > lo && mid < hi) return mid;
  }
  if (value <= lo) value = std::nextafter(lo, kInf);
  if (value >= hi) value = std::nextafter(hi, -kInf);
  if (!(value > lo && value < hi)) {
    std::ostringstream msg;
    msg << "no representable value strictly inside (" << lo << ", " << hi << ")";
    throw NumericalError(msg.str());
  }
  return value;
}

double sample_truncated_normal(Rng& rng, double mean, double sd, double lo, double hi) {
  if (!(sd > 0.0) || !std::isfinite(mean) || !std::isfinite(sd)) {
    std::ostringstream msg;
    msg << "truncated normal with mean " << mean << " and sd " << sd;
    throw NumericalError(msg.str());
  }
  if (!(lo < hi)) throw InvalidStateError("empty truncation interval");
  const double z = standard_truncated(rng, (lo - mean) / sd, (hi - mean) / sd);
  return strictly_inside(mean + sd * z, lo, hi);
}

double sample_birth_mean(Rng& rng, double r, const ClassPrior& prior, double lo, double hi) {
  const double xi = std::sqrt(prior.xi2);
  const double log_kmax = log_birth_kernel(std::clamp(r, lo, hi), r, prior);
  for (int trial = 0; trial < 32; ++trial) {
    const double mu = sample_truncated_normal(rng, prior.gamma, xi, lo, hi);
    if (std::log(rng.uniform_open()) < log_birth_kernel(mu, r, prior) - log_kmax) return mu;
  }
  return grid_birth_mean(rng, r, prior, lo, hi);
}

MixtureComponent sample_birth(Rng& rng, double r, const ClassPrior& prior, double lo, double hi) {
  MixtureComponent c;
  c.mean = sample_birth_mean(rng, r, prior, lo, hi);
  const double d = r - c.mean;
  c.variance = rng.inverse_gamma(prior.alpha + 0.5, prior.beta + 0.5 * d * d);
  c.weight = 0.0;
  return c;
}

void update_component(Rng& rng, MixtureComponent& comp, std::size_t n, double sum, double centered_ss,
                      const ClassPrior& prior, double lo, double hi) {
  const auto ig = conjugate_variance_update(n, 0.0, centered_ss, 0.0, prior);
  comp.variance = rng.inverse_gamma(ig.shape, ig.scale);
  if (!(comp.variance > 0.0) || !std::isfinite(comp.variance)) {
    std::ostringstream msg;
    msg << "component variance draw is " << comp.variance << " (shape " << ig.shape << ", scale "
        << ig.scale << ")";
    throw NumericalError(msg.str());
  }
  const auto post = conjugate_mean_update(n, sum, comp.variance, prior);
  comp.mean = sample_truncated_normal(rng, post.mean, std::sqrt(post.variance), lo, hi);
}

std::size_t sample_categorical(Rng& rng, std::span<const double> probs) {
  double u = rng.uniform();
  for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
    if (u < probs[k]) return k;
    u -= probs[k];
  }
  return probs.size() - 1;
}

IsingEnergies::IsingEnergies(const FeatureNetwork& net, const IsingPriorConfig& cfg)
    : net_(&net),
      log_pi_{std::log(cfg.pi0), std::log1p(-cfg.pi0)},
      rho_{cfg.rho[0], cfg.rho[1]},
      coupling_total_(net.size(), 0.0) {
  for (int i = 0; i < static_cast<int>(net.size()); ++i) {
    for (double w : net.couplings(i)) coupling_total_[static_cast<std::size_t>(i)] += w;
  }
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto low = static_cast<std::size_t>(std::floor(h));
  if (low + 1 >= values.size()) return values.back();
  return values[low] + (h - static_cast<double>(low)) * (values[low + 1] - values[low]);
}

std::vector<std::uint8_t> initial_labels(std::span<const double> r, std::span<const std::uint8_t> fixed) {
  const double cut = quantile(std::vector<double>(r.begin(), r.end()), 0.8);
  std::vector<std::uint8_t> z(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    z[i] = (r[i] > cut || (!fixed.empty() && fixed[i])) ? 1 : 0;
  }
  return z;
}

}  // namespace netdpm::detail
