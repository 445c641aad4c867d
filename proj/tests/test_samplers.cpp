#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "netdpm/error.hpp"
#include "netdpm/random.hpp"
#include "netdpm/samplers.hpp"
#include "oracles.hpp"

using namespace netdpm;

namespace {

BasePrior two_class_prior() {
  BasePrior p;
  p.classes[0] = {0.0, 1.0, 3.0, 2.0, 1.0};
  p.classes[1] = {3.0, 1.0, 3.0, 2.0, 1.0};
  return p;
}

SamplerConfig quick(int iterations, int burn_in, std::uint64_t seed = 7) {
  SamplerConfig c;
  c.iterations = iterations;
  c.burn_in = burn_in;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("sampler configuration checks") {
  CHECK_NOTHROW(quick(10, 2).validate());
  CHECK_THROWS_AS(quick(10, 10).validate(), Error);
  auto c = quick(10, 2);
  c.thin = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = quick(10, 2);
  c.thin = 3;
  CHECK(c.retained_count() == 2);
}

TEST_CASE("posterior summary rules") {
  PosteriorDraws d;
  d.retained = 10;
  d.inclusion_tallies = {10, 5, 0};
  const auto rep = posterior_summary(d);
  CHECK(rep.probabilities == std::vector<double>{1.0, 0.5, 0.0});
  CHECK(rep.selected == std::vector<std::uint8_t>{1, 0, 0});
  CHECK(make_report({0.687}).selected[0] == 1);
  CHECK(make_report({0.478}).selected[0] == 0);
  CHECK(posterior_summary(d, SelectionRule::kThreshold, 0.4).selected[1] == 1);
  CHECK(posterior_summary(d, SelectionRule::kThreshold, 0.4).num_selected() == 2);
}

TEST_CASE("single isolated feature matches two-group Bayes") {
  const auto prior = two_class_prior();
  const auto net = FeatureNetwork::from_edges(1, {});
  const IsingPriorConfig ising{0.6, {0.0, 0.0}};
  for (double r : {0.5, 1.7, 3.0}) {
    const auto data = StatisticsVector::from_values({r});
    const double m0 = ising.pi0 * oracle::new_component_marginal(r, prior.classes[0]);
    const double m1 = (1 - ising.pi0) * oracle::new_component_marginal(r, prior.classes[1]);
    const auto rep = posterior_summary(net_dpm1_run(data, net, prior, ising, quick(20000, 1000)));
    CHECK(std::abs(rep.probabilities[0] - m1 / (m0 + m1)) < 0.02);
  }
}

TEST_CASE("fully pinned labels never move") {
  const auto data = StatisticsVector::from_values({0.1, 2.0, -0.5, 3.5});
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  const auto net = FeatureNetwork::from_edges(4, edges);
  const std::vector<std::uint8_t> fixed(4, 1);
  auto cfg = quick(300, 50);
  cfg.validate_each_draw = true;
  const auto draws = net_dpm1_run(data, net, two_class_prior(), {0.8, {1.0, 1.0}}, cfg, fixed);
  CHECK(draws.inclusion_tallies == std::vector<int>(4, draws.retained));
  for (const auto& s : draws.snapshots) {
    CHECK(std::all_of(s.labels.begin(), s.labels.end(), [](auto z) { return z == 1; }));
    for (int g = 0; g < s.num_null; ++g) CHECK(s.counts[static_cast<std::size_t>(g)] == 0);
  }
}

TEST_CASE("NET-DPM-2 symmetric case") {
  BasePrior prior;
  prior.classes[0] = {-2.0, 1.0, 3.0, 2.0, 1.0};
  prior.classes[1] = {2.0, 1.0, 3.0, 2.0, 1.0};
  const auto data = StatisticsVector::from_values({0.0});
  const auto net = FeatureNetwork::from_edges(1, {});
  const auto rep = posterior_summary(net_dpm2_run(data, net, prior, {0.5, {0.0, 0.0}}, 1, 1, quick(40000, 1000)));
  CHECK(std::abs(rep.probabilities[0] - 0.5) < 0.03);
}

TEST_CASE("samplers keep state invariants on every draw") {
  Rng rng(2);
  std::vector<double> values;
  for (int i = 0; i < 40; ++i) values.push_back(i < 30 ? rng.normal() : rng.normal(3.0, 1.0));
  const auto data = StatisticsVector::from_values(values);
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < 40; ++i) edges.push_back({i, i + 1});
  const auto net = FeatureNetwork::from_edges(40, edges);
  auto cfg = quick(400, 100);
  cfg.validate_each_draw = true;
  cfg.store_assignments = true;
  const auto d1 = net_dpm1_run(data, net, two_class_prior(), {0.75, {1.0, 2.0}}, cfg);
  const auto d2 = net_dpm2_run(data, net, two_class_prior(), {0.75, {1.0, 2.0}}, 2, 2, cfg);
  CHECK(d1.retained == 300);
  for (const auto* d : {&d1, &d2}) {
    CHECK(d->snapshots.size() == 300);
    for (const auto& s : d->snapshots) {
      for (std::size_t c = 1; c < s.components.size(); ++c) CHECK(s.components[c - 1].mean < s.components[c].mean);
      for (std::size_t i = 0; i < s.labels.size(); ++i) CHECK(s.labels[i] == (s.assignments[i] > 0 ? 1 : 0));
    }
  }
  for (const auto& s : d2.snapshots) CHECK(s.components.size() == 4);
}

TEST_CASE("identical seeds give identical chains") {
  const auto data = StatisticsVector::from_values({-0.2, 0.4, 2.9, 3.3, 0.1, 1.5});
  const std::vector<Edge> edges{{0, 1}, {2, 3}, {3, 4}};
  const auto net = FeatureNetwork::from_edges(6, edges);
  const auto a = net_dpm1_run(data, net, two_class_prior(), {0.7, {1.0, 1.0}}, quick(500, 100));
  const auto b = net_dpm1_run(data, net, two_class_prior(), {0.7, {1.0, 1.0}}, quick(500, 100));
  CHECK(a.inclusion_tallies == b.inclusion_tallies);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t t = 0; t < a.snapshots.size(); ++t) {
    REQUIRE(a.snapshots[t].components.size() == b.snapshots[t].components.size());
    for (std::size_t c = 0; c < a.snapshots[t].components.size(); ++c) {
      CHECK(a.snapshots[t].components[c].mean == b.snapshots[t].components[c].mean);
      CHECK(a.snapshots[t].components[c].variance == b.snapshots[t].components[c].variance);
    }
  }
  const auto c = net_dpm1_run(data, net, two_class_prior(), {0.7, {1.0, 1.0}}, quick(500, 100, 8));
  CHECK(c.inclusion_tallies != a.inclusion_tallies);
}

TEST_CASE("standard DPM on constant data") {
  const auto data = StatisticsVector::from_values(std::vector<double>(50, 2.5));
  const ClassPrior prior{0.0, 4.0, 2.0, 1.0, 1.0};
  const auto draws = std_dpm_run(data, prior, quick(1000, 500));
  // Posterior sd of the mean is about 0.027 here.
  double dominant = 0.0, centre = 0.0;
  for (const auto& d : draws) {
    const auto top = std::max_element(d.components.begin(), d.components.end(),
                                      [](const auto& a, const auto& b) { return a.weight < b.weight; });
    CHECK(std::abs(top->mean - 2.5) < 0.15);
    dominant += top->weight / static_cast<double>(draws.size());
    centre += top->mean / static_cast<double>(draws.size());
  }
  CHECK(dominant > 0.9);
  CHECK(std::abs(centre - 2.5) < 0.02);
}

TEST_CASE("standard DPM density is as close to the truth as a kernel estimate") {
  Rng rng(41);
  std::vector<double> values(200);
  for (auto& v : values) v = rng.normal();
  const auto data = StatisticsVector::from_values(values);
  const auto draws = std_dpm_run(data, default_std_dpm_prior(data), quick(3000, 1000));

  double mean = 0.0, sq = 0.0;
  for (double v : values) mean += v / 200;
  for (double v : values) sq += (v - mean) * (v - mean) / 199;
  const double h = 1.06 * std::sqrt(sq) * std::pow(200.0, -0.2);
  auto kde = [&](double x) {
    double s = 0.0;
    for (double v : values) s += oracle::normal_pdf(x, v, h * h);
    return s / 200;
  };
  auto fitted = [&](double x) {
    double s = 0.0;
    for (const auto& d : draws) {
      for (const auto& c : d.components) s += c.weight * oracle::normal_pdf(x, c.mean, c.variance);
    }
    return s / static_cast<double>(draws.size());
  };
  double fit_kde = 0.0, fit_true = 0.0, kde_true = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    const double f = fitted(x), k = kde(x), t = oracle::normal_pdf(x, 0.0, 1.0);
    fit_kde += (f - k) * (f - k) * 0.01;
    fit_true += (f - t) * (f - t) * 0.01;
    kde_true += (k - t) * (k - t) * 0.01;
  }
  MESSAGE("L2 fit-kde " << std::sqrt(fit_kde) << ", fit-true " << std::sqrt(fit_true) << ", kde-true "
                        << std::sqrt(kde_true));
  CHECK(std::sqrt(fit_kde) < 0.05);
  CHECK(fit_true <= kde_true);
}

TEST_CASE("bimodal data splits between the modes") {
  Rng rng(4);
  std::vector<double> values(400);
  for (auto& v : values) v = rng.bernoulli(0.5) ? rng.normal(6.0, 1.0) : rng.normal();
  const auto data = StatisticsVector::from_values(values);
  const auto draws = std_dpm_run(data, default_std_dpm_prior(data), quick(2000, 1000));
  std::vector<double> boundaries;
  for (const auto& d : draws) {
    if (d.size() < 2) continue;
    const auto split = hodc_run(d).final_split();
    const double lo = d.components[static_cast<std::size_t>(split[0].last)].mean;
    const double hi = d.components[static_cast<std::size_t>(split[1].first)].mean;
    boundaries.push_back(0.5 * (lo + hi));
  }
  REQUIRE(boundaries.size() > 500);
  std::nth_element(boundaries.begin(), boundaries.begin() + boundaries.size() / 2, boundaries.end());
  const double median = boundaries[boundaries.size() / 2];
  CHECK(median > 2.0);
  CHECK(median < 4.0);
}

TEST_CASE("pooled prior for the standard DPM") {
  const auto data = StatisticsVector::from_values({1.0, 2.0, 3.0, 4.0});
  const auto p = default_std_dpm_prior(data);
  CHECK(p.gamma == doctest::Approx(2.5));
  CHECK(p.xi2 == doctest::Approx(5.0 / 3.0));
  CHECK(p.alpha == 2.0);
  CHECK(p.beta == doctest::Approx(5.0 / 6.0));
  CHECK(p.tau == 1.0);
}
