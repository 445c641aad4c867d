#include <doctest.h>

#include <cmath>
#include <vector>

#include "netdpm/error.hpp"
#include "netdpm/fast_approx.hpp"
#include "netdpm/random.hpp"
#include "oracles.hpp"

using namespace netdpm;

namespace {

OrderedDensitySet bimodal_draw(double shift = 0.0) {
  return OrderedDensitySet{{{-0.3 + shift, 1.0, 0.3}, {0.2 + shift, 0.8, 0.3}, {5.8 + shift, 1.0, 0.2}, {6.3 + shift, 1.2, 0.2}}};
}

GuidedDensityPair normal_pair(double m0, double m1) {
  return GuidedDensityPair{{{m0, 1.0, 1.0}}, {{m1, 1.0, 1.0}}};
}

// Exact label marginals on a small unit-weight graph with fixed class densities.
std::vector<double> enumerate(const std::vector<double>& r, const std::vector<Edge>& edges, double pi0,
                              std::array<double, 2> rho, const GuidedDensityPair& pair) {
  const std::size_t n = r.size();
  std::vector<double> marg(n, 0.0);
  double total = 0.0;
  for (unsigned code = 0; code < (1U << n); ++code) {
    double lw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool z = (code >> i) & 1U;
      lw += std::log(z ? 1 - pi0 : pi0) + std::log(oracle::mixture(z ? pair.phi1 : pair.phi0, r[i]));
    }
    for (auto [a, b] : edges) {
      const bool za = (code >> a) & 1U, zb = (code >> b) & 1U;
      if (za == zb) lw += rho[za ? 1 : 0];
    }
    const double w = std::exp(lw);
    total += w;
    for (std::size_t i = 0; i < n; ++i) {
      if ((code >> i) & 1U) marg[i] += w;
    }
  }
  for (auto& m : marg) m /= total;
  return marg;
}

SelectionReport fixed_report(std::vector<double> p, std::optional<double> score = {}) {
  auto rep = make_report(std::move(p));
  rep.log_score = score;
  return rep;
}

}  // namespace

TEST_CASE("guided pair from one draw") {
  const auto draw = bimodal_draw();
  const auto pair = guided_pair(draw);
  REQUIRE(pair.phi0.size() == 2);
  REQUIRE(pair.phi1.size() == 2);
  CHECK(pair.phi0[0].weight == doctest::Approx(0.5));
  CHECK(pair.phi1[1].weight == doctest::Approx(0.5));
  CHECK_NOTHROW(pair.validate());

  const std::vector<OrderedDensitySet> one{draw};
  const auto pairs = build_guided_pairs(one, 1);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].phi0[1].mean == pair.phi0[1].mean);
}

TEST_CASE("identical draws give identical pairs") {
  const std::vector<OrderedDensitySet> draws(10, bimodal_draw());
  const auto pairs = build_guided_pairs(draws, 5);
  REQUIRE(pairs.size() == 5);
  for (const auto& p : pairs) {
    CHECK(p.phi0.size() == pairs[0].phi0.size());
    CHECK(p.phi1[0].mean == pairs[0].phi1[0].mean);
  }
  CHECK_THROWS_AS(build_guided_pairs(draws, 11), DomainError);
}

TEST_CASE("bimodal pairs centre on the modes") {
  std::vector<OrderedDensitySet> draws;
  for (int t = 0; t < 20; ++t) draws.push_back(bimodal_draw(0.02 * (t % 5) - 0.04));
  for (const auto& p : build_guided_pairs(draws, 10)) {
    double m0 = 0.0, m1 = 0.0;
    for (const auto& c : p.phi0) m0 += c.weight * c.mean;
    for (const auto& c : p.phi1) m1 += c.weight * c.mean;
    CHECK(std::abs(m0) < 0.5);
    CHECK(std::abs(m1 - 6.0) < 0.5);
  }
}

TEST_CASE("single-component draws are skipped with a warning") {
  std::vector<OrderedDensitySet> draws{bimodal_draw(), OrderedDensitySet{{{0.0, 1.0, 1.0}}}};
  std::vector<std::string> warnings;
  const auto pairs = build_guided_pairs(draws, 2, &warnings);
  CHECK(pairs.size() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("identical class densities give one half") {
  const auto r = StatisticsVector::from_values({-1.0, 0.0, 2.0});
  const auto net = FeatureNetwork::from_edges(3, {});
  const auto res = net_dpm3_chain(r, net, normal_pair(0.0, 0.0), {0.5, {0.0, 0.0}}, 40000, 1000, 3);
  for (double p : res.probabilities) CHECK(std::abs(p - 0.5) < 0.015);
}

TEST_CASE("likelihood ratio three gives three quarters") {
  const double r = 0.5 + std::log(3.0);
  const auto data = StatisticsVector::from_values({r});
  const auto net = FeatureNetwork::from_edges(1, {});
  for (double rho : {0.0, 7.0}) {
    const auto res = net_dpm3_chain(data, net, normal_pair(0.0, 1.0), {0.5, {rho, rho}}, 40000, 1000, 9);
    CHECK(std::abs(res.probabilities[0] - 0.75) < 0.015);
  }
}

TEST_CASE("path graph marginals match enumeration") {
  const std::vector<double> values{-0.3, 0.4, 1.2, 2.2, 2.9};
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  const auto net = FeatureNetwork::from_edges(5, edges);
  const auto pair = normal_pair(0.0, 2.5);
  const IsingPriorConfig ising{0.5, {1.0, 1.0}};
  const auto exact = enumerate(values, edges, ising.pi0, ising.rho, pair);
  const auto res = net_dpm3_chain(StatisticsVector::from_values(values), net, pair, ising, 50000, 2000, 1);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(res.probabilities[i] - exact[i]) < 0.02);
}

TEST_CASE("pinned features stay selected") {
  const auto data = StatisticsVector::from_values({-2.0, 0.0});
  const auto net = FeatureNetwork::from_edges(2, {});
  const std::vector<std::uint8_t> fixed{1, 0};
  const auto res = net_dpm3_chain(data, net, normal_pair(0.0, 3.0), {0.9, {0.0, 0.0}}, 200, 50, 1, false, fixed);
  CHECK(res.probabilities[0] == 1.0);
}

TEST_CASE("NET-DPM-3 is independent of the thread count") {
  std::vector<double> values;
  for (int i = 0; i < 30; ++i) values.push_back(i % 4 == 0 ? 3.0 + 0.1 * i : 0.05 * i - 0.7);
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < 30; ++i) edges.push_back({i, i + 1});
  const auto data = StatisticsVector::from_values(values);
  const auto net = FeatureNetwork::from_edges(30, edges);
  const std::vector<GuidedDensityPair> pairs{normal_pair(0.0, 3.0), normal_pair(0.2, 3.5), normal_pair(-0.1, 2.8)};
  Net3Config cfg;
  cfg.sweeps = 300;
  cfg.burn_in = 50;
  cfg.seed = 12;
  cfg.track_pseudo_likelihood = true;
  const auto one = net_dpm3_run(data, net, pairs, {0.8, {1.0, 2.0}}, cfg);
  cfg.threads = 3;
  const auto three = net_dpm3_run(data, net, pairs, {0.8, {1.0, 2.0}}, cfg);
  CHECK(one.probabilities == three.probabilities);
  REQUIRE(one.log_score.has_value());
  CHECK(*one.log_score == *three.log_score);

  double mean0 = 0.0;
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    const auto chain = net_dpm3_chain(data, net, pairs[v], {0.8, {1.0, 2.0}}, 300, 50, derive_seed(12, v));
    mean0 += chain.probabilities[0] / 3.0;
  }
  CHECK(one.probabilities[0] == doctest::Approx(mean0).epsilon(1e-12));
}

TEST_CASE("hyperparameter grids") {
  CHECK(HyperGrid::default_grid().size() == 40);
  for (std::size_t g = 0; g < 40; ++g) {
    const auto p = HyperGrid::default_grid().point(g);
    CHECK(p.rho[0] < p.rho[1]);
  }
  const std::vector<double> rho{1, 2, 5, 10, 15};
  CHECK(HyperGrid::cartesian({0.8, 0.85, 0.9, 0.95}, rho, rho, false).size() == 100);
  HyperGrid bad = HyperGrid::single({0.8, {1.0, 1.0}});
  bad.pi0_values = {1.2};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("model averaging") {
  const std::vector<double> rho{1.0, 2.0};
  const auto grid = HyperGrid::cartesian({0.7, 0.9}, rho, rho, true);
  REQUIRE(grid.size() == 2);
  const GridRunner runner = [](const IsingPriorConfig& c, std::uint64_t) {
    return fixed_report({c.pi0, 1 - c.pi0}, c.pi0 > 0.8 ? 0.0 : std::log(3.0));
  };

  SUBCASE("uniform weights give the mean") {
    const auto avg = model_average(runner, grid, 1);
    CHECK(avg.report.probabilities[0] == doctest::Approx(0.8));
    CHECK(avg.report.probabilities[1] == doctest::Approx(0.2));
    CHECK(avg.per_point.size() == 2);
  }
  SUBCASE("pseudo-likelihood weights") {
    const auto avg = model_average(runner, grid, 1, AveragingWeights::kPseudoLikelihood);
    CHECK(avg.weights[0] == doctest::Approx(0.75));
    CHECK(avg.report.probabilities[0] == doctest::Approx(0.75 * 0.7 + 0.25 * 0.9));
    CHECK(avg.non_uniform);
  }
  SUBCASE("single point equals a direct run") {
    const auto one = HyperGrid::single({0.6, {1.0, 2.0}});
    const auto avg = model_average(runner, one, 5);
    CHECK(avg.report.probabilities == runner(one.point(0), derive_seed(5, 0)).probabilities);
  }
  SUBCASE("identical points are a no-op") {
    const GridRunner same = [](const IsingPriorConfig&, std::uint64_t) { return fixed_report({0.3, 0.9}); };
    const auto avg = model_average(same, grid, 1, AveragingWeights::kUniform, 2);
    CHECK(avg.report.probabilities[0] == doctest::Approx(0.3));
    CHECK(avg.report.selected == std::vector<std::uint8_t>{0, 1});
  }
  SUBCASE("failures name the grid point") {
    const GridRunner failing = [](const IsingPriorConfig& c, std::uint64_t) -> SelectionReport {
      if (c.pi0 > 0.8) throw NumericalError("boom");
      return fixed_report({0.5});
    };
    try {
      model_average(failing, grid, 1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("0.9") != std::string::npos);
    }
  }
}

TEST_CASE("sure-selected seeding") {
  const std::vector<Edge> star{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 6}};
  const auto net = FeatureNetwork::from_edges(7, star);
  const auto r = StatisticsVector::from_values({1.0, 3.0, 3.0, 3.0, 3.0, 2.0, 2.5});
  const auto rep = make_report({0.1, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9});
  CHECK(pick_sure_selected(rep, net, r, 0).empty());
  CHECK(pick_sure_selected(rep, net, r, 1) == std::vector<int>{0});
  // Leaves see an unselected hub; nodes 5 and 6 see each other.
  CHECK(pick_sure_selected(rep, net, r, 2) == std::vector<int>{0, 6});
  const auto tied = StatisticsVector::from_values({1.0, 3.0, 3.0, 3.0, 3.0, 2.0, 2.0});
  CHECK(pick_sure_selected(rep, net, tied, 3) == std::vector<int>{0, 5, 6});
}

TEST_CASE("standard DPM selection") {
  const std::vector<OrderedDensitySet> draws{OrderedDensitySet{{{0.0, 1.0, 0.5}, {6.0, 1.0, 0.5}}}};
  const auto r = StatisticsVector::from_values({3.0, 6.0});
  const auto rep = std_dpm_selection(r, draws);
  CHECK(rep.probabilities[0] == doctest::Approx(0.5));
  CHECK(rep.selected[0] == 0);
  const double hi = oracle::normal_pdf(6.0, 6.0, 1.0), lo = oracle::normal_pdf(6.0, 0.0, 1.0);
  CHECK(rep.probabilities[1] == doctest::Approx(hi / (hi + lo)));
}

TEST_CASE("base prior from standard draws") {
  const std::vector<OrderedDensitySet> draws{OrderedDensitySet{{{0.0, 1.0, 0.4}, {0.2, 1.0, 0.4}, {5.0, 2.0, 0.2}}}};
  const auto p = default_base_prior(draws);
  CHECK(p.classes[0].gamma == doctest::Approx(0.1));
  CHECK(p.classes[0].xi2 == doctest::Approx(1.01));
  CHECK(p.classes[1].gamma == doctest::Approx(5.0));
  CHECK(p.classes[1].xi2 == doctest::Approx(2.0));
  for (const auto& c : p.classes) {
    CHECK(c.alpha == 2.0);
    CHECK(c.beta == 10.0);
  }
  CHECK(p.classes[0].tau == 10.0);
  CHECK(p.classes[1].tau == 2.0);
}
