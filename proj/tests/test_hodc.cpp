#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "netdpm/error.hpp"
#include "netdpm/hodc.hpp"
#include "netdpm/random.hpp"
#include "oracles.hpp"

using namespace netdpm;

namespace {

double numeric_l2(const std::vector<MixtureComponent>& a, const std::vector<MixtureComponent>& b) {
  return oracle::integrate(
      [&](double x) {
        const double d = oracle::mixture(a, x) - oracle::mixture(b, x);
        return d * d;
      },
      -60.0, 60.0, 1e-14);
}

std::vector<MixtureComponent> slice(const OrderedDensitySet& s, int first, int last) {
  return {s.components.begin() + first, s.components.begin() + last + 1};
}

OrderedDensitySet random_set(Rng& rng, int L) {
  OrderedDensitySet s;
  double m = -6.0;
  for (int g = 0; g < L; ++g) {
    m += 0.3 + 3.0 * rng.uniform();
    s.components.push_back({m, 0.1 + 2.0 * rng.uniform(), 0.05 + rng.uniform()});
  }
  return s;
}

// Recomputes every adjacent distance at each step. Returns false when the
// minimum is too close to call.
bool brute_merges(const OrderedDensitySet& s, std::vector<int>& merged) {
  std::vector<ClusterRange> cl;
  for (int g = 0; g < static_cast<int>(s.size()); ++g) cl.push_back({g, g});
  while (cl.size() > 2) {
    std::vector<double> d;
    for (std::size_t l = 0; l + 1 < cl.size(); ++l) {
      d.push_back(numeric_l2(slice(s, cl[l].first, cl[l].last), slice(s, cl[l + 1].first, cl[l + 1].last)));
    }
    std::size_t best = 0;
    for (std::size_t l = 1; l < d.size(); ++l) {
      if (d[l] < d[best]) best = l;
    }
    for (std::size_t l = 0; l < d.size(); ++l) {
      if (l != best && std::abs(d[l] - d[best]) < 1e-9) return false;
    }
    merged.push_back(static_cast<int>(best));
    cl[best].last = cl[best + 1].last;
    cl.erase(cl.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return true;
}

OrderedDensitySet two_groups(int lower, int upper) {
  OrderedDensitySet s;
  for (int g = 0; g < lower; ++g) s.components.push_back({0.1 * g, 0.01, 1.0});
  for (int g = 0; g < upper; ++g) s.components.push_back({10.0 + 0.1 * g, 0.01, 1.0});
  return s;
}

}  // namespace

TEST_CASE("L2 distance closed form") {
  const std::vector<MixtureComponent> a{{0.0, 1.0, 1.0}}, b{{1.0, 1.0, 1.0}};
  const double expected = (1.0 - std::exp(-0.25)) / std::sqrt(std::numbers::pi);
  CHECK(mixture_l2_distance(a, b) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(mixture_l2_distance(a, b) == doctest::Approx(0.12481).epsilon(1e-4));
  CHECK(mixture_l2_distance(a, a) == doctest::Approx(0.0).scale(1e-15));
  CHECK_THROWS_AS(mixture_l2_distance({}, a), DomainError);
}

TEST_CASE("L2 distance matches integration on random mixtures") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MixtureComponent> a(1 + rng.index(3)), b(1 + rng.index(3));
    for (auto* m : {&a, &b}) {
      for (auto& c : *m) c = {-10.0 + 20.0 * rng.uniform(), 0.1 + 8.9 * rng.uniform(), 0.1 + rng.uniform()};
    }
    const double d = mixture_l2_distance(a, b);
    CHECK(std::abs(d - numeric_l2(a, b)) < 1e-8);
    CHECK(d == doctest::Approx(mixture_l2_distance(b, a)).epsilon(1e-13));
    auto scaled = a;
    for (auto& c : scaled) c.weight *= 7.5;
    CHECK(mixture_l2_distance(scaled, b) == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("two components need no merge") {
  OrderedDensitySet s{{{0.0, 1.0, 0.5}, {3.0, 1.0, 0.5}}};
  const auto part = hodc_run(s);
  CHECK(part.merged_at.empty());
  REQUIRE(part.steps.size() == 1);
  CHECK(part.final_split()[0] == ClusterRange{0, 0});
  CHECK(part.final_split()[1] == ClusterRange{1, 1});
  CHECK_THROWS_AS(hodc_run(OrderedDensitySet{{{0.0, 1.0, 1.0}}}), DomainError);
}

TEST_CASE("two well-separated triples") {
  OrderedDensitySet s{{{0.0, 0.3, 1.0}, {0.2, 0.3, 1.0}, {0.7, 0.3, 1.0},
                       {6.0, 0.3, 1.0}, {6.5, 0.3, 1.0}, {6.9, 0.3, 1.0}}};
  const auto part = hodc_run(s);
  CHECK(part.merged_at.front() == 0);
  CHECK(part.final_split()[0] == ClusterRange{0, 2});
  CHECK(part.final_split()[1] == ClusterRange{3, 5});
  CHECK(part.split_sizes() == std::pair{3, 3});
}

TEST_CASE("merge history is contiguous and loses one cluster per step") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int L = 2 + static_cast<int>(rng.index(9));
    const auto part = hodc_run(random_set(rng, L));
    REQUIRE(part.steps.size() == static_cast<std::size_t>(L - 1));
    for (std::size_t m = 0; m < part.steps.size(); ++m) {
      const auto& st = part.steps[m];
      CHECK(st.size() == static_cast<std::size_t>(L) - m);
      CHECK(st.front().first == 0);
      CHECK(st.back().last == L - 1);
      for (std::size_t c = 0; c + 1 < st.size(); ++c) CHECK(st[c].last + 1 == st[c + 1].first);
    }
  }
}

TEST_CASE("greedy merges equal full recomputation") {
  Rng rng(23);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_set(rng, 5);
    std::vector<int> expected;
    if (!brute_merges(s, expected)) continue;
    CHECK(hodc_run(s).merged_at == expected);
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("split is invariant to weight rescaling") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_set(rng, 6);
    const auto before = hodc_run(s).final_split();
    for (auto& c : s.components) c.weight *= 0.01;
    CHECK(hodc_run(s).final_split() == before);
  }
}

TEST_CASE("symmetric ties merge leftmost") {
  OrderedDensitySet s{{{0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {2.0, 1.0, 1.0}}};
  CHECK(hodc_run(s).merged_at == std::vector<int>{0});
}

TEST_CASE("component count estimates") {
  const std::vector<OrderedDensitySet> same{two_groups(2, 3), two_groups(2, 3)};
  CHECK(estimate_component_counts(same) == std::pair{2, 3});
  const std::vector<OrderedDensitySet> mixed{two_groups(2, 3), two_groups(3, 3)};
  CHECK(estimate_component_counts(mixed) == std::pair{3, 3});
  const std::vector<OrderedDensitySet> one{two_groups(4, 1)};
  CHECK(estimate_component_counts(one) == std::pair{4, 1});
  const std::vector<OrderedDensitySet> single{OrderedDensitySet{{{0.0, 1.0, 1.0}}}};
  CHECK(estimate_component_counts(single) == std::pair{1, 1});
}

TEST_CASE("ordered density set validation") {
  CHECK_THROWS_AS((OrderedDensitySet{{{1.0, 1.0, 1.0}, {0.0, 1.0, 1.0}}}.validate()), Error);
  CHECK_THROWS_AS((OrderedDensitySet{{{0.0, 1.0, 0.0}}}.validate()), Error);
  CHECK_THROWS_AS((OrderedDensitySet{{{0.0, -1.0, 1.0}}}.validate()), Error);
}
