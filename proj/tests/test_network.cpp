#include <doctest.h>

#include <string>
#include <unordered_map>
#include <vector>

#include "netdpm/error.hpp"
#include "netdpm/network.hpp"

using namespace netdpm;

namespace {
std::vector<EdgeRow> rows(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  std::vector<EdgeRow> out;
  std::size_t line = 1;
  for (auto [a, b] : pairs) out.push_back({a, b, 1.0, line++});
  return out;
}
}  // namespace

TEST_CASE("neighbour-averaged weights") {
  const std::vector<std::string> ids{"a", "b", "c"};
  const auto net = load_network(rows({{"a", "b"}}), ids);
  CHECK(net.omega_tilde(0) == 1.0);
  CHECK(net.omega_tilde(1) == 1.0);
  CHECK(net.omega_tilde(2) == 1.0);

  const auto weighted = load_network(rows({{"a", "b"}, {"a", "c"}}), ids, {{"b", 2.0}, {"c", 4.0}});
  CHECK(weighted.omega_tilde(0) == doctest::Approx(3.0));
  CHECK(weighted.omega_tilde(1) == doctest::Approx(1.0));
  const auto c = weighted.couplings(0);
  CHECK(c[0] + c[1] == doctest::Approx((1.0 + 2.0) / 2 + (1.0 + 4.0) / 2));
}

TEST_CASE("duplicate and reversed rows collapse") {
  const std::vector<std::string> ids{"a", "b"};
  const auto net = load_network(rows({{"a", "b"}, {"b", "a"}, {"a", "b"}}), ids);
  CHECK(net.num_edges() == 1);
  CHECK(net.degree(0) == 1);
  CHECK(net.has_edge(1, 0));
}

TEST_CASE("zero third column is not an edge") {
  const std::vector<std::string> ids{"a", "b", "c"};
  auto r = rows({{"a", "b"}, {"b", "c"}});
  r[1].value = 0.0;
  const auto net = load_network(r, ids);
  CHECK(net.num_edges() == 1);
  CHECK_FALSE(net.has_edge(1, 2));
}

TEST_CASE("unknown ids and bad edges are reported") {
  const std::vector<std::string> ids{"a", "b"};
  try {
    load_network(rows({{"a", "zz"}, {"qq", "b"}}), ids);
    FAIL("expected an error");
  } catch (const IngestionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("zz") != std::string::npos);
    CHECK(msg.find("qq") != std::string::npos);
  }
  CHECK_THROWS_AS(load_network(rows({{"a", "b"}}), ids, {{"a", -1.0}}), DomainError);
  const std::vector<Edge> loop{{0, 0}};
  CHECK_THROWS_AS(FeatureNetwork::from_edges(2, loop), DomainError);
  const std::vector<Edge> far{{0, 5}};
  CHECK_THROWS_AS(FeatureNetwork::from_edges(2, far), DomainError);
}

TEST_CASE("subnetwork extraction") {
  const std::vector<Edge> chain{{0, 1}, {1, 2}};
  const auto net = FeatureNetwork::from_edges(3, chain);
  SUBCASE("nothing selected") {
    const auto ext = extract_subnetworks(std::vector<std::uint8_t>{0, 0, 0}, net);
    CHECK(ext.subnetworks.empty());
    CHECK(ext.isolated.empty());
  }
  SUBCASE("connected pair") {
    const auto ext = extract_subnetworks(std::vector<std::uint8_t>{1, 1, 0}, net);
    REQUIRE(ext.subnetworks.size() == 1);
    CHECK(ext.subnetworks[0].nodes == std::vector<int>{0, 1});
    CHECK(ext.subnetworks[0].edges.size() == 1);
    CHECK(ext.isolated.empty());
  }
  SUBCASE("separated pair") {
    const auto ext = extract_subnetworks(std::vector<std::uint8_t>{1, 0, 1}, net);
    CHECK(ext.subnetworks.empty());
    CHECK(ext.isolated == std::vector<int>{0, 2});
  }
}

TEST_CASE("subnetworks come largest first") {
  const std::vector<Edge> edges{{0, 1}, {2, 3}, {3, 4}, {5, 6}};
  const auto net = FeatureNetwork::from_edges(8, edges);
  const auto ext = extract_subnetworks(std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 1, 1}, net);
  REQUIRE(ext.subnetworks.size() == 3);
  CHECK(ext.subnetworks[0].nodes.size() == 3);
  CHECK(ext.isolated == std::vector<int>{7});
}
