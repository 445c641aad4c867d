#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "netdpm/error.hpp"
#include "netdpm/io.hpp"

using namespace netdpm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("netdpm_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = (path / name).string();
    std::ofstream(p) << text;
    return p;
  }
};

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("statistics round trip") {
  TempDir dir;
  const auto r = StatisticsVector::from_values({0.1, -2.5, 1.0 / 3.0});
  const auto p = (dir.path / "s.csv").string();
  io::write_statistics(p, r, true);
  const auto back = io::read_statistics(p);
  CHECK(back.values == r.values);
  CHECK(back.feature_ids == r.feature_ids);
}

TEST_CASE("statistics parsing") {
  TempDir dir;
  const auto ok = dir.write("ok.csv", "# comment\nfeature_id,r\n\na,1.5\nb , -2 # trailing\n");
  const auto r = io::read_statistics(ok);
  CHECK(r.feature_ids == std::vector<std::string>{"a", "b"});
  CHECK(r.values == std::vector<double>{1.5, -2.0});

  const auto pv = dir.write("p.csv", "feature_id,p\na,0.5\nb,0.025\n");
  CHECK(io::read_statistics(pv, true).values[1] == doctest::Approx(1.959964).epsilon(1e-6));

  CHECK(error_of([&] { io::read_statistics(dir.write("bad.csv", "feature_id,r\na,1\nb,x\n")); }).find("bad.csv:3") !=
        std::string::npos);
  CHECK(error_of([&] { io::read_statistics(dir.write("hdr.csv", "id,r\na,1\n")); }).find("hdr.csv:1") !=
        std::string::npos);
  CHECK(error_of([&] { io::read_statistics(dir.write("w.csv", "feature_id,r\na,1,2\n")); }).find("w.csv:2") !=
        std::string::npos);
  CHECK_THROWS_AS(io::read_statistics(dir.write("dup.csv", "feature_id,r\na,1\na,2\n")), IngestionError);
  CHECK_THROWS_AS(io::read_statistics(dir.write("p1.csv", "feature_id,p\na,1\n"), true), IngestionError);
  CHECK_THROWS_AS(io::read_statistics(dir.write("empty.csv", "feature_id,r\n")), IngestionError);
  CHECK_THROWS_AS(io::read_statistics((dir.path / "missing.csv").string()), IngestionError);
}

TEST_CASE("edge lists") {
  TempDir dir;
  const auto p = dir.write("e.tsv", "a\tb\nb,c,0\n# skip\nc\ta\t2\n");
  const auto rows = io::read_edge_list(p);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].value == 0.0);
  CHECK(rows[2].line == 4);
  const std::vector<std::string> ids{"a", "b", "c"};
  const auto net = load_network(rows, ids);
  CHECK(net.num_edges() == 2);

  const auto out = (dir.path / "out.tsv").string();
  io::write_edge_list(out, net, ids);
  CHECK(load_network(io::read_edge_list(out), ids).edges() == net.edges());
  CHECK(error_of([&] { io::read_edge_list(dir.write("b.tsv", "a\n")); }).find("b.tsv:1") != std::string::npos);
  CHECK(error_of([&] { io::read_edge_list(dir.write("n.tsv", "a\tb\tq\n")); }).find("n.tsv:1") != std::string::npos);
}

TEST_CASE("labels, weights and components") {
  TempDir dir;
  const std::vector<std::string> ids{"x", "y"};
  const std::vector<std::uint8_t> z{1, 0};
  const auto lp = (dir.path / "l.csv").string();
  io::write_labels(lp, ids, z);
  const auto lt = io::read_labels(lp);
  CHECK(lt.ids == ids);
  CHECK(lt.labels == z);
  CHECK_THROWS_AS(io::read_labels(dir.write("bad.csv", "feature_id,z\nx,2\n")), IngestionError);

  const auto pp = (dir.path / "p.csv").string();
  io::write_probabilities(pp, ids, make_report({0.9, 0.5}));
  CHECK(io::read_selection(pp).labels == z);

  const auto w = io::read_node_weights(dir.write("w.csv", "feature_id,weight\nx,2\n"));
  CHECK(w.at("x") == 2.0);
  CHECK_THROWS_AS(io::read_node_weights(dir.write("w2.csv", "feature_id,weight\nx,2\nx,3\n")), IngestionError);

  const auto c = io::read_components(dir.write("c.csv", "mean,variance,weight\n0,1,0.5\n2,1,0.5\n"));
  CHECK(c.size() == 2);
  CHECK_THROWS_AS(io::read_components(dir.write("c2.csv", "mean,variance,weight\n2,1,0.5\n0,1,0.5\n")),
                  IngestionError);
}

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333");
  CHECK(std::stod(io::format_number(1.0 / 3.0, true)) == 1.0 / 3.0);
}
