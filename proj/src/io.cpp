#include "netdpm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "netdpm/density.hpp"
#include "netdpm/error.hpp"

namespace netdpm::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

// Non-blank, non-comment lines split on `seps`.
std::vector<Line> read_table(const std::string& path, const char* seps) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path + "'");
  std::vector<Line> out;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    if (trim(raw).empty()) continue;
    Line line{number, {}};
    std::size_t start = 0;
    for (;;) {
      const auto pos = raw.find_first_of(seps, start);
      line.fields.push_back(trim(std::string_view(raw).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
  throw IngestionError(path + ":" + std::to_string(line) + ": " + what);
}

double to_number(const std::string& path, const Line& line, const std::string& text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(path, line.number, "'" + text + "' is not a number");
  }
  return v;
}

void expect_header(const std::string& path, const std::vector<Line>& rows, const std::vector<std::string>& want) {
  if (rows.empty()) throw IngestionError(path + ": file is empty");
  if (rows[0].fields != want) {
    std::string joined;
    for (const auto& w : want) joined += (joined.empty() ? "" : ",") + w;
    fail(path, rows[0].number, "expected header '" + joined + "'");
  }
}

void expect_width(const std::string& path, const Line& line, std::size_t width) {
  if (line.fields.size() != width) {
    fail(path, line.number, "expected " + std::to_string(width) + " fields, found " + std::to_string(line.fields.size()));
  }
}

}  // namespace

std::string format_number(double x, bool full) {
  char buf[64];
  std::snprintf(buf, sizeof buf, full ? "%.17g" : "%.6g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IngestionError("failed writing '" + path + "'");
}

StatisticsVector read_statistics(const std::string& path, bool pvalues) {
  const auto rows = read_table(path, ",");
  expect_header(path, rows, {"feature_id", pvalues ? "p" : "r"});
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    expect_width(path, rows[k], 2);
    if (rows[k].fields[0].empty()) fail(path, rows[k].number, "empty feature id");
    ids.push_back(rows[k].fields[0]);
    values.push_back(to_number(path, rows[k], rows[k].fields[1]));
  }
  if (ids.empty()) throw IngestionError(path + ": no statistics");
  StatisticsVector out;
  try {
    if (pvalues) {
      out = transform_pvalues(values, ids);
    } else {
      out.values = std::move(values);
      out.feature_ids = std::move(ids);
    }
    out.validate();
  } catch (const Error& e) {
    throw IngestionError(path + ": " + e.what());
  }
  return out;
}

void write_statistics(const std::string& path, const StatisticsVector& r, bool full) {
  std::string text = "feature_id,r\n";
  for (std::size_t i = 0; i < r.size(); ++i) text += r.feature_ids[i] + "," + format_number(r.values[i], full) + "\n";
  write_file(path, text);
}

std::vector<EdgeRow> read_edge_list(const std::string& path) {
  std::vector<EdgeRow> out;
  for (const auto& line : read_table(path, ",\t")) {
    if (line.fields.size() != 2 && line.fields.size() != 3) {
      fail(path, line.number, "expected 2 or 3 fields, found " + std::to_string(line.fields.size()));
    }
    EdgeRow row;
    row.a = line.fields[0];
    row.b = line.fields[1];
    if (row.a.empty() || row.b.empty()) fail(path, line.number, "empty node id");
    if (line.fields.size() == 3) row.value = to_number(path, line, line.fields[2]);
    row.line = line.number;
    out.push_back(std::move(row));
  }
  return out;
}

void write_edge_list(const std::string& path, const FeatureNetwork& net, std::span<const std::string> ids) {
  std::string text;
  for (auto [a, b] : net.edges()) text += ids[static_cast<std::size_t>(a)] + "\t" + ids[static_cast<std::size_t>(b)] + "\n";
  write_file(path, text);
}

std::unordered_map<std::string, double> read_node_weights(const std::string& path) {
  const auto rows = read_table(path, ",");
  expect_header(path, rows, {"feature_id", "weight"});
  std::unordered_map<std::string, double> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    expect_width(path, rows[k], 2);
    if (!out.emplace(rows[k].fields[0], to_number(path, rows[k], rows[k].fields[1])).second) {
      fail(path, rows[k].number, "duplicate feature id '" + rows[k].fields[0] + "'");
    }
  }
  return out;
}

LabelTable read_labels(const std::string& path) {
  const auto rows = read_table(path, ",");
  expect_header(path, rows, {"feature_id", "z"});
  LabelTable out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    expect_width(path, rows[k], 2);
    const auto& v = rows[k].fields[1];
    if (v != "0" && v != "1") fail(path, rows[k].number, "label must be 0 or 1");
    out.ids.push_back(rows[k].fields[0]);
    out.labels.push_back(v == "1" ? 1 : 0);
  }
  return out;
}

void write_labels(const std::string& path, std::span<const std::string> ids, std::span<const std::uint8_t> labels) {
  std::string text = "feature_id,z\n";
  for (std::size_t i = 0; i < ids.size(); ++i) text += ids[i] + "," + (labels[i] ? "1" : "0") + "\n";
  write_file(path, text);
}

void write_probabilities(const std::string& path, std::span<const std::string> ids, const SelectionReport& report,
                         bool full) {
  std::string text = "feature_id,prob_selected,selected\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    text += ids[i] + "," + format_number(report.probabilities[i], full) + "," + (report.selected[i] ? "1" : "0") + "\n";
  }
  write_file(path, text);
}

LabelTable read_selection(const std::string& path) {
  const auto rows = read_table(path, ",");
  expect_header(path, rows, {"feature_id", "prob_selected", "selected"});
  LabelTable out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    expect_width(path, rows[k], 3);
    const auto& v = rows[k].fields[2];
    if (v != "0" && v != "1") fail(path, rows[k].number, "selected must be 0 or 1");
    out.ids.push_back(rows[k].fields[0]);
    out.labels.push_back(v == "1" ? 1 : 0);
  }
  return out;
}

void write_subnetworks(const std::string& path, const SubnetworkExtraction& ext, std::span<const std::string> ids) {
  std::string text = "component_id,feature_ids\n";
  for (std::size_t c = 0; c < ext.subnetworks.size(); ++c) {
    text += std::to_string(c + 1);
    for (int v : ext.subnetworks[c].nodes) text += "," + ids[static_cast<std::size_t>(v)];
    text += "\n";
  }
  write_file(path, text);
}

OrderedDensitySet read_components(const std::string& path) {
  const auto rows = read_table(path, ",");
  expect_header(path, rows, {"mean", "variance", "weight"});
  OrderedDensitySet out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    expect_width(path, rows[k], 3);
    MixtureComponent c;
    c.mean = to_number(path, rows[k], rows[k].fields[0]);
    c.variance = to_number(path, rows[k], rows[k].fields[1]);
    c.weight = to_number(path, rows[k], rows[k].fields[2]);
    out.components.push_back(c);
  }
  try {
    out.validate();
  } catch (const Error& e) {
    throw IngestionError(path + ": " + e.what());
  }
  return out;
}

void write_partition(const std::string& path, const HodcPartition& part) {
  std::string text = "step,cluster,members\n";
  for (std::size_t m = 0; m < part.steps.size(); ++m) {
    for (std::size_t c = 0; c < part.steps[m].size(); ++c) {
      const auto& range = part.steps[m][c];
      text += std::to_string(m) + "," + std::to_string(c + 1) + ",";
      for (int g = range.first; g <= range.last; ++g) text += (g > range.first ? ";" : "") + std::to_string(g + 1);
      text += "\n";
    }
  }
  write_file(path, text);
}

}  // namespace netdpm::io
