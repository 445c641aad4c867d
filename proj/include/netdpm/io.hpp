#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "netdpm/hodc.hpp"
#include "netdpm/model.hpp"
#include "netdpm/network.hpp"
#include "netdpm/samplers.hpp"

namespace netdpm::io {

// %.6g, or %.17g when `full` is set.
std::string format_number(double x, bool full = false);

// CSV with header `feature_id,r`, or `feature_id,p` when `pvalues` is set
// (then r = -Phi^{-1}(p)). Blank lines and '#' comments are skipped.
StatisticsVector read_statistics(const std::string& path, bool pvalues = false);
void write_statistics(const std::string& path, const StatisticsVector& r, bool full = false);

// Tab- or comma-separated id pairs with an optional third column.
std::vector<EdgeRow> read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const FeatureNetwork& net, std::span<const std::string> ids);

// CSV with header `feature_id,weight`.
std::unordered_map<std::string, double> read_node_weights(const std::string& path);

// CSV `feature_id,z`.
struct LabelTable {
  std::vector<std::string> ids;
  std::vector<std::uint8_t> labels;
};
LabelTable read_labels(const std::string& path);
void write_labels(const std::string& path, std::span<const std::string> ids, std::span<const std::uint8_t> labels);

// CSV `feature_id,prob_selected,selected`.
void write_probabilities(const std::string& path, std::span<const std::string> ids, const SelectionReport& report,
                         bool full = false);
// Reads the hard labels of a probabilities file.
LabelTable read_selection(const std::string& path);

// Header `component_id,feature_ids`, then `id,f1,f2,...` per subnetwork.
void write_subnetworks(const std::string& path, const SubnetworkExtraction& ext, std::span<const std::string> ids);

// CSV `mean,variance,weight`, one component per row, sorted by mean.
OrderedDensitySet read_components(const std::string& path);

// `step,cluster,members` with 1-based component numbers joined by ';'.
void write_partition(const std::string& path, const HodcPartition& part);

// Writes `text` to `path`, raising IngestionError on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace netdpm::io
