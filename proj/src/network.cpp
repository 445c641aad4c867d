#include "netdpm/network.hpp"

#include <algorithm>
#include <sstream>

#include "netdpm/error.hpp"

namespace netdpm {

FeatureNetwork FeatureNetwork::from_edges(std::size_t n, std::span<const Edge> edges,
                                          std::vector<double> omega) {
  if (omega.empty()) omega.assign(n, 1.0);
  if (omega.size() != n) throw DomainError("node weight vector length does not match node count");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(omega[i] > 0.0)) {
      throw DomainError("node weight for node " + std::to_string(i) + " must be positive");
    }
  }

  std::vector<Edge> undirected;
  undirected.reserve(edges.size());
  const auto count = static_cast<int>(n);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= count || b >= count) {
      throw DomainError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
    if (a == b) throw DomainError("self-loop on node " + std::to_string(a));
    undirected.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(undirected.begin(), undirected.end());
  undirected.erase(std::unique(undirected.begin(), undirected.end()), undirected.end());

  FeatureNetwork net;
  net.omega_ = std::move(omega);
  std::vector<std::size_t> degree(n, 0);
  for (auto [a, b] : undirected) {
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
  }
  net.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) net.offsets_[i + 1] = net.offsets_[i] + degree[i];
  net.adjacency_.resize(net.offsets_[n]);
  std::vector<std::size_t> fill(net.offsets_.begin(), net.offsets_.end() - 1);
  for (auto [a, b] : undirected) {
    net.adjacency_[fill[static_cast<std::size_t>(a)]++] = b;
    net.adjacency_[fill[static_cast<std::size_t>(b)]++] = a;
  }
  net.coupling_.resize(net.adjacency_.size());
  net.omega_tilde_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto first = net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i]);
    auto last = net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i + 1]);
    std::sort(first, last);
    double total = 0.0;
    for (std::size_t e = net.offsets_[i]; e < net.offsets_[i + 1]; ++e) {
      const double wj = net.omega_[static_cast<std::size_t>(net.adjacency_[e])];
      total += wj;
      net.coupling_[e] = 0.5 * (net.omega_[i] + wj);
    }
    net.omega_tilde_[i] = degree[i] > 0 ? total / static_cast<double>(degree[i]) : net.omega_[i];
  }
  return net;
}

bool FeatureNetwork::has_edge(int i, int j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> FeatureNetwork::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (int i = 0; i < static_cast<int>(size()); ++i) {
    for (int j : neighbors(i)) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

FeatureNetwork load_network(std::span<const EdgeRow> rows, std::span<const std::string> feature_ids,
                            const std::unordered_map<std::string, double>& node_weights) {
  std::unordered_map<std::string, int> index;
  index.reserve(feature_ids.size());
  for (std::size_t i = 0; i < feature_ids.size(); ++i) index.emplace(feature_ids[i], static_cast<int>(i));

  std::vector<std::string> unknown;
  std::vector<Edge> edges;
  edges.reserve(rows.size());
  for (const auto& row : rows) {
    auto ia = index.find(row.a);
    auto ib = index.find(row.b);
    if (ia == index.end() || ib == index.end()) {
      for (const auto* id : {&row.a, &row.b}) {
        if (!index.contains(*id) && std::find(unknown.begin(), unknown.end(), *id) == unknown.end()) {
          unknown.push_back(*id);
        }
      }
      continue;
    }
    if (row.value == 0.0) continue;
    if (ia->second == ib->second) {
      throw IngestionError("line " + std::to_string(row.line) + ": self-loop on '" + row.a + "'");
    }
    edges.emplace_back(ia->second, ib->second);
  }
  if (!unknown.empty()) {
    std::ostringstream msg;
    msg << unknown.size() << " edge-list id(s) not found in statistics:";
    for (std::size_t i = 0; i < unknown.size() && i < 10; ++i) msg << " '" << unknown[i] << "'";
    if (unknown.size() > 10) msg << " ...";
    throw IngestionError(msg.str());
  }

  std::vector<double> omega(feature_ids.size(), 1.0);
  for (const auto& [id, w] : node_weights) {
    auto it = index.find(id);
    if (it == index.end()) throw IngestionError("node weight given for unknown id '" + id + "'");
    if (!(w > 0.0)) throw DomainError("node weight for '" + id + "' must be positive");
    omega[static_cast<std::size_t>(it->second)] = w;
  }
  return FeatureNetwork::from_edges(feature_ids.size(), edges, std::move(omega));
}

SubnetworkExtraction extract_subnetworks(std::span<const std::uint8_t> selected,
                                         const FeatureNetwork& net) {
  if (selected.size() != net.size()) throw DomainError("selection length does not match network size");
  SubnetworkExtraction out;
  std::vector<std::uint8_t> seen(selected.size(), 0);
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(selected.size()); ++start) {
    if (!selected[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)]) continue;
    Subnetwork comp;
    stack.assign(1, start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.nodes.push_back(v);
      for (int u : net.neighbors(v)) {
        if (!selected[static_cast<std::size_t>(u)]) continue;
        if (v < u) comp.edges.emplace_back(v, u);
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          stack.push_back(u);
        }
      }
    }
    if (comp.nodes.size() == 1) {
      out.isolated.push_back(start);
      continue;
    }
    std::sort(comp.nodes.begin(), comp.nodes.end());
    std::sort(comp.edges.begin(), comp.edges.end());
    out.subnetworks.push_back(std::move(comp));
  }
  std::stable_sort(out.subnetworks.begin(), out.subnetworks.end(),
                   [](const Subnetwork& a, const Subnetwork& b) { return a.nodes.size() > b.nodes.size(); });
  return out;
}

}  // namespace netdpm
