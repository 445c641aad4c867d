#include "netdpm/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "netdpm/error.hpp"
#include "netdpm/ising.hpp"
#include "netdpm/random.hpp"
#include "sampling.hpp"

namespace netdpm {

namespace {

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& spec) {
  const std::string t = trim(text);
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("bad number '" + t + "' in distribution spec '" + spec + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool connected(int n, std::span<const Edge> edges, std::span<const int> nodes) {
  if (nodes.empty()) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  std::vector<char> inside(static_cast<std::size_t>(n), 0);
  for (int v : nodes) inside[static_cast<std::size_t>(v)] = 1;
  for (auto [a, b] : edges) {
    if (inside[static_cast<std::size_t>(a)] && inside[static_cast<std::size_t>(b)]) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> q;
  q.push(nodes[0]);
  seen[static_cast<std::size_t>(nodes[0])] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == nodes.size();
}

}  // namespace

FeatureNetwork generate_scale_free(int n, int attach_edges, std::uint64_t seed) {
  if (n < 2) throw DomainError("scale-free network needs at least two nodes");
  if (attach_edges < 1 || attach_edges >= n) throw DomainError("attach_edges must lie in [1, n)");
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<int> ends;  // node v appears deg(v) times
  const int start = attach_edges == 1 ? 2 : attach_edges + 1;
  for (int a = 0; a < start; ++a) {
    for (int b = a + 1; b < start; ++b) {
      edges.emplace_back(a, b);
      ends.push_back(a);
      ends.push_back(b);
    }
  }
  std::vector<int> chosen;
  for (int v = start; v < n; ++v) {
    chosen.clear();
    while (static_cast<int>(chosen.size()) < attach_edges) {
      const int u = ends[rng.index(ends.size())];
      if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) chosen.push_back(u);
    }
    for (int u : chosen) {
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  return FeatureNetwork::from_edges(static_cast<std::size_t>(n), edges);
}

std::vector<std::uint8_t> sample_ising_labels(const FeatureNetwork& net, const IsingPriorConfig& cfg, int sweeps,
                                              std::uint64_t seed) {
  if (sweeps < 1) throw DomainError("Ising sampling needs at least one sweep");
  cfg.validate();
  Rng rng(seed);
  const std::size_t n = net.size();
  std::vector<std::uint8_t> z(n);
  for (auto& zi : z) zi = rng.bernoulli(1.0 - cfg.pi0) ? 1 : 0;
  const detail::IsingEnergies energies(net, cfg);
  for (int t = 0; t < sweeps; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = energies(static_cast<int>(i), z);
      z[i] = rng.uniform() < logistic(e[1] - e[0]) ? 1 : 0;
    }
  }
  return z;
}

ClassDistribution ClassDistribution::gaussian(double mean, double variance) {
  ClassDistribution d;
  d.kind = Kind::kGaussianMixture;
  d.parts = {{1.0, mean, variance}};
  return d;
}

ClassDistribution ClassDistribution::parse(const std::string& raw) {
  const std::string text = trim(raw);
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw ConfigError("distribution spec '" + text + "' must look like name(arguments)");
  }
  const std::string name = trim(text.substr(0, open));
  const std::string body = text.substr(open + 1, text.size() - open - 2);
  ClassDistribution d;
  if (name == "empirical") {
    d.kind = Kind::kEmpirical;
    d.source = trim(body);
    std::ifstream in(d.source);
    if (!in) throw ConfigError("cannot open empirical sample '" + d.source + "'");
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (!line.empty()) d.sample.push_back(parse_number(line, text));
    }
    d.validate();
    return d;
  }
  auto number_list = [&](const std::string& group) {
    std::vector<double> v;
    for (const auto& tok : split(group, ',')) v.push_back(parse_number(tok, text));
    return v;
  };
  if (name == "normal" || name == "gamma") {
    const auto v = number_list(body);
    if (v.size() != 2) throw ConfigError("'" + text + "' takes two arguments");
    d.kind = name == "normal" ? Kind::kGaussianMixture : Kind::kGammaMixture;
    d.parts = {{1.0, v[0], v[1]}};
  } else if (name == "gaussian-mixture" || name == "gamma-mixture") {
    d.kind = name == "gaussian-mixture" ? Kind::kGaussianMixture : Kind::kGammaMixture;
    for (const auto& group : split(body, ';')) {
      const auto v = number_list(group);
      if (v.size() != 3) throw ConfigError("mixture part '" + trim(group) + "' needs weight,a,b in '" + text + "'");
      d.parts.push_back({v[0], v[1], v[2]});
    }
  } else {
    throw ConfigError("unknown distribution '" + name + "'");
  }
  d.validate();
  return d;
}

void ClassDistribution::validate() const {
  if (kind == Kind::kEmpirical) {
    if (sample.empty()) throw ConfigError("empirical sample '" + source + "' is empty");
    for (double x : sample) {
      if (!std::isfinite(x)) throw ConfigError("empirical sample '" + source + "' has a non-finite value");
    }
    return;
  }
  if (parts.empty()) throw ConfigError("mixture spec has no parts");
  double total = 0.0;
  for (const auto& p : parts) {
    if (!(p.weight > 0.0) || !(p.b > 0.0) || !std::isfinite(p.a) || (kind == Kind::kGammaMixture && !(p.a > 0.0))) {
      throw ConfigError("invalid mixture part in '" + to_string() + "'");
    }
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mixture weights of '" + to_string() + "' do not sum to one");
}

std::string ClassDistribution::to_string() const {
  if (kind == Kind::kEmpirical) return "empirical(" + source + ")";
  std::string out = kind == Kind::kGaussianMixture ? "gaussian-mixture(" : "gamma-mixture(";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += ';';
    out += shortest(parts[k].weight) + ',' + shortest(parts[k].a) + ',' + shortest(parts[k].b);
  }
  return out + ')';
}

double ClassDistribution::mean() const {
  if (kind == Kind::kEmpirical) {
    return std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(sample.size());
  }
  double m = 0.0;
  for (const auto& p : parts) m += p.weight * (kind == Kind::kGaussianMixture ? p.a : p.a / p.b);
  return m;
}

double ClassDistribution::draw(Rng& rng) const {
  if (kind == Kind::kEmpirical) return sample[rng.index(sample.size())];
  std::size_t k = 0;
  if (parts.size() > 1) {
    double u = rng.uniform();
    for (; k + 1 < parts.size(); ++k) {
      if (u < parts[k].weight) break;
      u -= parts[k].weight;
    }
  }
  const auto& p = parts[k];
  return kind == Kind::kGaussianMixture ? rng.normal(p.a, std::sqrt(p.b)) : rng.gamma(p.a) / p.b;
}

StatisticsVector generate_statistics(std::span<const std::uint8_t> labels, const StatisticsSpec& spec,
                                     std::uint64_t seed) {
  spec.null_dist.validate();
  spec.alt_dist.validate();
  Rng rng(seed);
  std::vector<double> r(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) r[i] = (labels[i] ? spec.alt_dist : spec.null_dist).draw(rng);
  return StatisticsVector::from_values(std::move(r));
}

DesignedNetworkSpec DesignedNetworkSpec::defaults() {
  DesignedNetworkSpec s;
  s.designed_nodes = 11;
  s.designed_edges = {{4, 0}, {4, 1}, {4, 2}, {4, 3}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {7, 9}, {9, 10}};
  s.ports = {4, 5, 10};
  s.selected = {0, 1, 2, 3, 4, 7, 8, 9};
  s.target = {0, 1, 2, 3, 4};
  return s;
}

void DesignedNetworkSpec::validate() const {
  if (designed_nodes < 1) throw ConfigError("designed subnetwork needs at least one node");
  if (scale_free_n < 2) throw ConfigError("scale-free part needs at least two nodes");
  if (attach_edges < 1 || attach_edges >= scale_free_n) throw ConfigError("attach_edges must lie in [1, scale_free_n)");
  if (bridge_edges < 1) throw ConfigError("designed network needs at least one bridge edge");
  if (ports.empty()) throw ConfigError("designed network needs at least one port");
  auto in_range = [&](int v) { return v >= 0 && v < designed_nodes; };
  for (auto [a, b] : designed_edges) {
    if (!in_range(a) || !in_range(b) || a == b) throw ConfigError("designed edge out of range or a self-loop");
  }
  for (const auto* list : {&ports, &selected, &target}) {
    for (int v : *list) {
      if (!in_range(v)) throw ConfigError("designed node index " + std::to_string(v + 1) + " out of range");
    }
  }
  std::vector<int> all(static_cast<std::size_t>(designed_nodes));
  std::iota(all.begin(), all.end(), 0);
  if (!connected(designed_nodes, designed_edges, all)) throw ConfigError("designed subnetwork is not connected");
  if (!connected(designed_nodes, designed_edges, target)) throw ConfigError("target subnetwork is not connected");
}

GroundTruth build_designed_network(const DesignedNetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  const int m = spec.designed_nodes;
  const FeatureNetwork sf = generate_scale_free(spec.scale_free_n, spec.attach_edges, derive_seed(seed, 1));
  std::vector<Edge> edges = spec.designed_edges;
  for (auto [a, b] : sf.edges()) edges.emplace_back(a + m, b + m);
  Rng rng(derive_seed(seed, 2));
  std::set<Edge> bridges;
  for (int k = 0; k < spec.bridge_edges; ++k) {
    const int port = spec.ports[static_cast<std::size_t>(k) % spec.ports.size()];
    for (int attempt = 0;; ++attempt) {
      const int other = m + static_cast<int>(rng.index(static_cast<std::size_t>(spec.scale_free_n)));
      if (bridges.insert({port, other}).second) break;
      if (attempt > 1000) throw ConfigError("cannot place distinct bridge edges");
    }
  }
  edges.insert(edges.end(), bridges.begin(), bridges.end());
  GroundTruth truth;
  const auto n = static_cast<std::size_t>(m + spec.scale_free_n);
  truth.network = FeatureNetwork::from_edges(n, edges);
  truth.labels.assign(n, 0);
  for (int v : spec.selected) truth.labels[static_cast<std::size_t>(v)] = 1;
  truth.target = spec.target;
  std::sort(truth.target.begin(), truth.target.end());
  truth.target.erase(std::unique(truth.target.begin(), truth.target.end()), truth.target.end());
  truth.seed = seed;
  return truth;
}

GroundTruth build_ising_truth(int n, int attach_edges, const IsingPriorConfig& ising, int sweeps,
                              std::uint64_t seed) {
  GroundTruth truth;
  truth.network = generate_scale_free(n, attach_edges, derive_seed(seed, 1));
  truth.labels = sample_ising_labels(truth.network, ising, sweeps, derive_seed(seed, 2));
  truth.seed = seed;
  return truth;
}

SelectionMetrics score_selection(const GroundTruth& truth, std::span<const std::uint8_t> selected) {
  if (selected.size() != truth.labels.size()) {
    throw DomainError("selection has " + std::to_string(selected.size()) + " entries but the truth has " +
                      std::to_string(truth.labels.size()));
  }
  SelectionMetrics m;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const bool t = truth.labels[i] != 0;
    const bool s = selected[i] != 0;
    if (t && s) ++m.true_positives;
    if (!t && s) ++m.false_positives;
    if (t && !s) ++m.false_negatives;
    if (!t && !s) ++m.true_negatives;
  }
  auto ratio = [](int a, int b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; };
  m.gene_tpr = ratio(m.true_positives, m.true_positives + m.false_negatives);
  m.gene_fpr = ratio(m.false_positives, m.false_positives + m.true_negatives);
  m.gene_fdr = ratio(m.false_positives, m.false_positives + m.true_positives);
  if (!truth.target.empty()) {
    const auto parts = extract_subnetworks(selected, truth.network);
    for (const auto& sub : parts.subnetworks) {
      if (sub.nodes == truth.target) {
        m.subnet_exact = 1.0;
      } else if (sub.nodes.size() > truth.target.size() &&
                 std::includes(sub.nodes.begin(), sub.nodes.end(), truth.target.begin(), truth.target.end())) {
        m.subnet_larger = 1.0;
      }
    }
    const double found = m.subnet_exact + m.subnet_larger;
    m.subnet_fdr = found > 0.0 ? m.subnet_larger / found : 0.0;
  }
  return m;
}

SelectionMetrics aggregate_metrics(std::span<const SelectionMetrics> replicates) {
  SelectionMetrics out;
  if (replicates.empty()) return out;
  const double R = static_cast<double>(replicates.size());
  for (const auto& m : replicates) {
    out.gene_tpr += m.gene_tpr / R;
    out.gene_fpr += m.gene_fpr / R;
    out.gene_fdr += m.gene_fdr / R;
    out.true_positives += m.true_positives;
    out.false_positives += m.false_positives;
    out.false_negatives += m.false_negatives;
    out.true_negatives += m.true_negatives;
    out.subnet_exact += m.subnet_exact;
    out.subnet_larger += m.subnet_larger;
  }
  const double found = out.subnet_exact + out.subnet_larger;
  out.subnet_fdr = found > 0.0 ? out.subnet_larger / found : 0.0;
  out.subnet_exact /= R;
  out.subnet_larger /= R;
  return out;
}

}  // namespace netdpm
