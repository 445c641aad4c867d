#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netdpm/error.hpp"
#include "netdpm/fast_approx.hpp"
#include "netdpm/hodc.hpp"
#include "netdpm/io.hpp"
#include "netdpm/parallel.hpp"
#include "netdpm/random.hpp"
#include "netdpm/samplers.hpp"
#include "netdpm/simulation.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace netdpm;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Common {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = ".";
  bool quiet = false;
  bool full_precision = false;
  std::string log_format = "text";
  std::string config_text;  // effective configuration, filled after parsing
};

class Logger {
 public:
  explicit Logger(const Common& c) : quiet_(c.quiet), json_(c.log_format == "json") {}

  void info(const std::string& event, const std::string& message) {
    if (quiet_) return;
    std::lock_guard<std::mutex> lock(mu_);
    if (json_) {
      std::cerr << json{{"event", event}, {"message", message}}.dump() << "\n";
    } else {
      std::cerr << "[" << event << "] " << message << "\n";
    }
  }

 private:
  bool quiet_;
  bool json_;
  std::mutex mu_;
};

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + " is empty");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// 1-based node numbers to 0-based indices.
std::vector<int> parse_nodes(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_doubles(text, what)) {
    if (v < 1 || v != static_cast<int>(v)) throw ConfigError(std::string(what) + ": node numbers start at 1");
    out.push_back(static_cast<int>(v) - 1);
  }
  return out;
}

json grid_json(const HyperGrid& grid) {
  json rho = json::array();
  for (auto [a, b] : grid.rho_pairs) rho.push_back({a, b});
  return {{"pi0", grid.pi0_values}, {"rho", rho}};
}

void write_json(const fs::path& path, const json& doc) { io::write_file(path.string(), doc.dump(2) + "\n"); }

void write_timing(const fs::path& dir, double seconds) {
  write_json(dir / "timing.json", json{{"wall_seconds", seconds}});
}

json run_header(const std::string& command, const Common& c) {
  return {{"command", command}, {"version", kVersion}, {"seed", c.seed}, {"config", c.config_text}};
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string statistics;
  bool pvalues = false;
  std::string network;
  std::string node_weights;
  std::string method = "net-dpm-3";
  int iterations = 0;
  int burn_in = 2000;
  int thin = 1;
  int std_iterations = 5000;
  int std_burn_in = 2000;
  int pairs = 50;
  int quadrature_nodes = kDefaultQuadratureNodes;
  std::string grid_pi0 = "0.75,0.8,0.85,0.9";
  std::string grid_rho0 = "0.5,1,5,10,15";
  std::string grid_rho1 = "0.5,1,5,10,15";
  bool all_rho_pairs = false;
  std::string averaging = "uniform";
  std::string sure_selected;
  int auto_sure = 0;
  int L0 = 0;
  int L1 = 0;
  double tau0 = 10.0;
  double tau1 = 2.0;
  double beta = 10.0;
  double threshold = 0.5;
};

void validate(const AnalyzeArgs& a) {
  if (!fs::exists(a.statistics)) throw ConfigError("statistics file '" + a.statistics + "' does not exist");
  if (a.method != "std-dpm") {
    if (a.network.empty()) throw ConfigError("--network is required for method " + a.method);
    if (!fs::exists(a.network)) throw ConfigError("network file '" + a.network + "' does not exist");
  }
  if (!a.node_weights.empty() && !fs::exists(a.node_weights)) {
    throw ConfigError("node weight file '" + a.node_weights + "' does not exist");
  }
  if (a.pairs < 1) throw ConfigError("--pairs must be at least 1");
  if (a.auto_sure < 0) throw ConfigError("--auto-sure must be nonnegative");
  if (a.L0 < 0 || a.L1 < 0) throw ConfigError("--L0/--L1 must be nonnegative");
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) throw ConfigError("--threshold must lie in (0, 1)");
  if (!a.sure_selected.empty() && a.auto_sure > 0) throw ConfigError("use either --sure-selected or --auto-sure");
}

int run_analyze(const AnalyzeArgs& a, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  Logger log(c);
  validate(a);
  const fs::path out(c.out);
  fs::create_directories(out);

  const auto r = io::read_statistics(a.statistics, a.pvalues);
  const std::size_t n = r.size();
  FeatureNetwork net;
  if (!a.network.empty()) {
    const auto rows = io::read_edge_list(a.network);
    std::unordered_map<std::string, double> weights;
    if (!a.node_weights.empty()) weights = io::read_node_weights(a.node_weights);
    net = load_network(rows, r.feature_ids, weights);
  } else {
    net = FeatureNetwork::from_edges(n, {});
  }
  log.info("input", std::to_string(n) + " features, " + std::to_string(net.num_edges()) + " edges");

  const bool net3 = a.method == "net-dpm-3";
  const int iterations = a.iterations > 0 ? a.iterations : (net3 ? 10000 : 5000);

  SamplerConfig std_cfg;
  std_cfg.iterations = a.std_iterations;
  std_cfg.burn_in = a.std_burn_in;
  std_cfg.seed = derive_seed(c.seed, 1);
  std_cfg.quadrature_nodes = a.quadrature_nodes;
  std_cfg.progress = [&](int t) { log.info("std-dpm", "iteration " + std::to_string(t)); };
  std_cfg.validate();
  log.info("std-dpm", "fitting standard DPM");
  const auto draws = std_dpm_run(r, default_std_dpm_prior(r), std_cfg);
  const auto std_report = std_dpm_selection(r, draws, a.threshold);

  json meta = run_header("analyze", c);
  meta["method"] = a.method;
  meta["features"] = n;
  meta["edges"] = net.num_edges();

  SelectionReport report;
  if (a.method == "std-dpm") {
    report = std_report;
  } else {
    std::vector<int> sure;
    if (!a.sure_selected.empty()) {
      std::unordered_map<std::string, int> index;
      for (std::size_t i = 0; i < n; ++i) index.emplace(r.feature_ids[i], static_cast<int>(i));
      for (const auto& id : split_list(a.sure_selected)) {
        auto it = index.find(id);
        if (it == index.end()) throw ConfigError("sure-selected id '" + id + "' is not in the statistics file");
        sure.push_back(it->second);
      }
    } else if (a.auto_sure > 0) {
      sure = pick_sure_selected(std_report, net, r, a.auto_sure);
    }
    std::vector<std::uint8_t> fixed(n, 0);
    json sure_ids = json::array();
    for (int s : sure) {
      fixed[static_cast<std::size_t>(s)] = 1;
      sure_ids.push_back(r.feature_ids[static_cast<std::size_t>(s)]);
    }
    meta["sure_selected"] = sure_ids;

    const auto grid = HyperGrid::cartesian(parse_doubles(a.grid_pi0, "--grid-pi0"),
                                           parse_doubles(a.grid_rho0, "--grid-rho0"),
                                           parse_doubles(a.grid_rho1, "--grid-rho1"), !a.all_rho_pairs);
    grid.validate();
    const auto mode = a.averaging == "pseudo-likelihood" ? AveragingWeights::kPseudoLikelihood
                                                         : AveragingWeights::kUniform;
    const bool track = mode == AveragingWeights::kPseudoLikelihood;
    meta["grid"] = grid_json(grid);
    meta["averaging"] = a.averaging;

    GridRunner runner;
    std::vector<GuidedDensityPair> pairs;
    BasePrior prior;
    if (net3) {
      std::vector<std::string> warnings;
      pairs = build_guided_pairs(draws, a.pairs, &warnings);
      for (const auto& w : warnings) log.info("warning", w);
      if (pairs.empty()) throw NumericalError("no standard DPM draw had two or more components");
      meta["pairs"] = pairs.size();
      meta["warnings"] = warnings;
      Net3Config n3;
      n3.sweeps = iterations;
      n3.burn_in = a.burn_in;
      n3.track_pseudo_likelihood = track;
      n3.validate();
      runner = [&, n3](const IsingPriorConfig& ic, std::uint64_t seed) {
        auto cfg = n3;
        cfg.seed = seed;
        return net_dpm3_run(r, net, pairs, ic, cfg, fixed);
      };
      meta["sampler"] = {{"sweeps", n3.sweeps}, {"burn_in", n3.burn_in}};
    } else {
      prior = default_base_prior(draws);
      prior.classes[0].tau = a.tau0;
      prior.classes[1].tau = a.tau1;
      prior.classes[0].beta = a.beta;
      prior.classes[1].beta = a.beta;
      prior.validate();
      json classes = json::array();
      for (const auto& k : prior.classes) {
        classes.push_back({{"gamma", k.gamma}, {"xi2", k.xi2}, {"alpha", k.alpha}, {"beta", k.beta}, {"tau", k.tau}});
      }
      meta["base_prior"] = classes;

      SamplerConfig cfg;
      cfg.iterations = iterations;
      cfg.burn_in = a.burn_in;
      cfg.thin = a.thin;
      cfg.quadrature_nodes = a.quadrature_nodes;
      cfg.keep_snapshots = false;
      cfg.track_pseudo_likelihood = track;
      cfg.validate();
      meta["sampler"] = {{"iterations", cfg.iterations}, {"burn_in", cfg.burn_in}, {"thin", cfg.thin},
                         {"quadrature_nodes", cfg.quadrature_nodes}};
      const double threshold = a.threshold;
      if (a.method == "net-dpm-1") {
        runner = [&, cfg, threshold](const IsingPriorConfig& ic, std::uint64_t seed) {
          auto local = cfg;
          local.seed = seed;
          return posterior_summary(net_dpm1_run(r, net, prior, ic, local, fixed), SelectionRule::kThreshold,
                                   threshold);
        };
      } else {
        auto [L0, L1] = estimate_component_counts(draws);
        if (a.L0 > 0) L0 = a.L0;
        if (a.L1 > 0) L1 = a.L1;
        meta["components"] = {{"L0", L0}, {"L1", L1}};
        runner = [&, cfg, threshold, L0 = L0, L1 = L1](const IsingPriorConfig& ic, std::uint64_t seed) {
          auto local = cfg;
          local.seed = seed;
          return posterior_summary(net_dpm2_run(r, net, prior, ic, L0, L1, local, fixed),
                                   SelectionRule::kThreshold, threshold);
        };
      }
    }

    std::size_t done = 0;
    std::mutex mu;
    const std::size_t total = grid.size();
    GridRunner logged = [&](const IsingPriorConfig& ic, std::uint64_t seed) {
      auto rep = runner(ic, seed);
      std::lock_guard<std::mutex> lock(mu);
      ++done;
      log.info(a.method, "grid point " + std::to_string(done) + "/" + std::to_string(total) + " done");
      return rep;
    };
    const auto avg = model_average(logged, grid, derive_seed(c.seed, 2), mode, c.threads, a.threshold);
    report = avg.report;
    meta["grid_weights"] = avg.weights;
    meta["non_uniform_weights"] = avg.non_uniform;
  }

  const auto parts = extract_subnetworks(report.selected, net);
  io::write_probabilities((out / "probabilities.csv").string(), r.feature_ids, report, c.full_precision);
  io::write_labels((out / "labels.csv").string(), r.feature_ids, report.selected);
  io::write_subnetworks((out / "subnetworks.csv").string(), parts, r.feature_ids);
  std::string isolated = "feature_id\n";
  for (int v : parts.isolated) isolated += r.feature_ids[static_cast<std::size_t>(v)] + "\n";
  io::write_file((out / "isolated.csv").string(), isolated);

  meta["selected"] = report.num_selected();
  meta["subnetworks"] = parts.subnetworks.size();
  meta["threshold"] = a.threshold;
  write_json(out / "metadata.json", meta);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_timing(out, secs);
  log.info("done", std::to_string(report.num_selected()) + " selected features, " +
                       std::to_string(parts.subnetworks.size()) + " subnetworks");
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string design = "designed";
  int replicates = 1;
  std::string null_dist = "normal(0,1)";
  std::string alt_dist = "gaussian-mixture(0.4,3,1;0.6,2,0.5)";
  // designed
  std::string designed_edges;
  int designed_nodes = 11;
  std::string ports = "5,6,11";
  std::string selected_genes = "1,2,3,4,5,8,9,10";
  std::string target = "1,2,3,4,5";
  int scale_free_n = 83;
  int attach = 1;
  int bridges = 3;
  // ising
  int nodes = 300;
  double pi0 = 0.8;
  double rho0 = 5.0;
  double rho1 = 10.0;
  int ising_sweeps = 500;
};

DesignedNetworkSpec designed_spec(const SimulateArgs& a) {
  auto spec = DesignedNetworkSpec::defaults();
  spec.designed_nodes = a.designed_nodes;
  if (!a.designed_edges.empty()) {
    spec.designed_edges.clear();
    for (const auto& row : io::read_edge_list(a.designed_edges)) {
      auto node = [&](const std::string& s) {
        try {
          std::size_t used = 0;
          const int v = std::stoi(s, &used);
          if (used == s.size() && v >= 1) return v - 1;
        } catch (const std::exception&) {
        }
        throw IngestionError(a.designed_edges + ":" + std::to_string(row.line) + ": designed nodes are numbered 1.." +
                             std::to_string(a.designed_nodes));
      };
      spec.designed_edges.push_back({node(row.a), node(row.b)});
    }
  }
  spec.ports = parse_nodes(a.ports, "--ports");
  spec.selected = parse_nodes(a.selected_genes, "--selected-genes");
  spec.target = a.target.empty() ? std::vector<int>{} : parse_nodes(a.target, "--target");
  spec.scale_free_n = a.scale_free_n;
  spec.attach_edges = a.attach;
  spec.bridge_edges = a.bridges;
  spec.validate();
  return spec;
}

int run_simulate(const SimulateArgs& a, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  Logger log(c);
  if (a.replicates < 1) throw ConfigError("--replicates must be at least 1");
  if (a.design != "designed" && a.design != "ising") throw ConfigError("--design must be designed or ising");
  StatisticsSpec stats;
  stats.null_dist = ClassDistribution::parse(a.null_dist);
  stats.alt_dist = ClassDistribution::parse(a.alt_dist);
  stats.null_dist.validate();
  stats.alt_dist.validate();

  DesignedNetworkSpec spec;
  IsingPriorConfig ising{a.pi0, {a.rho0, a.rho1}};
  json echo;
  if (a.design == "designed") {
    spec = designed_spec(a);
    json edges = json::array();
    for (auto [u, v] : spec.designed_edges) edges.push_back({u + 1, v + 1});
    auto one_based = [](const std::vector<int>& xs) {
      std::vector<int> out;
      for (int x : xs) out.push_back(x + 1);
      return out;
    };
    echo = {{"design", "designed"},
            {"designed_nodes", spec.designed_nodes},
            {"designed_edges", edges},
            {"ports", one_based(spec.ports)},
            {"selected", one_based(spec.selected)},
            {"target", one_based(spec.target)},
            {"scale_free_n", spec.scale_free_n},
            {"attach_edges", spec.attach_edges},
            {"bridge_edges", spec.bridge_edges}};
  } else {
    if (a.nodes < 2) throw ConfigError("--nodes must be at least 2");
    if (a.ising_sweeps < 1) throw ConfigError("--ising-sweeps must be at least 1");
    ising.validate();
    echo = {{"design", "ising"},       {"nodes", a.nodes}, {"attach_edges", a.attach}, {"pi0", a.pi0},
            {"rho", {a.rho0, a.rho1}}, {"ising_sweeps", a.ising_sweeps}};
  }
  echo["null"] = stats.null_dist.to_string();
  echo["alternative"] = stats.alt_dist.to_string();

  const fs::path out(c.out);
  fs::create_directories(out);
  parallel_for(static_cast<std::size_t>(a.replicates), c.threads, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(c.seed, k);
    GroundTruth truth = a.design == "designed" ? build_designed_network(spec, seed)
                                               : build_ising_truth(a.nodes, a.attach, ising, a.ising_sweeps, seed);
    auto r = generate_statistics(truth.labels, stats, derive_seed(seed, 3));
    const std::size_t n = truth.labels.size();
    for (std::size_t i = 0; i < n; ++i) r.feature_ids[i] = "g" + std::to_string(i + 1);

    fs::path dir = out;
    if (a.replicates > 1) {
      char name[32];
      std::snprintf(name, sizeof name, "rep%03zu", k + 1);
      dir /= name;
      fs::create_directories(dir);
    }
    io::write_edge_list((dir / "network.tsv").string(), truth.network, r.feature_ids);
    io::write_labels((dir / "labels.csv").string(), r.feature_ids, truth.labels);
    io::write_statistics((dir / "statistics.csv").string(), r, c.full_precision);
    json target = json::array();
    for (int v : truth.target) target.push_back(r.feature_ids[static_cast<std::size_t>(v)]);
    json doc = run_header("simulate", c);
    doc["replicate"] = k + 1;
    doc["replicate_seed"] = seed;
    doc["spec"] = echo;
    doc["features"] = n;
    doc["edges"] = truth.network.num_edges();
    doc["selected"] = std::count(truth.labels.begin(), truth.labels.end(), 1);
    doc["target"] = target;
    write_json(dir / "truth.json", doc);
    log.info("simulate", "replicate " + std::to_string(k + 1) + ": " + std::to_string(n) + " features");
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_timing(out, secs);
  return 0;
}

// ------------------------------------------------------------------ score

struct ScoreArgs {
  std::vector<std::string> truth;
  std::vector<std::string> report;
};

GroundTruth load_truth(const fs::path& dir, std::vector<std::string>& ids) {
  const auto labels = io::read_labels((dir / "labels.csv").string());
  ids = labels.ids;
  GroundTruth truth;
  truth.labels = labels.labels;
  truth.network = load_network(io::read_edge_list((dir / "network.tsv").string()), ids);
  const auto meta_path = dir / "truth.json";
  std::ifstream in(meta_path);
  if (!in) throw IngestionError("cannot open '" + meta_path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw IngestionError(meta_path.string() + ": " + e.what());
  }
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<int>(i));
  if (doc.contains("target")) {
    for (const auto& t : doc["target"]) {
      auto it = index.find(t.get<std::string>());
      if (it == index.end()) throw IngestionError(meta_path.string() + ": unknown target id '" + t.get<std::string>() + "'");
      truth.target.push_back(it->second);
    }
  }
  std::sort(truth.target.begin(), truth.target.end());
  return truth;
}

std::vector<std::uint8_t> load_report(const std::string& path, const std::vector<std::string>& ids) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  in.close();
  const auto table = header.rfind("feature_id,prob_selected", 0) == 0 ? io::read_selection(path) : io::read_labels(path);
  std::unordered_map<std::string, std::uint8_t> by_id;
  for (std::size_t i = 0; i < table.ids.size(); ++i) by_id.emplace(table.ids[i], table.labels[i]);
  std::vector<std::uint8_t> out(ids.size(), 0);
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto it = by_id.find(ids[i]);
    if (it == by_id.end()) {
      missing.push_back(ids[i]);
    } else {
      out[i] = it->second;
    }
  }
  if (!missing.empty() || by_id.size() != ids.size()) {
    throw IngestionError(path + ": feature ids do not match the truth" +
                         (missing.empty() ? std::string() : " (missing '" + missing.front() + "')"));
  }
  return out;
}

std::string metric_rows(const SelectionMetrics& m, const std::string& prefix, bool full) {
  const std::vector<std::pair<std::string, double>> gene = {{"tpr", m.gene_tpr}, {"fpr", m.gene_fpr}, {"fdr", m.gene_fdr}};
  const std::vector<std::pair<std::string, double>> subnet = {
      {"exact", m.subnet_exact}, {"larger", m.subnet_larger}, {"fdr", m.subnet_fdr}};
  std::string text;
  for (const auto& [k, v] : gene) text += prefix + "gene," + k + "," + io::format_number(v, full) + "\n";
  for (const auto& [k, v] : subnet) text += prefix + "subnetwork," + k + "," + io::format_number(v, full) + "\n";
  return text;
}

int run_score(const ScoreArgs& a, const Common& c) {
  Logger log(c);
  if (a.truth.empty() || a.truth.size() != a.report.size()) {
    throw ConfigError("give one --report per --truth directory");
  }
  std::vector<SelectionMetrics> per(a.truth.size());
  parallel_for(a.truth.size(), c.threads, [&](std::size_t k) {
    std::vector<std::string> ids;
    const auto truth = load_truth(a.truth[k], ids);
    per[k] = score_selection(truth, load_report(a.report[k], ids));
  });
  const fs::path out(c.out);
  fs::create_directories(out);
  io::write_file((out / "metrics.csv").string(),
                 "level,metric,value\n" + metric_rows(aggregate_metrics(per), "", c.full_precision));
  if (per.size() > 1) {
    std::string text = "replicate,level,metric,value\n";
    for (std::size_t k = 0; k < per.size(); ++k) text += metric_rows(per[k], std::to_string(k + 1) + ",", c.full_precision);
    io::write_file((out / "metrics_by_replicate.csv").string(), text);
  }
  log.info("score", std::to_string(per.size()) + " replicate(s) scored");
  return 0;
}

// ------------------------------------------------------------------- hodc

int run_hodc(const std::string& components, const Common& c) {
  Logger log(c);
  const auto set = io::read_components(components);
  if (set.size() < 2) throw DomainError(components + ": HODC needs at least two components");
  const auto part = hodc_run(set);
  const fs::path out(c.out);
  fs::create_directories(out);
  io::write_partition((out / "partition.csv").string(), part);
  auto [L0, L1] = part.split_sizes();
  json meta = run_header("hodc", c);
  meta["components"] = set.size();
  meta["split"] = {L0, L1};
  write_json(out / "metadata.json", meta);
  log.info("hodc", "final split " + std::to_string(L0) + " | " + std::to_string(L1));
  return 0;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

// TOML text of the global options and those of `cmd` (in a section), with
// explicit values or defaults. Reloadable through --config.
std::string effective_config(const CLI::App& app, const CLI::App& cmd) {
  auto render = [](const CLI::App& a) {
    std::string text;
    for (const CLI::Option* opt : a.get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "version" || name == "config") continue;
      if (opt->get_expected_max() == 0) {
        text += name + " = " + (opt->as<bool>() ? "true" : "false") + "\n";
        continue;
      }
      std::vector<std::string> values = opt->results();
      if (opt->count() == 0) {
        values.clear();
        if (!opt->get_default_str().empty() && opt->get_default_str() != "{}") values.push_back(opt->get_default_str());
      }
      if (opt->get_expected_max() > 1) {
        std::string list;
        for (const auto& v : values) list += (list.empty() ? "" : ", ") + quoted(v);
        text += name + " = [" + list + "]\n";
      } else {
        text += name + " = " + quoted(values.empty() ? "" : values.back()) + "\n";
      }
    }
    return text;
  };
  return render(app) + "\n[" + cmd.get_name() + "]\n" + render(cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network-guided Dirichlet process mixture selection of features"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "INI/TOML configuration file (one section per command)");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Master seed");
  app.add_option("--threads", common.threads, "Worker threads (0 = available parallelism)");
  app.add_option("--out", common.out, "Output directory");
  app.add_flag("--quiet", common.quiet, "No progress output");
  app.add_flag("--full-precision", common.full_precision, "Print numbers with 17 significant digits");
  app.add_option("--log-format", common.log_format, "Progress log format")->check(CLI::IsMember({"text", "json"}));

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Select features with a NET-DPM method or the standard DPM");
  analyze->add_option("--statistics", an.statistics, "CSV feature_id,r (or feature_id,p with --pvalues)")->required();
  analyze->add_flag("--pvalues", an.pvalues, "Statistics file holds p-values");
  analyze->add_option("--network", an.network, "Edge list (tab or comma separated ids)");
  analyze->add_option("--node-weights", an.node_weights, "CSV feature_id,weight");
  analyze->add_option("--method", an.method, "Method")
      ->check(CLI::IsMember({"net-dpm-1", "net-dpm-2", "net-dpm-3", "std-dpm"}));
  analyze->add_option("--iterations", an.iterations, "Iterations per chain (0: 10000 for net-dpm-3, else 5000)");
  analyze->add_option("--burn-in", an.burn_in, "Burn-in iterations");
  analyze->add_option("--thin", an.thin, "Thinning for net-dpm-1/2");
  analyze->add_option("--std-iterations", an.std_iterations, "Standard DPM iterations");
  analyze->add_option("--std-burn-in", an.std_burn_in, "Standard DPM burn-in");
  analyze->add_option("--pairs", an.pairs, "Guided density pairs for net-dpm-3");
  analyze->add_option("--quadrature-nodes", an.quadrature_nodes, "Initial Gauss-Hermite nodes");
  analyze->add_option("--grid-pi0", an.grid_pi0, "Comma-separated pi0 values");
  analyze->add_option("--grid-rho0", an.grid_rho0, "Comma-separated rho0 values");
  analyze->add_option("--grid-rho1", an.grid_rho1, "Comma-separated rho1 values");
  analyze->add_flag("--all-rho-pairs", an.all_rho_pairs, "Keep rho pairs with rho0 >= rho1");
  analyze->add_option("--averaging", an.averaging, "Grid weights")
      ->check(CLI::IsMember({"uniform", "pseudo-likelihood"}));
  analyze->add_option("--sure-selected", an.sure_selected, "Comma-separated ids pinned to z = 1");
  analyze->add_option("--auto-sure", an.auto_sure, "Pin the k features with most selected neighbours");
  analyze->add_option("--L0", an.L0, "Null components for net-dpm-2 (0 = estimate)");
  analyze->add_option("--L1", an.L1, "Selected components for net-dpm-2 (0 = estimate)");
  analyze->add_option("--tau0", an.tau0, "DP precision of the null class");
  analyze->add_option("--tau1", an.tau1, "DP precision of the selected class");
  analyze->add_option("--beta", an.beta, "Inverse-gamma scale of both classes");
  analyze->add_option("--threshold", an.threshold, "Selection threshold on the inclusion probability");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Write simulated ground-truth bundles");
  simulate->add_option("--design", sim.design, "designed (subnetwork on a scale-free graph) or ising")
      ->check(CLI::IsMember({"designed", "ising"}));
  simulate->add_option("--replicates", sim.replicates, "Number of bundles");
  simulate->add_option("--null", sim.null_dist, "Null generator");
  simulate->add_option("--alt", sim.alt_dist, "Selected-class generator");
  simulate->add_option("--designed-edges", sim.designed_edges, "Edge list over designed nodes 1..m");
  simulate->add_option("--designed-nodes", sim.designed_nodes, "Designed node count");
  simulate->add_option("--ports", sim.ports, "Designed nodes receiving bridge edges");
  simulate->add_option("--selected-genes", sim.selected_genes, "Designed nodes with z = 1");
  simulate->add_option("--target", sim.target, "Designed nodes forming the target subnetwork");
  simulate->add_option("--scale-free-n", sim.scale_free_n, "Nodes in the scale-free part");
  simulate->add_option("--attach", sim.attach, "Edges per new scale-free node");
  simulate->add_option("--bridges", sim.bridges, "Bridge edges into the designed part");
  simulate->add_option("--nodes", sim.nodes, "Nodes for --design ising");
  simulate->add_option("--pi0", sim.pi0, "Ising pi0 for --design ising");
  simulate->add_option("--rho0", sim.rho0, "Ising rho0 for --design ising");
  simulate->add_option("--rho1", sim.rho1, "Ising rho1 for --design ising");
  simulate->add_option("--ising-sweeps", sim.ising_sweeps, "Gibbs sweeps for the labels");

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Score selections against simulated truth");
  score->add_option("--truth", sc.truth, "Truth bundle directory (repeatable)")->required();
  score->add_option("--report", sc.report, "probabilities.csv or labels.csv (repeatable)")->required();

  std::string components;
  auto* hodc = app.add_subcommand("hodc", "Hierarchical ordered density clustering of a component file");
  hodc->add_option("--components", components, "CSV mean,variance,weight")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    auto* cmd = app.get_subcommands().front();
    common.config_text = effective_config(app, *cmd);
    fs::create_directories(common.out);
    io::write_file((fs::path(common.out) / "config.ini").string(), common.config_text);
    if (cmd == analyze) return run_analyze(an, common);
    if (cmd == simulate) return run_simulate(sim, common);
    if (cmd == score) return run_score(sc, common);
    return run_hodc(components, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
