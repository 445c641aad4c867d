#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "chain.hpp"
#include "netdpm/density.hpp"
#include "netdpm/quadrature.hpp"
#include "netdpm/samplers.hpp"
#include "sampling.hpp"

namespace netdpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Slot {
  MixtureComponent comp;
  double log_norm = 0.0;
  double inv_var = 1.0;
  int count = 0;
  int cls = 0;
  bool live = false;
  double sum = 0.0;
  double centered_ss = 0.0;

  void refresh() {
    log_norm = -kLogSqrt2Pi - 0.5 * std::log(comp.variance);
    inv_var = 1.0 / comp.variance;
  }
  double log_lik(double x) const {
    const double d = x - comp.mean;
    return log_norm - 0.5 * d * d * inv_var;
  }
};

std::pair<double, double> moments(std::span<const double> r, std::span<const std::uint8_t> z, int k) {
  double n = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (z[i] == k) {
      n += 1.0;
      sum += r[i];
    }
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (z[i] == k) ss += (r[i] - mean) * (r[i] - mean);
  }
  return {mean, n > 1.0 ? ss / (n - 1.0) : 0.0};
}

// Slot-pool Gibbs sampler for a DP mixture. In two-class mode components
// carry a class, the Ising prior couples labels and means obey the global
// order restriction. In single-class mode it is a plain DPM of normals.
class DpChain {
 public:
  DpChain(std::span<const double> r, const FeatureNetwork* net, const BasePrior& prior,
          const IsingPriorConfig& ising, bool two_class, std::span<const std::uint8_t> fixed,
          const SamplerConfig& cfg)
      : r_(r),
        n_(r.size()),
        prior_(prior),
        two_class_(two_class),
        fixed_(n_, 0),
        rng_(cfg.seed),
        log_new_(n_, {-kInf, -kInf}),
        assign_(n_, -1),
        perm_(n_) {
    if (two_class_) energies_.emplace(*net, ising);
    if (!fixed.empty()) std::copy(fixed.begin(), fixed.end(), fixed_.begin());
    const int classes = two_class_ ? 2 : 1;
    for (int k = 0; k < classes; ++k) log_tau_[static_cast<std::size_t>(k)] = std::log(prior_.classes[k].tau);
    for (std::size_t i = 0; i < n_; ++i) {
      for (int k = 0; k < classes; ++k) {
        log_new_[i][static_cast<std::size_t>(k)] =
            log_new_component_marginal(r_[i], prior_.classes[static_cast<std::size_t>(k)], cfg.quadrature_nodes);
      }
    }
    std::iota(perm_.begin(), perm_.end(), 0);
    z_ = two_class_ ? detail::initial_labels(r_, fixed_) : std::vector<std::uint8_t>(n_, 0);
    initialize();
  }

  double sweep(bool track) {
    ++iteration_;
    rng_.shuffle(std::span<int>(perm_));
    double pl = 0.0;
    for (int i : perm_) pl += update_feature(static_cast<std::size_t>(i), track);
    update_params();
    return pl;
  }

  std::span<const std::uint8_t> labels() const { return z_; }

  MixtureState snapshot(bool with_assignments) const {
    MixtureState st;
    st.num_null = live_[0];
    std::vector<int> position(slots_.size(), -1);
    for (std::size_t p = 0; p < order_.size(); ++p) {
      const Slot& s = slots_[static_cast<std::size_t>(order_[p])];
      position[static_cast<std::size_t>(order_[p])] = static_cast<int>(p);
      MixtureComponent c = s.comp;
      c.weight = static_cast<double>(s.count) / m_[static_cast<std::size_t>(s.cls)];
      st.components.push_back(c);
      st.counts.push_back(s.count);
    }
    st.labels = z_;
    if (with_assignments) {
      st.assignments.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        st.assignments[i] = st.index_of(position[static_cast<std::size_t>(assign_[i])]);
      }
    }
    return st;
  }

  OrderedDensitySet density_set() const {
    OrderedDensitySet out;
    for (int s : order_) {
      MixtureComponent c = slots_[static_cast<std::size_t>(s)].comp;
      c.weight = static_cast<double>(slots_[static_cast<std::size_t>(s)].count) / static_cast<double>(n_);
      if (!out.components.empty() && !(out.components.back().mean < c.mean)) {
        c.mean = std::nextafter(out.components.back().mean, kInf);
      }
      out.components.push_back(c);
    }
    return out;
  }

  void check() const {
    std::vector<int> recount(slots_.size(), 0);
    std::array<int, 2> m{0, 0};
    for (std::size_t i = 0; i < n_; ++i) {
      const int s = assign_[i];
      if (s < 0 || s >= static_cast<int>(slots_.size()) || !slots_[static_cast<std::size_t>(s)].live) {
        throw InvalidStateError("feature " + std::to_string(i) + " points at a dead component");
      }
      if (slots_[static_cast<std::size_t>(s)].cls != z_[i]) {
        throw InvalidStateError("feature " + std::to_string(i) + " has a label inconsistent with its component");
      }
      if (fixed_[i] && z_[i] != 1) throw InvalidStateError("sure-selected feature " + std::to_string(i) + " lost its label");
      ++recount[static_cast<std::size_t>(s)];
      ++m[z_[i]];
    }
    if (m != m_) throw InvalidStateError("class counts disagree with labels");
    int live_total = 0;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      if (!slots_[s].live) continue;
      ++live_total;
      if (recount[s] != slots_[s].count || recount[s] == 0) {
        throw InvalidStateError("component counts disagree with assignments");
      }
    }
    if (live_total != static_cast<int>(order_.size())) throw InvalidStateError("component order list is stale");
    for (std::size_t p = 0; p < order_.size(); ++p) {
      const Slot& s = slots_[static_cast<std::size_t>(order_[p])];
      if ((static_cast<int>(p) < live_[0]) != (s.cls == 0)) {
        throw InvalidStateError("component classes are not partitioned by the order");
      }
      if (p > 0 && !(slots_[static_cast<std::size_t>(order_[p - 1])].comp.mean < s.comp.mean)) {
        throw InvalidStateError("order restriction violated at sweep " + std::to_string(iteration_));
      }
    }
  }

 private:
  const ClassPrior& cls_prior(int k) const { return prior_.classes[static_cast<std::size_t>(k)]; }

  void initialize() {
    std::array<double, 2> means{0.0, 0.0};
    std::array<double, 2> vars{1.0, 1.0};
    std::array<bool, 2> present{false, false};
    for (int k = 0; k < 2; ++k) {
      if (std::count(z_.begin(), z_.end(), k) == 0) continue;
      present[static_cast<std::size_t>(k)] = true;
      auto [mean, var] = moments(r_, z_, k);
      const ClassPrior& p = cls_prior(two_class_ ? k : 0);
      if (!(var > 1e-8)) var = p.beta / (p.alpha + 1.0);
      means[static_cast<std::size_t>(k)] = mean;
      vars[static_cast<std::size_t>(k)] = var;
    }
    if (present[0] && present[1] && !(means[0] < means[1])) {
      means[1] = means[0] + 1e-6 * (1.0 + std::abs(means[0]));
    }
    std::array<int, 2> slot{-1, -1};
    for (int k = 0; k < 2; ++k) {
      if (!present[static_cast<std::size_t>(k)]) continue;
      slot[static_cast<std::size_t>(k)] = add_slot({means[static_cast<std::size_t>(k)], vars[static_cast<std::size_t>(k)], 0.0}, k);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const int s = slot[z_[i]];
      assign_[i] = s;
      ++slots_[static_cast<std::size_t>(s)].count;
      ++m_[z_[i]];
    }
  }

  int add_slot(MixtureComponent comp, int cls) {
    int s;
    if (!free_.empty()) {
      s = free_.back();
      free_.pop_back();
    } else {
      s = static_cast<int>(slots_.size());
      slots_.emplace_back();
    }
    auto pos = std::upper_bound(order_.begin(), order_.end(), comp.mean, [&](double mean, int other) {
      return mean < slots_[static_cast<std::size_t>(other)].comp.mean;
    });
    const double lo = pos == order_.begin() ? -kInf : slots_[static_cast<std::size_t>(*(pos - 1))].comp.mean;
    const double hi = pos == order_.end() ? kInf : slots_[static_cast<std::size_t>(*pos)].comp.mean;
    comp.mean = detail::strictly_inside(comp.mean, lo, hi);
    Slot& slot = slots_[static_cast<std::size_t>(s)];
    slot = Slot{};
    slot.comp = comp;
    slot.cls = cls;
    slot.live = true;
    slot.refresh();
    order_.insert(pos, s);
    ++live_[static_cast<std::size_t>(cls)];
    return s;
  }

  void remove_slot(int s) {
    Slot& slot = slots_[static_cast<std::size_t>(s)];
    slot.live = false;
    --live_[static_cast<std::size_t>(slot.cls)];
    order_.erase(std::find(order_.begin(), order_.end(), s));
    free_.push_back(s);
  }

  // Interval a class-k birth must fall in to keep the classes ordered.
  std::pair<double, double> birth_bounds(int k) const {
    if (!two_class_) return {-kInf, kInf};
    if (k == 0) {
      if (live_[1] == 0) return {-kInf, kInf};
      return {-kInf, slots_[static_cast<std::size_t>(order_[static_cast<std::size_t>(live_[0])])].comp.mean};
    }
    if (live_[0] == 0) return {-kInf, kInf};
    return {slots_[static_cast<std::size_t>(order_[static_cast<std::size_t>(live_[0] - 1)])].comp.mean, kInf};
  }

  double update_feature(std::size_t i, bool track) {
    const double x = r_[i];
    {
      const int s = assign_[i];
      Slot& old = slots_[static_cast<std::size_t>(s)];
      --old.count;
      --m_[static_cast<std::size_t>(old.cls)];
      if (old.count == 0) remove_slot(s);
    }
    std::array<bool, 2> allowed{!fixed_[i], two_class_};
    std::array<double, 2> base{0.0, 0.0};
    if (two_class_) {
      const auto e = (*energies_)(static_cast<int>(i), z_);
      for (int k = 0; k < 2; ++k) {
        base[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(k)] - std::log(cls_prior(k).tau + m_[static_cast<std::size_t>(k)]);
      }
    } else {
      base[0] = -std::log(cls_prior(0).tau + m_[0]);
    }

    cand_.clear();
    weights_.clear();
    for (int s : order_) {
      const Slot& slot = slots_[static_cast<std::size_t>(s)];
      if (!allowed[static_cast<std::size_t>(slot.cls)]) continue;
      cand_.push_back(s);
      weights_.push_back(std::log(static_cast<double>(slot.count)) + slot.log_lik(x) + base[static_cast<std::size_t>(slot.cls)]);
    }
    for (int k = 0; k < 2; ++k) {
      if (!allowed[static_cast<std::size_t>(k)]) continue;
      cand_.push_back(-1 - k);
      weights_.push_back(log_tau_[static_cast<std::size_t>(k)] + base[static_cast<std::size_t>(k)] + log_new_[i][static_cast<std::size_t>(k)]);
    }
    const double top = *std::max_element(weights_.begin(), weights_.end());
    if (!std::isfinite(top)) {
      std::ostringstream msg;
      msg << "non-finite assignment weights at sweep " << iteration_ << ", feature " << i << " (r = " << x << ")";
      throw NumericalError(msg.str());
    }
    normalize_log_weights(weights_);
    const std::size_t pick = detail::sample_categorical(rng_, weights_);

    int s = cand_[pick];
    int k;
    if (s < 0) {
      k = -1 - s;
      auto [lo, hi] = birth_bounds(k);
      s = add_slot(detail::sample_birth(rng_, x, cls_prior(k), lo, hi), k);
    } else {
      k = slots_[static_cast<std::size_t>(s)].cls;
    }

    double pl = 0.0;
    if (track && two_class_ && !fixed_[i]) {
      double pk = 0.0;
      for (std::size_t c = 0; c < cand_.size(); ++c) {
        const int ck = cand_[c] < 0 ? -1 - cand_[c] : slots_[static_cast<std::size_t>(cand_[c])].cls;
        if (ck == k) pk += weights_[c];
      }
      pl = std::log(pk);
    }

    ++slots_[static_cast<std::size_t>(s)].count;
    ++m_[static_cast<std::size_t>(k)];
    z_[i] = static_cast<std::uint8_t>(k);
    assign_[i] = s;
    return pl;
  }

  void update_params() {
    for (int s : order_) {
      slots_[static_cast<std::size_t>(s)].sum = 0.0;
      slots_[static_cast<std::size_t>(s)].centered_ss = 0.0;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      Slot& slot = slots_[static_cast<std::size_t>(assign_[i])];
      const double d = r_[i] - slot.comp.mean;
      slot.sum += r_[i];
      slot.centered_ss += d * d;
    }
    for (std::size_t p = 0; p < order_.size(); ++p) {
      Slot& slot = slots_[static_cast<std::size_t>(order_[p])];
      double lo = -kInf;
      double hi = kInf;
      if (two_class_) {
        if (p > 0) lo = slots_[static_cast<std::size_t>(order_[p - 1])].comp.mean;
        if (p + 1 < order_.size()) hi = slots_[static_cast<std::size_t>(order_[p + 1])].comp.mean;
      }
      detail::update_component(rng_, slot.comp, static_cast<std::size_t>(slot.count), slot.sum, slot.centered_ss,
                               cls_prior(slot.cls), lo, hi);
      slot.refresh();
    }
    if (!two_class_) {
      std::sort(order_.begin(), order_.end(), [&](int a, int b) {
        return slots_[static_cast<std::size_t>(a)].comp.mean < slots_[static_cast<std::size_t>(b)].comp.mean;
      });
    }
  }

  std::span<const double> r_;
  std::size_t n_;
  BasePrior prior_;
  bool two_class_;
  std::vector<std::uint8_t> fixed_;
  Rng rng_;
  std::optional<detail::IsingEnergies> energies_;
  std::array<double, 2> log_tau_{0.0, 0.0};
  std::vector<std::array<double, 2>> log_new_;

  std::vector<Slot> slots_;
  std::vector<int> free_;
  std::vector<int> order_;
  std::array<int, 2> live_{0, 0};
  std::array<int, 2> m_{0, 0};
  std::vector<int> assign_;
  std::vector<std::uint8_t> z_;
  std::vector<int> perm_;
  std::vector<int> cand_;
  std::vector<double> weights_;
  long iteration_ = 0;
};

}  // namespace

PosteriorDraws net_dpm1_run(const StatisticsVector& r, const FeatureNetwork& net, const BasePrior& prior,
                            const IsingPriorConfig& ising, const SamplerConfig& cfg,
                            std::span<const std::uint8_t> fixed) {
  cfg.validate();
  prior.validate();
  ising.validate();
  detail::check_chain_inputs(r, net, fixed);
  DpChain chain(r.values, &net, prior, ising, true, fixed, cfg);
  return detail::run_chain(chain, cfg, r.size());
}

ClassPrior default_std_dpm_prior(const StatisticsVector& r) {
  r.validate();
  const double n = static_cast<double>(r.size());
  const double mean = std::accumulate(r.values.begin(), r.values.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : r.values) ss += (x - mean) * (x - mean);
  double var = r.size() > 1 ? ss / (n - 1.0) : 1.0;
  if (!(var > 1e-8)) var = 1.0;
  ClassPrior p;
  p.gamma = mean;
  p.xi2 = var;
  p.alpha = 2.0;
  p.beta = var / 2.0;
  p.tau = 1.0;
  return p;
}

std::vector<OrderedDensitySet> std_dpm_run(const StatisticsVector& r, const ClassPrior& prior,
                                           const SamplerConfig& cfg) {
  cfg.validate();
  prior.validate();
  r.validate();
  BasePrior base;
  base.classes = {prior, prior};
  DpChain chain(r.values, nullptr, base, IsingPriorConfig{}, false, {}, cfg);
  std::vector<OrderedDensitySet> out;
  out.reserve(static_cast<std::size_t>(cfg.retained_count()));
  for (int t = 0; t < cfg.iterations; ++t) {
    chain.sweep(false);
    if (t >= cfg.burn_in && (t - cfg.burn_in + 1) % cfg.thin == 0) {
      if (cfg.validate_each_draw) chain.check();
      out.push_back(chain.density_set());
    }
    if (cfg.progress && (t + 1) % cfg.progress_stride == 0) cfg.progress(t + 1);
  }
  return out;
}

}  // namespace netdpm
