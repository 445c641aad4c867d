#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "chain.hpp"
#include "netdpm/density.hpp"
#include "netdpm/samplers.hpp"
#include "sampling.hpp"

namespace netdpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gibbs sampler with L0 + L1 fixed components; mixture weights integrated out.
class FiniteChain {
 public:
  FiniteChain(std::span<const double> r, const FeatureNetwork& net, const BasePrior& prior,
              const IsingPriorConfig& ising, int L0, int L1, std::span<const std::uint8_t> fixed,
              const SamplerConfig& cfg)
      : r_(r),
        n_(r.size()),
        prior_(prior),
        L_{L0, L1},
        fixed_(n_, 0),
        rng_(cfg.seed),
        energies_(net, ising),
        comps_(static_cast<std::size_t>(L0 + L1)),
        log_norm_(comps_.size()),
        inv_var_(comps_.size()),
        counts_(comps_.size(), 0),
        sum_(comps_.size()),
        ss_(comps_.size()),
        assign_(n_),
        perm_(n_) {
    if (!fixed.empty()) std::copy(fixed.begin(), fixed.end(), fixed_.begin());
    for (int k = 0; k < 2; ++k) {
      pseudo_[static_cast<std::size_t>(k)] = prior_.classes[static_cast<std::size_t>(k)].tau / L_[static_cast<std::size_t>(k)];
    }
    std::iota(perm_.begin(), perm_.end(), 0);
    z_ = detail::initial_labels(r_, fixed_);
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
    st.num_null = L_[0];
    for (std::size_t p = 0; p < comps_.size(); ++p) {
      const int k = cls(p);
      MixtureComponent c = comps_[p];
      c.weight = (counts_[p] + pseudo_[static_cast<std::size_t>(k)]) /
                 (m_[static_cast<std::size_t>(k)] + prior_.classes[static_cast<std::size_t>(k)].tau);
      st.components.push_back(c);
    }
    st.counts = counts_;
    st.labels = z_;
    if (with_assignments) {
      st.assignments.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) st.assignments[i] = st.index_of(assign_[i]);
    }
    return st;
  }

  void check() const {
    std::vector<int> recount(comps_.size(), 0);
    std::array<int, 2> m{0, 0};
    for (std::size_t i = 0; i < n_; ++i) {
      if (cls(static_cast<std::size_t>(assign_[i])) != z_[i]) {
        throw InvalidStateError("feature " + std::to_string(i) + " has a label inconsistent with its component");
      }
      if (fixed_[i] && z_[i] != 1) throw InvalidStateError("sure-selected feature " + std::to_string(i) + " lost its label");
      ++recount[static_cast<std::size_t>(assign_[i])];
      ++m[z_[i]];
    }
    if (recount != counts_) throw InvalidStateError("component counts disagree with assignments");
    if (m != m_) throw InvalidStateError("class counts disagree with labels");
    for (std::size_t p = 1; p < comps_.size(); ++p) {
      if (!(comps_[p - 1].mean < comps_[p].mean)) {
        throw InvalidStateError("order restriction violated at sweep " + std::to_string(iteration_));
      }
    }
  }

 private:
  int cls(std::size_t p) const { return static_cast<int>(p) < L_[0] ? 0 : 1; }

  void refresh(std::size_t p) {
    log_norm_[p] = -kLogSqrt2Pi - 0.5 * std::log(comps_[p].variance);
    inv_var_[p] = 1.0 / comps_[p].variance;
  }

  void initialize() {
    std::size_t p = 0;
    for (int k = 0; k < 2; ++k) {
      const ClassPrior& pr = prior_.classes[static_cast<std::size_t>(k)];
      std::vector<double> members;
      for (std::size_t i = 0; i < n_; ++i) {
        if (z_[i] == k) members.push_back(r_[i]);
      }
      double var = pr.beta / (pr.alpha + 1.0);
      if (members.size() > 1) {
        const double mean = std::accumulate(members.begin(), members.end(), 0.0) / static_cast<double>(members.size());
        double ss = 0.0;
        for (double x : members) ss += (x - mean) * (x - mean);
        if (ss > 1e-8) var = ss / static_cast<double>(members.size() - 1);
      }
      const int L = L_[static_cast<std::size_t>(k)];
      for (int j = 0; j < L; ++j, ++p) {
        const double q = (j + 0.5) / L;
        comps_[p].mean = members.empty() ? pr.gamma + std::sqrt(pr.xi2) * (q - 0.5)
                                         : detail::quantile(members, q);
        comps_[p].variance = var;
      }
    }
    for (p = 1; p < comps_.size(); ++p) {
      if (!(comps_[p - 1].mean < comps_[p].mean)) {
        comps_[p].mean = comps_[p - 1].mean + 1e-6 * (1.0 + std::abs(comps_[p - 1].mean));
      }
    }
    for (p = 0; p < comps_.size(); ++p) refresh(p);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t first = z_[i] ? static_cast<std::size_t>(L_[0]) : 0;
      const std::size_t last = z_[i] ? comps_.size() : static_cast<std::size_t>(L_[0]);
      std::size_t best = first;
      for (std::size_t q = first; q < last; ++q) {
        if (std::abs(r_[i] - comps_[q].mean) < std::abs(r_[i] - comps_[best].mean)) best = q;
      }
      assign_[i] = static_cast<int>(best);
      ++counts_[best];
      ++m_[z_[i]];
    }
  }

  double update_feature(std::size_t i, bool track) {
    const double x = r_[i];
    --counts_[static_cast<std::size_t>(assign_[i])];
    --m_[z_[i]];
    const auto e = energies_(static_cast<int>(i), z_);
    std::array<double, 2> base{};
    for (int k = 0; k < 2; ++k) {
      base[static_cast<std::size_t>(k)] =
          e[static_cast<std::size_t>(k)] - std::log(prior_.classes[static_cast<std::size_t>(k)].tau + m_[static_cast<std::size_t>(k)]);
    }
    const std::size_t first = fixed_[i] ? static_cast<std::size_t>(L_[0]) : 0;
    weights_.assign(comps_.size() - first, 0.0);
    for (std::size_t p = first; p < comps_.size(); ++p) {
      const int k = cls(p);
      const double d = x - comps_[p].mean;
      weights_[p - first] = std::log(counts_[p] + pseudo_[static_cast<std::size_t>(k)]) + log_norm_[p] -
                            0.5 * d * d * inv_var_[p] + base[static_cast<std::size_t>(k)];
    }
    const double top = *std::max_element(weights_.begin(), weights_.end());
    if (!std::isfinite(top)) {
      std::ostringstream msg;
      msg << "non-finite assignment weights at sweep " << iteration_ << ", feature " << i << " (r = " << x << ")";
      throw NumericalError(msg.str());
    }
    normalize_log_weights(weights_);
    const std::size_t p = first + detail::sample_categorical(rng_, weights_);
    const int k = cls(p);

    double pl = 0.0;
    if (track && !fixed_[i]) {
      double pk = 0.0;
      for (std::size_t q = 0; q < weights_.size(); ++q) {
        if (cls(q + first) == k) pk += weights_[q];
      }
      pl = std::log(pk);
    }
    assign_[i] = static_cast<int>(p);
    ++counts_[p];
    ++m_[static_cast<std::size_t>(k)];
    z_[i] = static_cast<std::uint8_t>(k);
    return pl;
  }

  void update_params() {
    std::fill(sum_.begin(), sum_.end(), 0.0);
    std::fill(ss_.begin(), ss_.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto p = static_cast<std::size_t>(assign_[i]);
      const double d = r_[i] - comps_[p].mean;
      sum_[p] += r_[i];
      ss_[p] += d * d;
    }
    for (std::size_t p = 0; p < comps_.size(); ++p) {
      const double lo = p > 0 ? comps_[p - 1].mean : -kInf;
      const double hi = p + 1 < comps_.size() ? comps_[p + 1].mean : kInf;
      detail::update_component(rng_, comps_[p], static_cast<std::size_t>(counts_[p]), sum_[p], ss_[p],
                               prior_.classes[static_cast<std::size_t>(cls(p))], lo, hi);
      refresh(p);
    }
  }

  std::span<const double> r_;
  std::size_t n_;
  BasePrior prior_;
  std::array<int, 2> L_;
  std::array<double, 2> pseudo_{};
  std::vector<std::uint8_t> fixed_;
  Rng rng_;
  detail::IsingEnergies energies_;
  std::vector<MixtureComponent> comps_;
  std::vector<double> log_norm_;
  std::vector<double> inv_var_;
  std::vector<int> counts_;
  std::vector<double> sum_;
  std::vector<double> ss_;
  std::array<int, 2> m_{0, 0};
  std::vector<int> assign_;
  std::vector<std::uint8_t> z_;
  std::vector<int> perm_;
  std::vector<double> weights_;
  long iteration_ = 0;
};

}  // namespace

PosteriorDraws net_dpm2_run(const StatisticsVector& r, const FeatureNetwork& net, const BasePrior& prior,
                            const IsingPriorConfig& ising, int L0, int L1, const SamplerConfig& cfg,
                            std::span<const std::uint8_t> fixed) {
  if (L0 < 1 || L1 < 1) throw DomainError("NET-DPM-2 needs at least one component per class");
  cfg.validate();
  prior.validate();
  ising.validate();
  detail::check_chain_inputs(r, net, fixed);
  FiniteChain chain(r.values, net, prior, ising, L0, L1, fixed, cfg);
  return detail::run_chain(chain, cfg, r.size());
}

}  // namespace netdpm
