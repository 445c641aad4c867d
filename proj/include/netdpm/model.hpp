#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netdpm {

// Class label of a feature: 0 = unselected (null), 1 = selected.
enum class Label : std::uint8_t { kNull = 0, kSelected = 1 };

constexpr int to_index(Label k) { return static_cast<int>(k); }

/// Per-feature statistics on the normal-quantile scale.
///
/// Values must be finite and ids unique; `validate()` enforces both.
struct StatisticsVector {
  std::vector<double> values;
  std::vector<std::string> feature_ids;

  std::size_t size() const { return values.size(); }
  void validate() const;

  // Builds a vector with ids "f1".."fn"; mostly for tests and simulations.
  static StatisticsVector from_values(std::vector<double> values);
};

/// One Gaussian mixture component (mean, variance, weight).
struct MixtureComponent {
  double mean = 0.0;
  double variance = 1.0;
  double weight = 1.0;
};

/// Ordered two-class mixture: components [0, num_null) belong to class 0 and
/// carry signed indices -L0+1..0; the remaining ones are class 1 with indices
/// 1..L1. Component weights are within-class proportions q_g.
struct MixtureState {
  std::vector<MixtureComponent> components;
  int num_null = 0;                  // L0
  std::vector<int> assignments;      // g_i as a signed index; may be empty in snapshots
  std::vector<std::uint8_t> labels;  // z_i
  std::vector<int> counts;           // n_g per component, parallel to components

  int num_selected_components() const {
    return static_cast<int>(components.size()) - num_null;
  }
  std::span<const MixtureComponent> null_components() const {
    return std::span(components).first(static_cast<std::size_t>(num_null));
  }
  std::span<const MixtureComponent> selected_components() const {
    return std::span(components).subspan(static_cast<std::size_t>(num_null));
  }
  // Position in `components` of signed index g.
  int slot_of(int g) const { return g + num_null - 1; }
  int index_of(int slot) const { return slot - num_null + 1; }

  // Checks the order restriction, class/index consistency and counts.
  // Throws InvalidStateError describing the first violation.
  void validate() const;
};

/// Base measure N(gamma, xi2) x IG(alpha, beta) and DP precision tau of one class.
struct ClassPrior {
  double gamma = 0.0;
  double xi2 = 1.0;
  double alpha = 2.0;
  double beta = 1.0;
  double tau = 1.0;

  void validate() const;
};

struct BasePrior {
  std::array<ClassPrior, 2> classes{};

  const ClassPrior& operator[](Label k) const { return classes[to_index(k)]; }
  ClassPrior& operator[](Label k) { return classes[to_index(k)]; }
  void validate() const;
};

/// Sparsity and smoothness parameters of the weighted Ising prior. Per-node
/// weights live on the FeatureNetwork.
struct IsingPriorConfig {
  double pi0 = 0.8;
  std::array<double, 2> rho{0.0, 0.0};

  double pi(Label k) const { return k == Label::kNull ? pi0 : 1.0 - pi0; }
  double rho_of(Label k) const { return rho[to_index(k)]; }
  void validate() const;
};

struct NormalParams {
  double mean;
  double variance;
};

struct InverseGammaParams {
  double shape;
  double scale;
};

}  // namespace netdpm
