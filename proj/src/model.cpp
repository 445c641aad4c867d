#include "netdpm/model.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "netdpm/error.hpp"

namespace netdpm {

void StatisticsVector::validate() const {
  if (values.empty()) throw DomainError("statistics vector is empty");
  if (values.size() != feature_ids.size()) {
    throw InvalidStateError("statistics vector has " + std::to_string(values.size()) +
                            " values but " + std::to_string(feature_ids.size()) + " ids");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DomainError("statistic for feature '" + feature_ids[i] + "' is not finite");
    }
    if (!seen.insert(feature_ids[i]).second) {
      throw DomainError("duplicate feature id '" + feature_ids[i] + "'");
    }
  }
}

StatisticsVector StatisticsVector::from_values(std::vector<double> values) {
  StatisticsVector out;
  out.feature_ids.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.feature_ids.push_back("f" + std::to_string(i + 1));
  out.values = std::move(values);
  return out;
}

void MixtureState::validate() const {
  const int total = static_cast<int>(components.size());
  if (num_null < 0 || num_null > total) throw InvalidStateError("num_null out of range");
  for (int s = 0; s < total; ++s) {
    const auto& c = components[static_cast<std::size_t>(s)];
    if (!(c.variance > 0.0) || !std::isfinite(c.variance)) {
      throw InvalidStateError("component " + std::to_string(index_of(s)) +
                              " has nonpositive variance");
    }
    if (s > 0 && !(components[static_cast<std::size_t>(s - 1)].mean < c.mean)) {
      std::ostringstream msg;
      msg << "order restriction violated between components " << index_of(s - 1) << " and "
          << index_of(s) << " (means " << components[static_cast<std::size_t>(s - 1)].mean
          << ", " << c.mean << ")";
      throw InvalidStateError(msg.str());
    }
  }
  if (!assignments.empty()) {
    if (assignments.size() != labels.size()) {
      throw InvalidStateError("assignments and labels differ in length");
    }
    std::vector<int> recount(components.size(), 0);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      const int g = assignments[i];
      const int slot = slot_of(g);
      if (slot < 0 || slot >= total) {
        throw InvalidStateError("feature " + std::to_string(i) + " assigned to unknown component " +
                                std::to_string(g));
      }
      if ((g > 0) != (labels[i] != 0)) {
        throw InvalidStateError("feature " + std::to_string(i) +
                                " has a label inconsistent with its component");
      }
      ++recount[static_cast<std::size_t>(slot)];
    }
    if (!counts.empty() && recount != counts) {
      throw InvalidStateError("component counts disagree with assignments");
    }
  }
}

void ClassPrior::validate() const {
  if (!(xi2 > 0.0 && alpha > 0.0 && beta > 0.0 && tau > 0.0) || !std::isfinite(gamma)) {
    std::ostringstream msg;
    msg << "invalid base prior (gamma=" << gamma << ", xi2=" << xi2 << ", alpha=" << alpha
        << ", beta=" << beta << ", tau=" << tau << ")";
    throw DomainError(msg.str());
  }
}

void BasePrior::validate() const {
  for (const auto& c : classes) c.validate();
}

void IsingPriorConfig::validate() const {
  if (!(pi0 > 0.0 && pi0 < 1.0)) throw DomainError("pi0 must lie in (0,1)");
  if (!(rho[0] >= 0.0 && rho[1] >= 0.0)) throw DomainError("smoothness parameters must be >= 0");
}

}  // namespace netdpm
