#pragma once

#include <span>
#include <vector>

#include "netdpm/model.hpp"

namespace netdpm {

inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

double log_normal_pdf(double x, double mean, double variance);
double normal_pdf(double x, double mean, double variance);

// log(sum(exp(values))); -inf for an empty range.
double log_sum_exp(std::span<const double> values);

// Converts log-weights in place to probabilities (max-subtracted).
void normalize_log_weights(std::span<double> log_weights);

/// r_i = -Phi^{-1}(p_i). Throws DomainError naming the first p outside (0,1).
StatisticsVector transform_pvalues(std::span<const double> p,
                                   std::vector<std::string> feature_ids = {});

/// Mixture density sum_g q_g N(r; mu_g, sigma2_g). Weights must sum to one.
double class_density(double r, std::span<const MixtureComponent> comps);
double log_class_density(double r, std::span<const MixtureComponent> comps);

/// p0 f_0(r) + (1 - p0) f_1(r) over the two classes of an ordered state.
double marginal_density(double r, const MixtureState& state, double p0);

// Full conditional of a component mean given its variance and member data.
NormalParams conjugate_mean_update(std::span<const double> data, double variance,
                                   const ClassPrior& prior);
NormalParams conjugate_mean_update(std::size_t n, double sum, double variance,
                                   const ClassPrior& prior);

// Full conditional of a component variance given its mean and member data.
InverseGammaParams conjugate_variance_update(std::span<const double> data, double mean,
                                             const ClassPrior& prior);
InverseGammaParams conjugate_variance_update(std::size_t n, double sum, double sum_sq,
                                             double mean, const ClassPrior& prior);

}  // namespace netdpm
