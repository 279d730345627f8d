#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "poshs/env.hpp"
#include "poshs/preference.hpp"

namespace poshs {

inline constexpr double kLikelihoodFloor = 1e-12;

class BeliefError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability mass over the known-occupant pool. Entries are non-negative
/// and sum to one.
class BeliefVector {
 public:
  BeliefVector() = default;
  /// Normalises `weights`; throws BeliefError on negative or all-zero input.
  explicit BeliefVector(std::vector<double> weights);

  std::size_t size() const { return p_.size(); }
  bool empty() const { return p_.empty(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }
  std::size_t argmax() const;

  /// Appends a zero-mass entry for a newly pooled occupant.
  void extend_zero() { p_.push_back(0.0); }

 private:
  std::vector<double> p_;
};

/// Equal initial belief over `n` occupants.
BeliefVector init_uniform(std::size_t n);

/// P(obs | occupant) as the product of the temperature and humidity densities
/// for the observation's activity, clamped below by `floor`.
double likelihood(const PreferenceProfile& profile, const ThermalObservation& obs,
                  double floor = kLikelihoodFloor);

/// Bayes step b'_i = L_i b_i / sum_j L_j b_j.
BeliefVector update(const BeliefVector& belief, std::span<const double> likelihoods);

/// Same step with log-likelihoods, for inputs whose densities underflow.
BeliefVector update_log(const BeliefVector& belief, std::span<const double> log_likelihoods);

/// Shared-sigma posterior written with pairwise likelihood ratios:
/// P(H_i | th) = P(H_i) / sum_j C(H_j, H_i) P(H_j), with
/// C(H_j, H_i) = exp[(2 th - mu_j - mu_i)(mu_j - mu_i) / (2 sigma^2)].
BeliefVector posterior_closed_form(std::span<const double> mus, double sigma, double th,
                                   const BeliefVector& priors);

}  // namespace poshs
