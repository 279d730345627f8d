#include "poshs/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace poshs {

BeliefVector::BeliefVector(std::vector<double> weights) : p_(std::move(weights)) {
  double total = 0.0;
  for (double w : p_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw BeliefError("belief weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw BeliefError("belief weights sum to zero");
  for (double& w : p_) w /= total;
}

std::size_t BeliefVector::argmax() const {
  return static_cast<std::size_t>(std::distance(p_.begin(), std::max_element(p_.begin(), p_.end())));
}

BeliefVector init_uniform(std::size_t n) {
  if (n == 0) throw BeliefError("cannot build a belief over an empty pool");
  return BeliefVector(std::vector<double>(n, 1.0));
}

double likelihood(const PreferenceProfile& profile, const ThermalObservation& obs, double floor) {
  const double lt = gaussian_pdf(profile.at(obs.activity, Channel::Temperature), obs.temp);
  const double lh = gaussian_pdf(profile.at(obs.activity, Channel::Humidity), obs.humidity);
  return std::max(lt * lh, floor);
}

BeliefVector update(const BeliefVector& belief, std::span<const double> likelihoods) {
  if (likelihoods.size() != belief.size()) throw BeliefError("belief / likelihood size mismatch");
  std::vector<double> numer(belief.size());
  for (std::size_t i = 0; i < numer.size(); ++i) numer[i] = likelihoods[i] * belief[i];
  return BeliefVector(std::move(numer));
}

BeliefVector update_log(const BeliefVector& belief, std::span<const double> log_likelihoods) {
  if (log_likelihoods.size() != belief.size()) throw BeliefError("belief / likelihood size mismatch");
  std::vector<double> logs(belief.size(), -std::numeric_limits<double>::infinity());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (belief[i] > 0.0) {
      logs[i] = log_likelihoods[i] + std::log(belief[i]);
      peak = std::max(peak, logs[i]);
    }
  }
  std::vector<double> numer(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) numer[i] = std::exp(logs[i] - peak);
  return BeliefVector(std::move(numer));
}

BeliefVector posterior_closed_form(std::span<const double> mus, double sigma, double th,
                                   const BeliefVector& priors) {
  if (!(sigma > 0.0)) throw BeliefError("shared sigma must be positive");
  if (mus.size() != priors.size()) throw BeliefError("means / prior size mismatch");
  const double two_var = 2.0 * sigma * sigma;
  std::vector<double> post(mus.size());
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (priors[i] == 0.0) {
      post[i] = 0.0;
      continue;
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < mus.size(); ++j) {
      if (priors[j] == 0.0) continue;
      const double ratio = std::exp((2.0 * th - mus[j] - mus[i]) * (mus[j] - mus[i]) / two_var);
      denom += ratio * priors[j];
    }
    post[i] = priors[i] / denom;
  }
  return BeliefVector(std::move(post));
}

}  // namespace poshs
