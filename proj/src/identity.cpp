#include "poshs/identity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poshs {

void JsdConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("jsd tau must be positive");
  if (!(amplification > 0.0)) throw std::invalid_argument("jsd amplification must be positive");
  if (weights[0] < 0.0 || weights[1] < 0.0 || std::abs(weights[0] + weights[1] - 1.0) > 1e-12) {
    throw std::invalid_argument("jsd weights must be non-negative and sum to 1");
  }
  eval_grid.validate();
}

JsdConfig JsdConfig::for_variant(ProfileVariant variant, const ThermalGrid& grid) {
  JsdConfig c;
  c.tau = variant == ProfileVariant::Activity12d ? kTau12d : kTau4d;
  c.eval_grid = grid;
  return c;
}

namespace {

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

std::vector<double> axis(const ThermalGrid& g, Channel c) {
  const bool temp = c == Channel::Temperature;
  const int n = temp ? g.temp_points() : g.hum_points();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = temp ? g.temperature(i) : g.humidity(i);
  return out;
}

}  // namespace

double jensen_shannon(std::span<const double> p, std::span<const double> q,
                      std::array<double, 2> weights) {
  if (p.size() != q.size()) throw std::invalid_argument("jsd support size mismatch");
  std::vector<double> mix(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) mix[i] = weights[0] * p[i] + weights[1] * q[i];
  // Clamp rounding noise; the divergence is non-negative.
  return std::max(0.0, entropy(mix) - weights[0] * entropy(p) - weights[1] * entropy(q));
}

double jensen_shannon_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("jsd support size mismatch");
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) kl_p += p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) kl_q += q[i] * std::log(q[i] / m);
  }
  return std::sqrt(std::max(0.0, (kl_p + kl_q) / 2.0));
}

std::vector<double> discretize(const GaussianParams& params, std::span<const double> support) {
  std::vector<double> out(support.size());
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    out[i] = gaussian_pdf(params, support[i]);
    total += out[i];
  }
  if (total > 0.0) {
    for (double& x : out) x /= total;
    return out;
  }
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < support.size(); ++i) {
    if (std::abs(support[i] - params.mu) < std::abs(support[nearest] - params.mu)) nearest = i;
  }
  std::fill(out.begin(), out.end(), 0.0);
  out[nearest] = 1.0;
  return out;
}

double jsd(const PreferenceProfile& p, const PreferenceProfile& q, const JsdConfig& config) {
  if (p.variant() != q.variant()) throw VariantMismatchError();
  double total = 0.0;
  int channels = 0;
  for (int ch = 0; ch < kChannelCount; ++ch) {
    const auto channel = static_cast<Channel>(ch);
    const std::vector<double> support = axis(config.eval_grid, channel);
    for (int s = 0; s < p.slot_count(); ++s) {
      const auto dp = discretize(p.slot(s, channel), support);
      const auto dq = discretize(q.slot(s, channel), support);
      total += std::sqrt(jensen_shannon(dp, dq, config.weights));
      ++channels;
    }
  }
  return config.amplification * total / channels;
}

int OccupantPool::add(const PreferenceProfile& profile) {
  const int id = static_cast<int>(entries_.size());
  entries_.push_back(PoolEntry{id, profile, ShsQTable{}});
  return id;
}

MatchResult match(const OccupantPool& pool, const PreferenceProfile& episode_profile,
                  const JsdConfig& config) {
  MatchResult result;
  if (pool.empty()) return result;
  result.divergences.reserve(pool.size());
  for (const PoolEntry& e : pool.entries()) {
    result.divergences.push_back(jsd(e.profile, episode_profile, config));
  }
  const auto best = std::min_element(result.divergences.begin(), result.divergences.end());
  result.divergence = *best;
  if (*best < config.tau) {
    result.outcome = MatchResult::Outcome::Known;
    result.id = static_cast<int>(std::distance(result.divergences.begin(), best));
  }
  return result;
}

Identification end_of_episode(OccupantPool& pool, const PreferenceProfile& episode_profile,
                              const JsdConfig& config, double m) {
  Identification out;
  out.match = match(pool, episode_profile, config);
  if (out.match.is_new()) {
    out.id = pool.add(episode_profile);
    out.is_new = true;
  } else {
    out.id = *out.match.id;
    PoolEntry& entry = pool.at(out.id);
    entry.profile = merge(entry.profile, episode_profile, m);
  }
  return out;
}

std::vector<std::vector<double>> divergence_matrix(const OccupantPool& pool, const JsdConfig& config) {
  const std::size_t n = pool.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out[i][j] = out[j][i] = jsd(pool.entries()[i].profile, pool.entries()[j].profile, config);
    }
  }
  return out;
}

}  // namespace poshs
