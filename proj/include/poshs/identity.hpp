#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "poshs/env.hpp"
#include "poshs/preference.hpp"
#include "poshs/qtable.hpp"

namespace poshs {

using ShsQTable = QTable<kShsActionCount>;

inline constexpr double kTau4d = 0.13;
inline constexpr double kTau12d = 0.20;
inline constexpr double kMovingAverageWeight = 0.5;

struct JsdConfig {
  double tau = kTau12d;
  double amplification = 1.0;
  std::array<double, 2> weights{0.5, 0.5};
  /// Discrete support; each channel is evaluated on this grid's axis.
  ThermalGrid eval_grid;

  void validate() const;
  static JsdConfig for_variant(ProfileVariant variant, const ThermalGrid& grid);
};

/// Weighted Jensen-Shannon divergence (natural log) between two discrete
/// distributions on the same support: H(sum w_i p_i) - sum w_i H(p_i).
double jensen_shannon(std::span<const double> p, std::span<const double> q,
                      std::array<double, 2> weights = {0.5, 0.5});

/// Equal-weight divergence in its relative-entropy form,
/// sqrt((sum p log(p/m) + sum q log(q/m)) / 2) with m = (p + q) / 2.
double jensen_shannon_distance(std::span<const double> p, std::span<const double> q);

/// Gaussian density sampled on `support` and normalised to unit mass. Falls
/// back to a point mass at the nearest support value if every sample
/// underflows.
std::vector<double> discretize(const GaussianParams& params, std::span<const double> support);

/// Profile divergence: per channel, sqrt of the weighted JSD of the
/// discretised Gaussians, averaged over channels and scaled by the
/// amplification factor.
double jsd(const PreferenceProfile& p, const PreferenceProfile& q, const JsdConfig& config);

struct PoolEntry {
  int id = 0;
  PreferenceProfile profile;
  ShsQTable q_table;
};

/// Registry of discovered occupants. Ids are dense and never reused.
class OccupantPool {
 public:
  int add(const PreferenceProfile& profile);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  PoolEntry& at(int id) { return entries_.at(static_cast<std::size_t>(id)); }
  const PoolEntry& at(int id) const { return entries_.at(static_cast<std::size_t>(id)); }
  std::vector<PoolEntry>& entries() { return entries_; }
  const std::vector<PoolEntry>& entries() const { return entries_; }

 private:
  std::vector<PoolEntry> entries_;
};

struct MatchResult {
  enum class Outcome { Known, New };
  Outcome outcome = Outcome::New;
  std::optional<int> id;
  double divergence = 0.0;
  std::vector<double> divergences;

  bool is_new() const { return outcome == Outcome::New; }
};

MatchResult match(const OccupantPool& pool, const PreferenceProfile& episode_profile,
                  const JsdConfig& config);

struct Identification {
  int id = 0;
  bool is_new = false;
  MatchResult match;
};

/// Closes an episode: appends a new occupant with an empty Q-table, or folds
/// the episode estimate into the closest pooled profile.
Identification end_of_episode(OccupantPool& pool, const PreferenceProfile& episode_profile,
                              const JsdConfig& config, double m = kMovingAverageWeight);

/// Pairwise divergence matrix across the pool.
std::vector<std::vector<double>> divergence_matrix(const OccupantPool& pool, const JsdConfig& config);

}  // namespace poshs
