#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "poshs/env.hpp"

namespace poshs {

inline constexpr double kSigmaFloor = 0.1;

enum class Channel : int { Temperature = 0, Humidity = 1 };
inline constexpr int kChannelCount = 2;

std::string_view to_string(Channel c);

/// Activity-resolved (3 activities x 2 channels x {mu, sigma}) or pooled
/// per-episode (1 x 2 x {mu, sigma}) preference encoding.
enum class ProfileVariant { Activity12d, Episode4d };

std::string_view to_string(ProfileVariant v);
ProfileVariant profile_variant_from_string(std::string_view s);

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

double gaussian_pdf(const GaussianParams& params, double value);

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VariantMismatchError : public std::invalid_argument {
 public:
  VariantMismatchError() : std::invalid_argument("preference profile variants differ") {}
};

/// Independent Gaussians over temperature and humidity. The 12d variant keeps
/// one pair per activity; the 4d variant stores a single pair in slot 0 and
/// answers it for every activity.
class PreferenceProfile {
 public:
  using Slots = std::array<std::array<GaussianParams, kChannelCount>, kActivityCount>;

  PreferenceProfile() = default;
  PreferenceProfile(ProfileVariant variant, const Slots& slots);

  ProfileVariant variant() const { return variant_; }
  /// Number of activity slots in use: 3 for 12d, 1 for 4d.
  int slot_count() const { return variant_ == ProfileVariant::Activity12d ? kActivityCount : 1; }
  /// Parameter count of the encoded vector (12 or 4).
  int dimension() const { return slot_count() * kChannelCount * 2; }

  const GaussianParams& at(int activity, Channel channel) const;
  const GaussianParams& slot(int slot, Channel channel) const;
  GaussianParams& slot(int slot, Channel channel);

  friend bool operator==(const PreferenceProfile&, const PreferenceProfile&) = default;

 private:
  ProfileVariant variant_ = ProfileVariant::Activity12d;
  Slots slots_{};
};

/// Streaming per-activity, per-channel moment accumulator over valid samples.
/// Sums are taken about the first sample seen in each cell to avoid
/// cancellation in the variance.
class EpisodeEstimator {
 public:
  void accumulate(const ThermalObservation& obs, HumanAction human_action);
  void add_sample(int activity, Channel channel, double value);

  long count(int activity, Channel channel) const { return cell(activity, channel).count; }
  long total_count() const;

  PreferenceProfile finalize(ProfileVariant variant, double sigma_floor = kSigmaFloor) const;

 private:
  struct Cell {
    long count = 0;
    double shift = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const Cell& cell(int activity, Channel channel) const;
  Cell& cell(int activity, Channel channel);

  std::array<std::array<Cell, kChannelCount>, kActivityCount> cells_{};
};

/// Moving-average pool update: every parameter becomes
/// (1 - m) * episode + m * pool.
PreferenceProfile merge(const PreferenceProfile& pool_profile,
                        const PreferenceProfile& episode_profile, double m);

}  // namespace poshs
