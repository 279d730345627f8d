#include "poshs/preference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace poshs {

std::string_view to_string(Channel c) { return c == Channel::Temperature ? "temp" : "hum"; }

std::string_view to_string(ProfileVariant v) {
  return v == ProfileVariant::Activity12d ? "12d" : "4d";
}

ProfileVariant profile_variant_from_string(std::string_view s) {
  if (s == "12d") return ProfileVariant::Activity12d;
  if (s == "4d") return ProfileVariant::Episode4d;
  throw std::invalid_argument("unknown profile variant: " + std::string(s));
}

double gaussian_pdf(const GaussianParams& params, double value) {
  const double z = (value - params.mu) / params.sigma;
  return std::exp(-0.5 * z * z) / (params.sigma * std::sqrt(2.0 * std::numbers::pi));
}

PreferenceProfile::PreferenceProfile(ProfileVariant variant, const Slots& slots)
    : variant_(variant), slots_(slots) {}

const GaussianParams& PreferenceProfile::at(int activity, Channel channel) const {
  if (activity < 0 || activity >= kActivityCount) throw std::out_of_range("activity out of range");
  return slot(variant_ == ProfileVariant::Activity12d ? activity : 0, channel);
}

const GaussianParams& PreferenceProfile::slot(int s, Channel channel) const {
  return slots_.at(static_cast<std::size_t>(s))[static_cast<std::size_t>(channel)];
}

GaussianParams& PreferenceProfile::slot(int s, Channel channel) {
  return slots_.at(static_cast<std::size_t>(s))[static_cast<std::size_t>(channel)];
}

const EpisodeEstimator::Cell& EpisodeEstimator::cell(int activity, Channel channel) const {
  return cells_.at(static_cast<std::size_t>(activity))[static_cast<std::size_t>(channel)];
}

EpisodeEstimator::Cell& EpisodeEstimator::cell(int activity, Channel channel) {
  return cells_.at(static_cast<std::size_t>(activity))[static_cast<std::size_t>(channel)];
}

void EpisodeEstimator::add_sample(int activity, Channel channel, double value) {
  Cell& c = cell(activity, channel);
  if (c.count == 0) c.shift = value;
  const double d = value - c.shift;
  ++c.count;
  c.sum += d;
  c.sum_sq += d * d;
}

void EpisodeEstimator::accumulate(const ThermalObservation& obs, HumanAction human_action) {
  if (!is_valid_sample(human_action)) return;
  add_sample(obs.activity, Channel::Temperature, obs.temp);
  add_sample(obs.activity, Channel::Humidity, obs.humidity);
}

long EpisodeEstimator::total_count() const {
  long n = 0;
  for (int a = 0; a < kActivityCount; ++a) n += count(a, Channel::Temperature);
  return n;
}

PreferenceProfile EpisodeEstimator::finalize(ProfileVariant variant, double sigma_floor) const {
  PreferenceProfile::Slots slots{};
  const auto finish = [&](long count, double mean, double var, int activity, Channel ch) {
    if (count < 1) {
      const std::string where =
          activity < 0 ? std::string("any activity") : "activity " + std::to_string(activity);
      throw EstimationError("no valid samples for " + where + " channel " +
                            std::string(to_string(ch)));
    }
    return GaussianParams{mean, std::max(std::sqrt(std::max(var, 0.0)), sigma_floor)};
  };

  for (int ch = 0; ch < kChannelCount; ++ch) {
    const auto channel = static_cast<Channel>(ch);
    if (variant == ProfileVariant::Activity12d) {
      for (int a = 0; a < kActivityCount; ++a) {
        const Cell& c = cell(a, channel);
        if (c.count < 1) finish(0, 0.0, 0.0, a, channel);
        const double n = static_cast<double>(c.count);
        const double shifted_mean = c.sum / n;
        const double var = c.sum_sq / n - shifted_mean * shifted_mean;
        slots[static_cast<std::size_t>(a)][static_cast<std::size_t>(ch)] =
            finish(c.count, c.shift + shifted_mean, var, a, channel);
      }
    } else {
      // Pool all activities about a common reference (the first cell's shift).
      long total = 0;
      double ref = 0.0;
      bool have_ref = false;
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int a = 0; a < kActivityCount; ++a) {
        const Cell& c = cell(a, channel);
        if (c.count == 0) continue;
        if (!have_ref) {
          ref = c.shift;
          have_ref = true;
        }
        const double delta = c.shift - ref;
        const double n = static_cast<double>(c.count);
        sum += c.sum + n * delta;
        sum_sq += c.sum_sq + 2.0 * delta * c.sum + n * delta * delta;
        total += c.count;
      }
      if (total < 1) finish(0, 0.0, 0.0, -1, channel);
      const double n = static_cast<double>(total);
      const double shifted_mean = sum / n;
      slots[0][static_cast<std::size_t>(ch)] =
          finish(total, ref + shifted_mean, sum_sq / n - shifted_mean * shifted_mean, 0, channel);
    }
  }
  return PreferenceProfile(variant, slots);
}

PreferenceProfile merge(const PreferenceProfile& pool_profile,
                        const PreferenceProfile& episode_profile, double m) {
  if (pool_profile.variant() != episode_profile.variant()) throw VariantMismatchError();
  if (m < 0.0 || m > 1.0) throw std::invalid_argument("merge weight must lie in [0, 1]");
  PreferenceProfile out = pool_profile;
  for (int s = 0; s < out.slot_count(); ++s) {
    for (int ch = 0; ch < kChannelCount; ++ch) {
      const auto channel = static_cast<Channel>(ch);
      const GaussianParams& p = pool_profile.slot(s, channel);
      const GaussianParams& e = episode_profile.slot(s, channel);
      out.slot(s, channel) = GaussianParams{(1.0 - m) * e.mu + m * p.mu,
                                            (1.0 - m) * e.sigma + m * p.sigma};
    }
  }
  return out;
}

}  // namespace poshs
