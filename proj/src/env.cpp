#include "poshs/env.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace poshs {

namespace {

int axis_points(double lo, double hi, double step, const char* axis) {
  if (!(step > 0.0) || !(hi > lo)) {
    throw std::invalid_argument(std::string("degenerate grid axis: ") + axis);
  }
  const double spans = (hi - lo) / step;
  const double rounded = std::round(spans);
  if (std::abs(spans - rounded) > 1e-9) {
    throw std::invalid_argument(std::string("grid step does not divide range: ") + axis);
  }
  return static_cast<int>(rounded) + 1;
}

constexpr std::array<std::string_view, kShsActionCount> kShsNames{"NoOp", "IncT", "DecT", "IncH",
                                                                  "DecH"};
constexpr std::array<std::string_view, kHumanActionCount> kHumanNames{
    "IncT", "DecT", "IncH", "DecH", "Continue", "Leave"};
constexpr std::array<std::string_view, kActivityCount> kActivityNames{"activity-0", "activity-1",
                                                                      "activity-2"};

}  // namespace

void ThermalGrid::validate() const {
  if (temp_points() < 10 || hum_points() < 10) {
    throw std::invalid_argument("thermal grid needs at least 10 points per axis");
  }
}

int ThermalGrid::temp_points() const { return axis_points(temp_min, temp_max, temp_step, "temp"); }
int ThermalGrid::hum_points() const { return axis_points(hum_min, hum_max, hum_step, "humidity"); }

int ThermalGrid::temp_index(double temp) const {
  const int i = static_cast<int>(std::lround((temp - temp_min) / temp_step));
  return std::clamp(i, 0, temp_points() - 1);
}

int ThermalGrid::hum_index(double hum) const {
  const int i = static_cast<int>(std::lround((hum - hum_min) / hum_step));
  return std::clamp(i, 0, hum_points() - 1);
}

Activity activity(int id) {
  if (id < 0 || id >= kActivityCount) throw std::out_of_range("activity id out of range");
  return Activity{id, kActivityNames[static_cast<std::size_t>(id)]};
}

std::string_view to_string(ShsAction a) { return kShsNames[static_cast<std::size_t>(a)]; }
std::string_view to_string(HumanAction a) { return kHumanNames[static_cast<std::size_t>(a)]; }

ShsAction shs_action_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kShsNames.size(); ++i) {
    if (kShsNames[i] == s) return static_cast<ShsAction>(i);
  }
  throw std::invalid_argument("unknown smart-home action: " + std::string(s));
}

HumanAction human_action_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kHumanNames.size(); ++i) {
    if (kHumanNames[i] == s) return static_cast<HumanAction>(i);
  }
  throw std::invalid_argument("unknown occupant action: " + std::string(s));
}

bool is_valid_sample(HumanAction action) {
  return action == HumanAction::Continue || action == HumanAction::Leave;
}

bool changes_th(HumanAction action) { return !is_valid_sample(action); }

void EnvConfig::validate() const {
  grid.validate();
  if (max_steps_per_activity < 1) throw std::invalid_argument("max_steps_per_activity must be >= 1");
}

SmartHome::SmartHome(EnvConfig config) : config_(config) { config_.validate(); }

void SmartHome::register_occupant(const std::string& id) { occupants_.insert(id); }

bool SmartHome::has_occupant(const std::string& id) const { return occupants_.contains(id); }

ThermalObservation SmartHome::reset(std::uint64_t seed, const std::string& occupant_id) {
  if (!has_occupant(occupant_id)) throw UnknownOccupantError(occupant_id);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> temp_dist(0, config_.grid.temp_points() - 1);
  std::uniform_int_distribution<int> hum_dist(0, config_.grid.hum_points() - 1);
  occupant_ = occupant_id;
  temp_idx_ = temp_dist(rng);
  hum_idx_ = hum_dist(rng);
  segment_steps_ = 0;
  terminal_ = false;
  obs_ = ThermalObservation{0, config_.grid.temperature(temp_idx_), config_.grid.humidity(hum_idx_)};
  return obs_;
}

void SmartHome::set_thermal_state(int temp_index, int hum_index) {
  temp_idx_ = std::clamp(temp_index, 0, config_.grid.temp_points() - 1);
  hum_idx_ = std::clamp(hum_index, 0, config_.grid.hum_points() - 1);
  obs_.temp = config_.grid.temperature(temp_idx_);
  obs_.humidity = config_.grid.humidity(hum_idx_);
}

void SmartHome::move(int dtemp, int dhum) { set_thermal_state(temp_idx_ + dtemp, hum_idx_ + dhum); }

ThermalObservation SmartHome::apply(ShsAction action) {
  switch (action) {
    case ShsAction::IncT: move(1, 0); break;
    case ShsAction::DecT: move(-1, 0); break;
    case ShsAction::IncH: move(0, 1); break;
    case ShsAction::DecH: move(0, -1); break;
    case ShsAction::NoOp: break;
  }
  return obs_;
}

ThermalObservation SmartHome::apply(HumanAction action) {
  if (terminal_) return obs_;
  ++segment_steps_;
  if (segment_steps_ >= config_.max_steps_per_activity) action = HumanAction::Leave;
  last_human_ = action;
  switch (action) {
    case HumanAction::IncT: move(1, 0); break;
    case HumanAction::DecT: move(-1, 0); break;
    case HumanAction::IncH: move(0, 1); break;
    case HumanAction::DecH: move(0, -1); break;
    case HumanAction::Continue: break;
    case HumanAction::Leave:
      segment_steps_ = 0;
      if (obs_.activity + 1 >= kActivityCount) {
        terminal_ = true;
      } else {
        ++obs_.activity;
      }
      break;
  }
  return obs_;
}

}  // namespace poshs
