#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace poshs {

inline constexpr int kActivityCount = 3;

/// Discretised temperature / humidity lattice shared by the environment,
/// the occupants, and the divergence evaluation grid.
struct ThermalGrid {
  double temp_min = 15.0;
  double temp_max = 30.0;
  double temp_step = 0.5;
  double hum_min = 20.0;
  double hum_max = 70.0;
  double hum_step = 5.0;

  /// Throws std::invalid_argument unless both axes divide exactly and carry
  /// at least ten points.
  void validate() const;

  int temp_points() const;
  int hum_points() const;

  double temperature(int index) const { return temp_min + index * temp_step; }
  double humidity(int index) const { return hum_min + index * hum_step; }

  /// Nearest lattice index, clamped into range.
  int temp_index(double temp) const;
  int hum_index(double humidity) const;
};

struct Activity {
  int id = 0;
  std::string_view name;
};

Activity activity(int id);

struct ThermalObservation {
  int activity = 0;
  double temp = 0.0;
  double humidity = 0.0;

  friend bool operator==(const ThermalObservation&, const ThermalObservation&) = default;
};

/// Smart-home actuator commands. NoOp sits at index 0 so that argmax ties on
/// unseen observations resolve to doing nothing.
enum class ShsAction : std::uint8_t { NoOp = 0, IncT, DecT, IncH, DecH };
inline constexpr int kShsActionCount = 5;

enum class HumanAction : std::uint8_t { IncT = 0, DecT, IncH, DecH, Continue, Leave };
inline constexpr int kHumanActionCount = 6;

std::string_view to_string(ShsAction a);
std::string_view to_string(HumanAction a);
ShsAction shs_action_from_string(std::string_view s);
HumanAction human_action_from_string(std::string_view s);

/// True for the occupant actions that leave the thermal state untouched.
bool is_valid_sample(HumanAction action);
bool changes_th(HumanAction action);

struct EnvConfig {
  ThermalGrid grid;
  int max_steps_per_activity = 40;

  void validate() const;
};

class UnknownOccupantError : public std::invalid_argument {
 public:
  explicit UnknownOccupantError(const std::string& id)
      : std::invalid_argument("unknown occupant id: " + id) {}
};

/// Deterministic smart-home simulation. Holds the thermal state, the current
/// activity, and a per-segment step budget; the occupant identity is hidden
/// state that only the simulation knows.
class SmartHome {
 public:
  explicit SmartHome(EnvConfig config);

  void register_occupant(const std::string& id);
  bool has_occupant(const std::string& id) const;

  ThermalObservation reset(std::uint64_t seed, const std::string& occupant_id);

  ThermalObservation apply(ShsAction action);
  /// Applies an occupant action. Once the segment budget is spent the action
  /// is replaced by Leave; last_human_action() reports what was executed.
  ThermalObservation apply(HumanAction action);
  HumanAction last_human_action() const { return last_human_; }

  /// Pins the thermal state; used for exhaustive start-state sweeps.
  void set_thermal_state(int temp_index, int hum_index);

  const ThermalObservation& observation() const { return obs_; }
  const std::string& occupant() const { return occupant_; }
  bool terminal() const { return terminal_; }
  /// Occupant actions taken in the current activity segment.
  int segment_steps() const { return segment_steps_; }
  const EnvConfig& config() const { return config_; }

 private:
  void move(int dtemp, int dhum);

  EnvConfig config_;
  std::set<std::string> occupants_;
  std::string occupant_;
  ThermalObservation obs_;
  int temp_idx_ = 0;
  int hum_idx_ = 0;
  int segment_steps_ = 0;
  bool terminal_ = true;
  HumanAction last_human_ = HumanAction::Continue;
};

}  // namespace poshs
