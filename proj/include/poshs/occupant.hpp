#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "poshs/env.hpp"
#include "poshs/qtable.hpp"

namespace poshs {

/// Still-air indoor assumptions used for every occupant. Mean radiant
/// temperature always equals air temperature.
struct ComfortParams {
  double clo = 0.5;
  double air_speed = 0.1;  // m/s
  /// Relative humidity the occupants accept (%RH, inclusive). PMV barely
  /// reacts to humidity, so without this range nobody ever adjusts it.
  double humidity_min = 45.0;
  double humidity_max = 45.0;
  /// Standard deviation of the occupant's per-step thermal sensation around
  /// PMV (PMV units). Only affects episodes, not pre-training.
  double sensation_noise = 0.03;
};

inline constexpr double kMetUnit = 58.15;  // W/m^2 per met

/// Fanger's predicted mean vote (ISO 7730 iteration for clothing surface
/// temperature), with no external work.
double pmv(double temp, double humidity, double met_index, const ComfortParams& params = {});

/// Tabular Q-learning settings for occupant pre-training.
struct HumanLearning {
  double alpha = 0.5;
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// In-band Continue steps before the occupant leaves an activity.
  int dwell_steps = 10;
  /// Place TH at a fresh grid state at the start of every activity while
  /// pre-training, so later activities see far-from-band states too.
  bool exploring_starts = true;
  /// Sweeps over every transition seen so far after each episode.
  int planning_sweeps = 1;
};

using HumanQTable = QTable<kHumanActionCount>;

/// A simulated occupant: three activity metabolic indices, a PMV half-width
/// defining its comfort band, and a learned Q-table over occupant actions.
class HumanModel {
 public:
  HumanModel(std::string id, std::array<double, kActivityCount> met_indices, double pmv_band,
             const ThermalGrid& grid, ComfortParams params = {});

  const std::string& id() const { return id_; }
  const std::array<double, kActivityCount>& met_indices() const { return met_; }
  double pmv_band() const { return pmv_band_; }
  const ThermalGrid& grid() const { return grid_; }
  const ComfortParams& comfort_params() const { return params_; }

  double pmv_at(const ThermalObservation& obs) const;
  bool comfortable(const ThermalObservation& obs) const;
  bool humidity_ok(const ThermalObservation& obs) const;

  HumanQTable& q_table() { return q_; }
  const HumanQTable& q_table() const { return q_; }

  double epsilon = 0.0;
  int pretrained_episodes = 0;

 private:
  std::size_t cell(int activity, int ti, int hi) const;

  std::string id_;
  std::array<double, kActivityCount> met_;
  double pmv_band_;
  ThermalGrid grid_;
  ComfortParams params_;
  std::vector<double> pmv_cache_;
  HumanQTable q_;
};

/// Occupant reward for taking `action` in `obs`: -0.1 for any TH change,
/// +1 for a non-changing step inside the comfort band, 0 otherwise.
double comfort_reward(const ThermalObservation& obs, HumanAction action, const HumanModel& model);

/// Greedy occupant decision. Inside the band the occupant continues until it
/// has dwelt `dwell_steps` steps, then leaves; outside it follows its Q-table.
HumanAction act(const HumanModel& model, const ThermalObservation& obs, int dwell,
                int dwell_steps = HumanLearning{}.dwell_steps);

/// Stateful occupant for one episode: tracks the dwell count and draws the
/// occupant's noisy sensation each step. Feeling comfortable means Continue
/// (or Leave once dwelt); feeling off while actually inside the band means
/// nudging temperature toward neutral; outside the band the Q-table decides.
class OccupantPolicy {
 public:
  explicit OccupantPolicy(const HumanModel& model, std::uint64_t seed = 0,
                          int dwell_steps = HumanLearning{}.dwell_steps);

  void begin_episode() { dwell_ = 0; activity_ = -1; }
  HumanAction act(const ThermalObservation& obs);
  /// Feeds back the action the environment actually executed.
  void observe_executed(const ThermalObservation& before, HumanAction executed);

  const HumanModel& model() const { return *model_; }

 private:
  const HumanModel* model_;
  int dwell_steps_;
  int dwell_ = 0;
  int activity_ = -1;
  std::mt19937_64 rng_;
};

/// Tabular Q-learning of the occupant alone in the home for `episodes`
/// episodes. Returns the trained copy.
HumanModel pretrain(HumanModel model, int episodes, const EnvConfig& env_config,
                    std::uint64_t seed, const HumanLearning& learning = {});

/// Thermal states (per activity) inside the comfort band, by exhaustive scan.
std::vector<ThermalObservation> comfort_states(const HumanModel& model, int activity);

}  // namespace poshs
