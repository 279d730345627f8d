#pragma once

#include <array>
#include <bitset>
#include <optional>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "poshs/belief.hpp"
#include "poshs/env.hpp"
#include "poshs/identity.hpp"
#include "poshs/occupant.hpp"
#include "poshs/preference.hpp"

namespace poshs {

using ShsValues = std::array<double, kShsActionCount>;

struct PolicyConfig {
  double alpha = 0.05;
  double gamma = 0.98;
  double epsilon_start = 1.0;
  double epsilon_min = 0.005;
  /// Multiplicative decay applied after every episode.
  double epsilon_decay = 0.97;

  void validate() const;
};

/// One smart-home decision: the observation it acted on (after the
/// occupant's move), its action, the occupant's next response, and the
/// belief held when acting.
struct Transition {
  ThermalObservation obs;
  HumanAction human_action = HumanAction::Continue;  // occupant move that produced `obs`
  ShsAction action = ShsAction::NoOp;
  ThermalObservation next;
  double reward = 0.0;
  std::vector<double> belief;
  bool valid_sample = false;
  bool terminal = false;
};

/// Belief-weighted action values: sum_H b(H) Q_H(o, a).
ShsValues q_net(ObservationKey key, const BeliefVector& belief,
                std::span<const ShsQTable* const> tables);
ShsValues q_net(const ThermalGrid& grid, const ThermalObservation& obs, const BeliefVector& belief,
                const OccupantPool& pool);

/// Epsilon-greedy choice: argmax (lowest index on ties) with probability
/// 1 - epsilon, otherwise uniform over all actions. Blocked actions are
/// excluded from both branches; NoOp can never be blocked.
using ActionMask = std::bitset<kShsActionCount>;
ShsAction select_action(const ShsValues& values, double epsilon, std::mt19937_64& rng,
                        const ActionMask& blocked = {});

/// Once the occupant changes TH by hand the system keeps still (NoOp only)
/// until the occupant leaves the activity.
class ManualHold {
 public:
  void observe(HumanAction executed);
  ActionMask blocked() const;
  bool held() const { return held_; }

 private:
  bool held_ = false;
};

/// Replays one episode's memory into every table, in episode order:
/// Q_H(o,a) <- (1 - alpha) Q_H(o,a) + alpha [r b_t(H) + gamma max_a' Q_H(o',a')].
/// Terminal transitions do not bootstrap. With `new_node` the last table is
/// cleared before the replay.
void update_q(std::span<ShsQTable* const> tables, std::span<const Transition> memory, bool new_node,
              const PolicyConfig& config, const ThermalGrid& grid);
void update_q(OccupantPool& pool, std::span<const Transition> memory, bool new_node,
              const PolicyConfig& config, const ThermalGrid& grid);

struct AgentConfig {
  PolicyConfig policy;
  ProfileVariant variant = ProfileVariant::Activity12d;
  JsdConfig jsd;
  double merge_weight = kMovingAverageWeight;
  double sigma_floor = kSigmaFloor;
  double likelihood_floor = kLikelihoodFloor;
  /// Apply ManualHold during episodes.
  bool hold_manual_changes = true;
};

/// Learning state of the smart-home system across episodes.
class PoshsAgent {
 public:
  PoshsAgent(AgentConfig config, const ThermalGrid& grid, std::uint64_t seed);

  const AgentConfig& config() const { return config_; }
  const ThermalGrid& grid() const { return grid_; }
  OccupantPool& pool() { return pool_; }
  const OccupantPool& pool() const { return pool_; }
  double epsilon() const { return epsilon_; }
  void set_epsilon(double eps) { epsilon_ = eps; }
  void decay_epsilon();
  int episodes() const { return episodes_; }
  void count_episode() { ++episodes_; }
  std::mt19937_64& rng() { return rng_; }
  const std::mt19937_64& rng() const { return rng_; }

  /// Replaces the learning state, e.g. from a snapshot.
  void restore(OccupantPool pool, double epsilon, int episodes);

 private:
  AgentConfig config_;
  ThermalGrid grid_;
  OccupantPool pool_;
  double epsilon_;
  int episodes_ = 0;
  std::mt19937_64 rng_;
};

struct EpisodeLog {
  std::string occupant;
  std::uint64_t seed = 0;
  bool assisted = true;
  std::vector<Transition> transitions;
  /// Belief after every occupant step (empty rows while the pool is empty).
  std::vector<std::vector<double>> belief_trajectory;
  PreferenceProfile profile;
  Identification identification;
  std::size_t pool_size = 0;
  double occupant_reward = 0.0;
  std::array<int, kActivityCount> th_changes{};
  int steps = 0;

  int total_th_changes() const;
};

struct EpisodeOptions {
  /// Skip pool and Q-table updates at the end of the episode.
  bool learn = true;
};

/// Runs one occupant episode with the smart-home system in the loop: the
/// occupant moves, valid samples update the belief and the episode
/// estimator, the system acts on Q_net, and at termination the occupant is
/// identified and the Q-tables are replayed.
EpisodeLog run_episode(SmartHome& env, const HumanModel& occupant, PoshsAgent& agent,
                       std::uint64_t seed, const EpisodeOptions& options = {});

/// The same episode with no smart-home system acting.
EpisodeLog run_unassisted_episode(SmartHome& env, const HumanModel& occupant, std::uint64_t seed,
                                  ProfileVariant variant = ProfileVariant::Activity12d);

}  // namespace poshs
