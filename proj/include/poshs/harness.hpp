#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poshs/agent.hpp"
#include "poshs/env.hpp"
#include "poshs/occupant.hpp"
#include "poshs/preference.hpp"

namespace poshs {

struct OccupantSpec {
  std::string id;
  std::array<double, kActivityCount> met_indices{};
};

/// The five metabolic index sets H_a..H_e, in pool-growth order.
std::vector<OccupantSpec> default_occupants();

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  EnvConfig env;
  ComfortParams comfort;
  HumanLearning human;
  std::vector<OccupantSpec> occupants = default_occupants();

  int n_models = 2;
  double pmv_band = 0.25;
  ProfileVariant variant = ProfileVariant::Activity12d;
  int pretrain_episodes = 350;
  int train_episodes = 150;
  int test_episodes = 50;

  /// Defaults to the variant's threshold when unset.
  std::optional<double> tau;
  double amplification = 1.0;
  double merge_weight = kMovingAverageWeight;
  double sigma_floor = kSigmaFloor;
  double likelihood_floor = kLikelihoodFloor;
  PolicyConfig policy;
  bool hold_manual_changes = true;

  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string output_dir = "out";

  void validate() const;
  double effective_tau() const;
  AgentConfig agent_config() const;
  std::vector<OccupantSpec> active_occupants() const;
};

/// Belief-trajectory threshold used for convergence timing.
inline constexpr double kBeliefConvergence = 0.9;

/// One row of the per-episode CSV.
struct EpisodeRecord {
  std::uint64_t seed = 0;
  std::string phase;  // "train", "test", or "unassisted"
  int episode = 0;
  int n_models = 0;
  std::string occupant;
  std::string predicted;  // pooled label, or "new"
  bool is_new = false;
  bool correct = false;
  double reward = 0.0;
  double th_steps = 0.0;  // TH-changing occupant actions per activity segment
  int steps = 0;
  int belief_steps = -1;  // occupant steps until the true belief reaches 0.9; -1 if never
  std::size_t pool_size = 0;
};

struct ModelScore {
  std::string id;
  double accuracy = 0.0;
  double f1 = 0.0;
};

/// Per-row accuracy (diagonal / row sum) and one-vs-rest F1. Rows are true
/// models; columns are predicted models, optionally followed by one extra
/// "unidentified" column.
std::vector<ModelScore> score(const std::vector<std::vector<int>>& confusion,
                              const std::vector<std::string>& labels = {});

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};

Summary summarize(const std::vector<double>& values);

struct RunReport {
  std::string experiment_id;
  int n_models = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> confusion;
  std::vector<ModelScore> scores;
  double mean_accuracy = 0.0;
  double mean_f1 = 0.0;
  std::vector<double> seed_accuracy;
  /// Fraction of correct identifications per training episode, over seeds.
  std::vector<double> training_accuracy;
  /// Mean true-occupant belief per occupant step across test episodes.
  std::vector<double> mean_belief_curve;
  Summary belief_steps;

  Summary reward_poshs;
  Summary reward_unassisted;
  Summary th_steps_poshs;
  Summary th_steps_unassisted;
  std::optional<Summary> reward_baseline;
  std::optional<Summary> th_steps_baseline;

  std::vector<EpisodeRecord> episodes;
  std::vector<EpisodeLog> test_logs;
};

struct RunOptions {
  /// Also run every test episode without the smart-home system.
  bool unassisted = false;
  /// Keep the full test-episode logs in the report.
  bool keep_logs = false;
};

/// The smart-home system after some episodes, with the true occupant behind
/// every pool entry (for scoring only; the agent never sees these).
struct TrainedSystem {
  PoshsAgent agent;
  std::vector<std::string> labels;
};

/// Everything one seed contributes to a report.
struct SeedResult {
  std::vector<EpisodeRecord> records;
  /// True-occupant belief mass per step, one row per test episode.
  std::vector<std::vector<double>> belief_curves;
  std::vector<EpisodeLog> logs;
};

/// Trains a fresh system with a randomly drawn occupant per episode.
TrainedSystem train_system(const ExperimentConfig& config, const std::vector<HumanModel>& models,
                           std::uint64_t seed, SeedResult* result = nullptr, bool keep_logs = false);

/// Test episodes with the occupants taking turns. The system keeps learning.
SeedResult evaluate_system(const ExperimentConfig& config, const std::vector<HumanModel>& models,
                           TrainedSystem& system, std::uint64_t seed, const RunOptions& options = {});

/// Confusion matrix, scores and summaries rebuilt from per-seed results.
RunReport assemble_report(const ExperimentConfig& config, const std::vector<SeedResult>& seeds);

/// pretrain_occupants, train_system and evaluate_system for every seed.
RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Identification accuracy / F1 and belief convergence.
RunReport run_experiment_a(const ExperimentConfig& config);

/// Occupant reward and TH-setting effort with and without the smart-home
/// system. Baseline rows (same CSV schema) are folded in when a path is given;
/// a missing file is an error.
RunReport run_experiment_b(const ExperimentConfig& config,
                           const std::optional<std::string>& baseline_csv = std::nullopt);

/// Folds the test rows of a baseline episode CSV into the report.
void add_baseline(RunReport& report, const ExperimentConfig& config, const std::string& baseline_csv);

/// Steps until the belief mass on entries labelled `truth` first reaches the
/// threshold, or -1.
int belief_steps_to(const EpisodeLog& log, const std::vector<std::string>& entry_labels,
                    const std::string& truth, double threshold = kBeliefConvergence);

/// Pre-trained occupants for one seed, one per active metabolic set.
std::vector<HumanModel> pretrain_occupants(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace poshs
