#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "poshs/agent.hpp"
#include "poshs/harness.hpp"
#include "poshs/occupant.hpp"
#include "poshs/preference.hpp"

// On-disk formats. Every JSON document carries "format" and "version";
// readers reject unknown formats and newer versions.
namespace poshs {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- configuration ---------------------------------------------------------

json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig experiment_config_from_json(const json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// --- preference profiles ---------------------------------------------------

/// {"occupant", "variant", "params": {"a0.temp.mu": ..., ...}} with 12 named
/// scalars for 12d and 4 ("temp.mu", ...) for 4d.
json profile_record(const PreferenceProfile& profile, const std::string& occupant);
PreferenceProfile profile_from_record(const json& j);

// --- occupant Q-tables -----------------------------------------------------

json to_json(const HumanModel& model);
HumanModel human_model_from_json(const json& j);
void save_human_model(const std::filesystem::path& path, const HumanModel& model);
HumanModel load_human_model(const std::filesystem::path& path);

// --- agent snapshot --------------------------------------------------------

/// Pool profiles, per-occupant Q-tables, exploration state, RNG state, and
/// the harness's pool labels.
void save_agent_snapshot(const std::filesystem::path& path, const PoshsAgent& agent,
                         const std::vector<std::string>& labels);
struct AgentSnapshot {
  PoshsAgent agent;
  std::vector<std::string> labels;
};
AgentSnapshot load_agent_snapshot(const std::filesystem::path& path);

// --- episode traces (JSON lines) -------------------------------------------

/// One "episode" header line followed by one "step" line per transition.
void write_episode_log(std::ostream& out, const EpisodeLog& log, int episode, int n_models,
                       const std::string& phase);
std::vector<EpisodeLog> read_episode_logs(std::istream& in);

// --- per-episode CSV -------------------------------------------------------

std::string episode_csv_header();
void write_episode_csv(const std::filesystem::path& path, const std::vector<EpisodeRecord>& rows);
std::vector<EpisodeRecord> read_episode_csv(const std::filesystem::path& path);

/// seed,episode,step,belief rows; one curve per (seed, episode).
void write_belief_curves(const std::filesystem::path& path, std::uint64_t seed,
                         const std::vector<std::vector<double>>& curves);
std::vector<std::vector<double>> read_belief_curves(const std::filesystem::path& path);

// --- reports ---------------------------------------------------------------

json to_json(const RunReport& report);
/// Writes summary.json, episodes.csv, training_accuracy.csv and
/// belief_curve.csv into `dir`.
void write_report(const std::filesystem::path& dir, const RunReport& report);

}  // namespace poshs
