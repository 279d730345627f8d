#include "poshs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "poshs/records.hpp"

namespace poshs {

std::vector<OccupantSpec> default_occupants() {
  return {
      {"H_a", {1.0, 1.2, 1.4}},
      {"H_b", {1.15, 1.25, 1.45}},
      {"H_c", {1.15, 1.22, 1.35}},
      {"H_d", {1.15, 1.25, 1.4}},
      {"H_e", {1.05, 1.3, 1.45}},
  };
}

void ExperimentConfig::validate() const {
  try {
    env.validate();
    policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (n_models < 1 || static_cast<std::size_t>(n_models) > occupants.size()) {
    throw ConfigError("n_models must match the defined metabolic index sets (1.." +
                      std::to_string(occupants.size()) + ")");
  }
  if (pretrain_episodes < 1 || train_episodes < 1 || test_episodes < 1) {
    throw ConfigError("episode counts must be >= 1");
  }
  if (!(pmv_band > 0.0)) throw ConfigError("pmv_band must be positive");
  if (tau && !(*tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(sigma_floor > 0.0)) throw ConfigError("sigma_floor must be positive");
  if (merge_weight < 0.0 || merge_weight > 1.0) throw ConfigError("merge_weight must lie in [0, 1]");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
}

double ExperimentConfig::effective_tau() const {
  return tau.value_or(variant == ProfileVariant::Activity12d ? kTau12d : kTau4d);
}

AgentConfig ExperimentConfig::agent_config() const {
  AgentConfig a;
  a.policy = policy;
  a.variant = variant;
  a.jsd = JsdConfig::for_variant(variant, env.grid);
  a.jsd.tau = effective_tau();
  a.jsd.amplification = amplification;
  a.merge_weight = merge_weight;
  a.sigma_floor = sigma_floor;
  a.likelihood_floor = likelihood_floor;
  a.hold_manual_changes = hold_manual_changes;
  return a;
}

std::vector<OccupantSpec> ExperimentConfig::active_occupants() const {
  return {occupants.begin(), occupants.begin() + n_models};
}

std::vector<ModelScore> score(const std::vector<std::vector<int>>& confusion,
                              const std::vector<std::string>& labels) {
  const std::size_t n = confusion.size();
  if (n == 0) throw std::invalid_argument("confusion matrix is empty");
  for (const auto& row : confusion) {
    if (row.size() != n && row.size() != n + 1) {
      throw std::invalid_argument("confusion rows must have n or n + 1 columns");
    }
  }
  std::vector<ModelScore> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double row_sum = std::accumulate(confusion[k].begin(), confusion[k].end(), 0.0);
    if (row_sum <= 0.0) throw std::invalid_argument("confusion row " + std::to_string(k) + " is empty");
    double col_sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) col_sum += confusion[r][k];
    const double tp = confusion[k][k];
    const double recall = tp / row_sum;
    const double precision = col_sum > 0.0 ? tp / col_sum : 0.0;
    out[k].id = k < labels.size() ? labels[k] : std::to_string(k);
    out[k].accuracy = recall;
    out[k].f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return out;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

int belief_steps_to(const EpisodeLog& log, const std::vector<std::string>& entry_labels,
                    const std::string& truth, double threshold) {
  for (std::size_t t = 0; t < log.belief_trajectory.size(); ++t) {
    const auto& b = log.belief_trajectory[t];
    double mass = 0.0;
    for (std::size_t i = 0; i < b.size() && i < entry_labels.size(); ++i) {
      if (entry_labels[i] == truth) mass += b[i];
    }
    if (mass >= threshold) return static_cast<int>(t) + 1;
  }
  return -1;
}

std::vector<HumanModel> pretrain_occupants(const ExperimentConfig& config, std::uint64_t seed) {
  std::mt19937_64 gen(seed ^ 0x9E3779B97F4A7C15ull);
  std::vector<HumanModel> out;
  for (const OccupantSpec& spec : config.active_occupants()) {
    HumanModel model(spec.id, spec.met_indices, config.pmv_band, config.env.grid, config.comfort);
    out.push_back(pretrain(std::move(model), config.pretrain_episodes, config.env, gen(), config.human));
  }
  return out;
}

namespace {

std::vector<double> true_mass_curve(const EpisodeLog& log, const std::vector<std::string>& labels,
                                    const std::string& truth) {
  std::vector<double> curve;
  curve.reserve(log.belief_trajectory.size());
  for (const auto& b : log.belief_trajectory) {
    double mass = 0.0;
    for (std::size_t i = 0; i < b.size() && i < labels.size(); ++i) {
      if (labels[i] == truth) mass += b[i];
    }
    curve.push_back(mass);
  }
  return curve;
}

EpisodeRecord make_record(std::uint64_t seed, const char* phase, int episode, int n_models,
                          const EpisodeLog& log) {
  EpisodeRecord r;
  r.seed = seed;
  r.phase = phase;
  r.episode = episode;
  r.n_models = n_models;
  r.occupant = log.occupant;
  r.reward = log.occupant_reward;
  r.th_steps = static_cast<double>(log.total_th_changes()) / kActivityCount;
  r.steps = log.steps;
  r.pool_size = log.pool_size;
  return r;
}

// One learning episode with identification bookkeeping against the labels.
EpisodeRecord labelled_episode(SmartHome& env, const HumanModel& model, TrainedSystem& system,
                               std::uint64_t seed, std::uint64_t env_seed, const char* phase, int episode,
                               int n_models, EpisodeLog& log, std::vector<std::string>& labels_before) {
  labels_before = system.labels;
  log = run_episode(env, model, system.agent, env_seed);
  const Identification& id = log.identification;
  if (id.is_new) system.labels.push_back(model.id());

  EpisodeRecord r = make_record(seed, phase, episode, n_models, log);
  r.is_new = id.is_new;
  r.predicted = id.is_new ? "new" : labels_before[static_cast<std::size_t>(id.id)];
  const bool seen = std::find(labels_before.begin(), labels_before.end(), model.id()) != labels_before.end();
  r.correct = id.is_new ? !seen : r.predicted == model.id();
  r.belief_steps = belief_steps_to(log, labels_before, model.id());
  return r;
}

SmartHome make_home(const ExperimentConfig& config, const std::vector<HumanModel>& models) {
  SmartHome env(config.env);
  for (const auto& m : models) env.register_occupant(m.id());
  return env;
}

void check_models(const ExperimentConfig& config, const std::vector<HumanModel>& models) {
  if (models.size() != static_cast<std::size_t>(config.n_models)) {
    throw ConfigError("expected " + std::to_string(config.n_models) + " occupant models, got " +
                      std::to_string(models.size()));
  }
}

}  // namespace

TrainedSystem train_system(const ExperimentConfig& config, const std::vector<HumanModel>& models,
                           std::uint64_t seed, SeedResult* result, bool keep_logs) {
  check_models(config, models);
  std::mt19937_64 gen(seed);
  SmartHome env = make_home(config, models);
  TrainedSystem system{PoshsAgent(config.agent_config(), config.env.grid, gen()), {}};
  std::uniform_int_distribution<int> pick(0, config.n_models - 1);
  EpisodeLog log;
  std::vector<std::string> labels_before;
  for (int e = 0; e < config.train_episodes; ++e) {
    const HumanModel& model = models[static_cast<std::size_t>(pick(gen))];
    const std::uint64_t env_seed = gen();
    EpisodeRecord r = labelled_episode(env, model, system, seed, env_seed, "train", e, config.n_models, log,
                                       labels_before);
    if (result) {
      result->records.push_back(r);
      if (keep_logs) result->logs.push_back(std::move(log));
    }
  }
  return system;
}

SeedResult evaluate_system(const ExperimentConfig& config, const std::vector<HumanModel>& models,
                           TrainedSystem& system, std::uint64_t seed, const RunOptions& options) {
  check_models(config, models);
  std::mt19937_64 gen(seed ^ 0xD1B54A32D192ED03ull);
  SmartHome env = make_home(config, models);
  SeedResult out;
  EpisodeLog log;
  std::vector<std::string> labels_before;
  for (int e = 0; e < config.test_episodes; ++e) {
    const HumanModel& model = models[static_cast<std::size_t>(e % config.n_models)];
    const std::uint64_t env_seed = gen();
    out.records.push_back(labelled_episode(env, model, system, seed, env_seed, "test", e, config.n_models, log,
                                           labels_before));
    out.belief_curves.push_back(true_mass_curve(log, labels_before, model.id()));
    if (options.unassisted) {
      const EpisodeLog plain = run_unassisted_episode(env, model, env_seed, config.variant);
      out.records.push_back(make_record(seed, "unassisted", e, config.n_models, plain));
    }
    if (options.keep_logs) out.logs.push_back(std::move(log));
  }
  return out;
}

RunReport assemble_report(const ExperimentConfig& config, const std::vector<SeedResult>& seeds) {
  RunReport report;
  report.experiment_id = config.experiment_id;
  report.n_models = config.n_models;
  for (const auto& spec : config.active_occupants()) report.labels.push_back(spec.id);
  const auto n = static_cast<std::size_t>(config.n_models);
  report.confusion.assign(n, std::vector<int>(n + 1, 0));
  report.training_accuracy.assign(static_cast<std::size_t>(config.train_episodes), 0.0);

  const auto column_of = [&](const std::string& id) {
    for (std::size_t j = 0; j < n; ++j) {
      if (report.labels[j] == id) return j;
    }
    return n;  // "new" or an unknown label counts as unidentified
  };

  std::vector<std::vector<double>> curves;
  for (const SeedResult& s : seeds) {
    std::vector<std::vector<int>> confusion(n, std::vector<int>(n + 1, 0));
    bool any_test = false;
    for (const EpisodeRecord& r : s.records) {
      if (r.phase == "train" && r.episode >= 0 && static_cast<std::size_t>(r.episode) < report.training_accuracy.size()) {
        report.training_accuracy[static_cast<std::size_t>(r.episode)] +=
            (r.correct ? 1.0 : 0.0) / static_cast<double>(seeds.size());
      } else if (r.phase == "test") {
        const std::size_t row = column_of(r.occupant);
        if (row == n) throw ConfigError("test record for unknown occupant " + r.occupant);
        ++confusion[row][r.is_new ? n : column_of(r.predicted)];
        any_test = true;
      }
    }
    if (any_test) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double row_sum = std::accumulate(confusion[i].begin(), confusion[i].end(), 0.0);
        acc += row_sum > 0.0 ? confusion[i][i] / row_sum : 0.0;
      }
      report.seed_accuracy.push_back(acc / static_cast<double>(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) report.confusion[i][j] += confusion[i][j];
    }
    curves.insert(curves.end(), s.belief_curves.begin(), s.belief_curves.end());
    report.episodes.insert(report.episodes.end(), s.records.begin(), s.records.end());
    report.test_logs.insert(report.test_logs.end(), s.logs.begin(), s.logs.end());
  }

  std::size_t longest = 0;
  for (const auto& c : curves) longest = std::max(longest, c.size());
  report.mean_belief_curve.assign(longest, 0.0);
  for (const auto& c : curves) {
    for (std::size_t t = 0; t < longest; ++t) {
      report.mean_belief_curve[t] += (c.empty() ? 0.0 : c[std::min(t, c.size() - 1)]) / curves.size();
    }
  }

  report.scores = score(report.confusion, report.labels);
  for (const auto& s : report.scores) {
    report.mean_accuracy += s.accuracy / static_cast<double>(n);
    report.mean_f1 += s.f1 / static_cast<double>(n);
  }

  std::vector<double> r_poshs, r_plain, th_poshs, th_plain, bsteps;
  for (const auto& r : report.episodes) {
    if (r.phase == "test") {
      r_poshs.push_back(r.reward);
      th_poshs.push_back(r.th_steps);
      bsteps.push_back(r.belief_steps < 0 ? static_cast<double>(r.steps) : r.belief_steps);
    } else if (r.phase == "unassisted") {
      r_plain.push_back(r.reward);
      th_plain.push_back(r.th_steps);
    }
  }
  report.reward_poshs = summarize(r_poshs);
  report.reward_unassisted = summarize(r_plain);
  report.th_steps_poshs = summarize(th_poshs);
  report.th_steps_unassisted = summarize(th_plain);
  report.belief_steps = summarize(bsteps);
  return report;
}

RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  std::vector<SeedResult> seeds;
  for (std::uint64_t seed : config.seeds) {
    const auto models = pretrain_occupants(config, seed);
    SeedResult result;
    TrainedSystem system = train_system(config, models, seed, &result, false);
    SeedResult test = evaluate_system(config, models, system, seed, options);
    result.records.insert(result.records.end(), test.records.begin(), test.records.end());
    result.belief_curves = std::move(test.belief_curves);
    result.logs = std::move(test.logs);
    seeds.push_back(std::move(result));
  }
  return assemble_report(config, seeds);
}

RunReport run_experiment_a(const ExperimentConfig& config) { return run_experiment(config, {}); }

void add_baseline(RunReport& report, const ExperimentConfig& config, const std::string& baseline_csv) {
  if (!std::filesystem::exists(baseline_csv)) throw ConfigError("baseline episode CSV not found: " + baseline_csv);
  std::vector<double> rewards, th;
  for (const EpisodeRecord& r : read_episode_csv(baseline_csv)) {
    if (r.phase == "test" && r.n_models == config.n_models) {
      rewards.push_back(r.reward);
      th.push_back(r.th_steps);
    }
  }
  if (rewards.empty()) {
    throw ConfigError("baseline CSV has no test rows for " + std::to_string(config.n_models) + " models");
  }
  report.reward_baseline = summarize(rewards);
  report.th_steps_baseline = summarize(th);
}

RunReport run_experiment_b(const ExperimentConfig& config, const std::optional<std::string>& baseline_csv) {
  if (baseline_csv && !std::filesystem::exists(*baseline_csv)) {
    throw ConfigError("baseline episode CSV not found: " + *baseline_csv);
  }
  RunOptions options;
  options.unassisted = true;
  RunReport report = run_experiment(config, options);
  if (baseline_csv) add_baseline(report, config, *baseline_csv);
  return report;
}

}  // namespace poshs
