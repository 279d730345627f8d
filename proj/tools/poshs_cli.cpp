#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "poshs/harness.hpp"
#include "poshs/records.hpp"

namespace fs = std::filesystem;
using namespace poshs;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string experiment;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "experiment configuration (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("-s,--seeds", c.seeds, "seed list, e.g. --seeds 1 2 3 or --seeds 1,2,3")->delimiter(',');
  cmd->add_option("-o,--out", c.out, "output directory (default: the configuration's output_dir)");
  cmd->add_option("-e,--experiment", c.experiment, "experiment id (names the run directory)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig config = c.config_path.empty() ? ExperimentConfig{} : load_experiment_config(c.config_path);
  if (!c.seeds.empty()) config.seeds = c.seeds;
  if (!c.out.empty()) config.output_dir = c.out;
  if (!c.experiment.empty()) config.experiment_id = c.experiment;
  config.validate();
  return config;
}

fs::path run_dir(const ExperimentConfig& config) { return fs::path(config.output_dir) / config.experiment_id; }
fs::path seed_dir(const ExperimentConfig& config, std::uint64_t seed) {
  return run_dir(config) / ("seed-" + std::to_string(seed));
}

void save_config(const ExperimentConfig& config) {
  fs::create_directories(run_dir(config));
  std::ofstream(run_dir(config) / "config.json") << to_json(config).dump(2) << '\n';
}

std::vector<HumanModel> load_models(const ExperimentConfig& config, std::uint64_t seed) {
  std::vector<HumanModel> models;
  for (const OccupantSpec& spec : config.active_occupants()) {
    const fs::path p = seed_dir(config, seed) / "occupants" / (spec.id + ".json");
    if (!fs::exists(p)) throw ConfigError("missing occupant model " + p.string() + " (run pretrain first)");
    models.push_back(load_human_model(p));
  }
  return models;
}

void write_logs(const fs::path& path, const std::vector<EpisodeLog>& logs, int first_episode, int n_models,
                const std::string& phase) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    write_episode_log(out, logs[i], first_episode + static_cast<int>(i), n_models, phase);
  }
}

int cmd_pretrain(const Common& c) {
  const ExperimentConfig config = resolve(c);
  save_config(config);
  for (std::uint64_t seed : config.seeds) {
    const auto models = pretrain_occupants(config, seed);
    for (const HumanModel& m : models) {
      save_human_model(seed_dir(config, seed) / "occupants" / (m.id() + ".json"), m);
    }
    std::printf("seed %llu: pre-trained %zu occupants (%d episodes each)\n",
                static_cast<unsigned long long>(seed), models.size(), config.pretrain_episodes);
  }
  return 0;
}

int cmd_train(const Common& c) {
  const ExperimentConfig config = resolve(c);
  save_config(config);
  for (std::uint64_t seed : config.seeds) {
    const auto models = load_models(config, seed);
    SeedResult result;
    const TrainedSystem system = train_system(config, models, seed, &result, true);
    const fs::path dir = seed_dir(config, seed);
    save_agent_snapshot(dir / "agent.json", system.agent, system.labels);
    write_episode_csv(dir / "train.csv", result.records);
    write_logs(dir / "train.jsonl", result.logs, 0, config.n_models, "train");
    std::printf("seed %llu: trained %d episodes, pool size %zu\n", static_cast<unsigned long long>(seed),
                config.train_episodes, system.agent.pool().size());
  }
  return 0;
}

int cmd_eval(const Common& c, bool unassisted) {
  const ExperimentConfig config = resolve(c);
  save_config(config);
  for (std::uint64_t seed : config.seeds) {
    const fs::path dir = seed_dir(config, seed);
    const auto models = load_models(config, seed);
    if (!fs::exists(dir / "agent.json")) throw ConfigError("missing " + (dir / "agent.json").string() + " (run train first)");
    AgentSnapshot snap = load_agent_snapshot(dir / "agent.json");
    TrainedSystem system{std::move(snap.agent), std::move(snap.labels)};
    RunOptions options;
    options.unassisted = unassisted;
    options.keep_logs = true;
    const SeedResult result = evaluate_system(config, models, system, seed, options);
    write_episode_csv(dir / "test.csv", result.records);
    write_belief_curves(dir / "belief_curves.csv", seed, result.belief_curves);
    write_logs(dir / "test.jsonl", result.logs, 0, config.n_models, "test");
    int correct = 0;
    int total = 0;
    for (const auto& r : result.records) {
      if (r.phase != "test") continue;
      ++total;
      correct += r.correct ? 1 : 0;
    }
    std::printf("seed %llu: %d/%d test episodes identified correctly\n", static_cast<unsigned long long>(seed),
                correct, total);
  }
  return 0;
}

int cmd_report(const Common& c, const std::string& baseline_csv) {
  const ExperimentConfig config = resolve(c);
  std::vector<SeedResult> seeds;
  for (std::uint64_t seed : config.seeds) {
    const fs::path dir = seed_dir(config, seed);
    SeedResult s;
    if (fs::exists(dir / "train.csv")) s.records = read_episode_csv(dir / "train.csv");
    if (!fs::exists(dir / "test.csv")) throw ConfigError("missing " + (dir / "test.csv").string() + " (run eval first)");
    for (auto& r : read_episode_csv(dir / "test.csv")) s.records.push_back(std::move(r));
    if (fs::exists(dir / "belief_curves.csv")) s.belief_curves = read_belief_curves(dir / "belief_curves.csv");
    seeds.push_back(std::move(s));
  }
  RunReport report = assemble_report(config, seeds);
  if (!baseline_csv.empty()) add_baseline(report, config, baseline_csv);
  write_report(run_dir(config) / "report", report);

  std::printf("%s: %d models, %zu seeds\n", config.experiment_id.c_str(), config.n_models, config.seeds.size());
  for (const auto& s : report.scores) std::printf("  %-6s accuracy %.3f  F1 %.3f\n", s.id.c_str(), s.accuracy, s.f1);
  std::printf("  mean accuracy %.3f, mean F1 %.3f\n", report.mean_accuracy, report.mean_f1);
  std::printf("  steps to belief 0.9: %.2f\n", report.belief_steps.mean);
  std::printf("  reward      with system %.2f +- %.2f", report.reward_poshs.mean, report.reward_poshs.std);
  if (report.reward_unassisted.n) std::printf(", without %.2f +- %.2f", report.reward_unassisted.mean, report.reward_unassisted.std);
  if (report.reward_baseline) std::printf(", baseline %.2f", report.reward_baseline->mean);
  std::printf("\n  TH steps    with system %.2f", report.th_steps_poshs.mean);
  if (report.th_steps_unassisted.n) std::printf(", without %.2f", report.th_steps_unassisted.mean);
  if (report.th_steps_baseline) std::printf(", baseline %.2f", report.th_steps_baseline->mean);
  std::printf("\n  written to %s\n", (run_dir(config) / "report").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupant identification and thermal control for a simulated smart home"};
  app.require_subcommand(1);

  Common pre, tr, ev, rep, all;
  add_common(app.add_subcommand("pretrain", "pre-train the simulated occupants"), pre);
  add_common(app.add_subcommand("train", "train the smart-home system on pre-trained occupants"), tr);
  auto* eval = app.add_subcommand("eval", "run test episodes, with and without the system");
  add_common(eval, ev);
  bool no_unassisted = false;
  eval->add_flag("--no-unassisted", no_unassisted, "skip the episodes without the system");
  auto* report = app.add_subcommand("report", "summarise evaluated seeds");
  add_common(report, rep);
  std::string baseline_csv;
  report->add_option("--baseline-csv", baseline_csv, "per-episode CSV from an external baseline")
      ->check(CLI::ExistingFile);
  auto* run = app.add_subcommand("run", "pretrain, train, eval and report in one go");
  add_common(run, all);

  CLI11_PARSE(app, argc, argv);
  try {
    if (app.got_subcommand("pretrain")) return cmd_pretrain(pre);
    if (app.got_subcommand("train")) return cmd_train(tr);
    if (app.got_subcommand("eval")) return cmd_eval(ev, !no_unassisted);
    if (app.got_subcommand("report")) return cmd_report(rep, baseline_csv);
    if (app.got_subcommand("run")) {
      cmd_pretrain(all);
      cmd_train(all);
      cmd_eval(all, true);
      return cmd_report(all, "");
    }
  } catch (const std::exception& e) {
    std::cerr << "poshs: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
