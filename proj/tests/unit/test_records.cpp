#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "poshs/records.hpp"

using namespace poshs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "poshs-unit-records";
  fs::create_directories(dir);
  return dir / name;
}

const HumanModel& occupant() {
  static const HumanModel m = pretrain(HumanModel("H_b", {1.15, 1.25, 1.45}, 0.25, ThermalGrid{}), 60, EnvConfig{}, 2);
  return m;
}

// A few real episodes so the snapshot and logs carry non-trivial state.
struct Played {
  PoshsAgent agent;
  std::vector<EpisodeLog> logs;
};

Played play() {
  AgentConfig cfg;
  cfg.jsd = JsdConfig::for_variant(cfg.variant, ThermalGrid{});
  Played p{PoshsAgent(cfg, ThermalGrid{}, 31), {}};
  SmartHome env(EnvConfig{});
  env.register_occupant("H_b");
  for (std::uint64_t s = 0; s < 4; ++s) p.logs.push_back(run_episode(env, occupant(), p.agent, s));
  return p;
}

}  // namespace

TEST_CASE("experiment config round-trip") {
  ExperimentConfig c;
  c.experiment_id = "rt";
  c.n_models = 4;
  c.pmv_band = 0.5;
  c.variant = ProfileVariant::Episode4d;
  c.tau = 0.11;
  c.seeds = {4, 5};
  c.comfort.sensation_noise = 0.07;
  c.hold_manual_changes = false;
  const ExperimentConfig back = experiment_config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.tau == c.tau);
  CHECK(back.comfort.sensation_noise == 0.07);
  CHECK_FALSE(back.hold_manual_changes);

  // partial documents keep defaults
  const ExperimentConfig partial = experiment_config_from_json(json{{"n_models", 3}});
  CHECK(partial.n_models == 3);
  CHECK(partial.pmv_band == ExperimentConfig{}.pmv_band);

  CHECK_THROWS(experiment_config_from_json(json{{"n_model", 3}}));
  CHECK_THROWS_AS(experiment_config_from_json(json{{"format", "agent-snapshot"}, {"version", 1}}), FormatError);

  const auto path = scratch("config.json");
  std::ofstream(path) << to_json(c).dump(2);
  CHECK(to_json(load_experiment_config(path)) == to_json(c));
}

TEST_CASE("profile record round-trip") {
  PreferenceProfile::Slots s{};
  for (int a = 0; a < kActivityCount; ++a)
    s[a] = {GaussianParams{20.5 + a, 0.3 + a}, GaussianParams{45.0 - a, 1.25}};
  const PreferenceProfile p12(ProfileVariant::Activity12d, s);
  const json r = profile_record(p12, "H_c");
  CHECK(r.at("params").size() == 12);
  CHECK(profile_from_record(r) == p12);

  const PreferenceProfile p4(ProfileVariant::Episode4d, s);
  const json r4 = profile_record(p4, "H_c");
  CHECK(r4.at("params").size() == 4);
  CHECK(profile_from_record(r4).at(2, Channel::Temperature) == p4.slot(0, Channel::Temperature));
}

TEST_CASE("occupant model round-trip") {
  const auto path = scratch("occupant.json");
  save_human_model(path, occupant());
  const HumanModel back = load_human_model(path);
  CHECK(back.id() == "H_b");
  CHECK(back.met_indices() == occupant().met_indices());
  CHECK(back.pmv_band() == occupant().pmv_band());
  CHECK(back.q_table() == occupant().q_table());
  CHECK(back.pretrained_episodes == 60);

  json bumped = to_json(occupant());
  bumped["version"] = kFormatVersion + 1;
  CHECK_THROWS_AS(human_model_from_json(bumped), FormatError);
}

TEST_CASE("agent snapshot round-trip continues identically") {
  Played p = play();
  const auto path = scratch("agent.json");
  save_agent_snapshot(path, p.agent, {"H_b"});
  AgentSnapshot snap = load_agent_snapshot(path);
  CHECK(snap.labels == std::vector<std::string>{"H_b"});
  REQUIRE(snap.agent.pool().size() == p.agent.pool().size());
  for (std::size_t i = 0; i < p.agent.pool().size(); ++i) {
    CHECK(snap.agent.pool().entries()[i].q_table == p.agent.pool().entries()[i].q_table);
    CHECK(snap.agent.pool().entries()[i].profile == p.agent.pool().entries()[i].profile);
  }
  CHECK(snap.agent.epsilon() == p.agent.epsilon());
  CHECK(snap.agent.episodes() == p.agent.episodes());

  // the restored agent and the original make the same next episode
  SmartHome env(EnvConfig{});
  env.register_occupant("H_b");
  const EpisodeLog a = run_episode(env, occupant(), p.agent, 99);
  const EpisodeLog b = run_episode(env, occupant(), snap.agent, 99);
  CHECK(a.occupant_reward == b.occupant_reward);
  REQUIRE(a.transitions.size() == b.transitions.size());
  for (std::size_t i = 0; i < a.transitions.size(); ++i) REQUIRE(a.transitions[i].action == b.transitions[i].action);
}

TEST_CASE("episode log lines round-trip") {
  const Played p = play();
  std::stringstream ss;
  for (std::size_t i = 0; i < p.logs.size(); ++i) write_episode_log(ss, p.logs[i], static_cast<int>(i), 1, "train");
  const auto back = read_episode_logs(ss);
  REQUIRE(back.size() == p.logs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const EpisodeLog &x = back[i], &y = p.logs[i];
    CHECK(x.occupant == y.occupant);
    CHECK(x.seed == y.seed);
    CHECK(x.steps == y.steps);
    CHECK(x.occupant_reward == y.occupant_reward);
    CHECK(x.th_changes == y.th_changes);
    CHECK(x.profile == y.profile);
    CHECK(x.belief_trajectory == y.belief_trajectory);
    CHECK(x.identification.id == y.identification.id);
    CHECK(x.identification.is_new == y.identification.is_new);
    REQUIRE(x.transitions.size() == y.transitions.size());
    for (std::size_t t = 0; t < x.transitions.size(); ++t) {
      REQUIRE(x.transitions[t].obs == y.transitions[t].obs);
      REQUIRE(x.transitions[t].action == y.transitions[t].action);
      REQUIRE(x.transitions[t].human_action == y.transitions[t].human_action);
      REQUIRE(x.transitions[t].reward == y.transitions[t].reward);
      REQUIRE(x.transitions[t].belief == y.transitions[t].belief);
      REQUIRE(x.transitions[t].terminal == y.transitions[t].terminal);
    }
  }

  std::stringstream truncated;
  write_episode_log(truncated, p.logs[1], 0, 1, "train");
  std::string text = truncated.str();
  text = text.substr(0, text.rfind('\n', text.size() - 2) + 1);  // drop the last step line
  std::stringstream cut(text);
  CHECK_THROWS_AS(read_episode_logs(cut), FormatError);

  std::stringstream junk("{\"type\": \"step\"}\n");
  CHECK_THROWS_AS(read_episode_logs(junk), FormatError);
}

TEST_CASE("episode CSV round-trip") {
  std::vector<EpisodeRecord> rows(3);
  rows[0] = {1, "train", 0, 2, "H_a", "new", true, false, 30.5, 1.0 / 3.0, 61, -1, 1};
  rows[1] = {1, "test", 4, 2, "H_b", "H_b", false, true, 31.25, 0.0, 40, 12, 2};
  rows[2] = {2, "unassisted", 4, 2, "H_b", "", false, false, 29.0, 2.0 / 3.0, 52, -1, 0};
  const auto path = scratch("episodes.csv");
  write_episode_csv(path, rows);
  const auto back = read_episode_csv(path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].seed == rows[i].seed);
    CHECK(back[i].phase == rows[i].phase);
    CHECK(back[i].episode == rows[i].episode);
    CHECK(back[i].occupant == rows[i].occupant);
    CHECK(back[i].predicted == rows[i].predicted);
    CHECK(back[i].is_new == rows[i].is_new);
    CHECK(back[i].correct == rows[i].correct);
    CHECK(back[i].reward == rows[i].reward);
    CHECK(back[i].th_steps == rows[i].th_steps);
    CHECK(back[i].belief_steps == rows[i].belief_steps);
    CHECK(back[i].pool_size == rows[i].pool_size);
  }

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == episode_csv_header());

  const auto bad = scratch("bad.csv");
  std::ofstream(bad) << "seed,phase\n1,test\n";
  CHECK_THROWS_AS(read_episode_csv(bad), FormatError);
}

TEST_CASE("belief curves round-trip") {
  const std::vector<std::vector<double>> curves{{0.5, 0.75, 0.9}, {1.0}, {0.2, 0.4}};
  const auto path = scratch("curves.csv");
  write_belief_curves(path, 7, curves);
  CHECK(read_belief_curves(path) == curves);
}
