#include "poshs/records.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace poshs {

namespace {

void check_header(const json& j, std::string_view format) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != format) {
    throw FormatError("expected a \"" + std::string(format) + "\" document");
  }
  const int version = j.value("version", 0);
  if (version < 1 || version > kFormatVersion) {
    throw FormatError("unsupported " + std::string(format) + " version " + std::to_string(version));
  }
}

json header(std::string_view format) { return json{{"format", format}, {"version", kFormatVersion}}; }

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key in " + where + ": " + key);
  }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << std::setw(2) << j << '\n';
}

json grid_json(const ThermalGrid& g) {
  return {{"temp_min", g.temp_min}, {"temp_max", g.temp_max}, {"temp_step", g.temp_step},
          {"hum_min", g.hum_min},   {"hum_max", g.hum_max},   {"hum_step", g.hum_step}};
}

ThermalGrid grid_from(const json& j) {
  reject_unknown(j, {"temp_min", "temp_max", "temp_step", "hum_min", "hum_max", "hum_step"}, "grid");
  ThermalGrid g;
  read_opt(j, "temp_min", g.temp_min);
  read_opt(j, "temp_max", g.temp_max);
  read_opt(j, "temp_step", g.temp_step);
  read_opt(j, "hum_min", g.hum_min);
  read_opt(j, "hum_max", g.hum_max);
  read_opt(j, "hum_step", g.hum_step);
  return g;
}

json policy_json(const PolicyConfig& p) {
  return {{"alpha", p.alpha},
          {"gamma", p.gamma},
          {"epsilon_start", p.epsilon_start},
          {"epsilon_min", p.epsilon_min},
          {"epsilon_decay", p.epsilon_decay}};
}

PolicyConfig policy_from(const json& j) {
  reject_unknown(j, {"alpha", "gamma", "epsilon_start", "epsilon_min", "epsilon_decay"}, "policy");
  PolicyConfig p;
  read_opt(j, "alpha", p.alpha);
  read_opt(j, "gamma", p.gamma);
  read_opt(j, "epsilon_start", p.epsilon_start);
  read_opt(j, "epsilon_min", p.epsilon_min);
  read_opt(j, "epsilon_decay", p.epsilon_decay);
  return p;
}

json obs_json(const ThermalObservation& o) { return json::array({o.activity, o.temp, o.humidity}); }

ThermalObservation obs_from(const json& j) {
  return {j.at(0).get<int>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

template <std::size_t N>
json qtable_json(const QTable<N>& q, const ThermalGrid& grid) {
  json rows = json::array();
  for (const auto& [key, values] : q.rows()) {
    const ThermalObservation o = observation_from_key(grid, key);
    rows.push_back({{"obs", obs_json(o)}, {"q", values}});
  }
  return rows;
}

template <std::size_t N>
QTable<N> qtable_from(const json& rows, const ThermalGrid& grid) {
  QTable<N> q;
  for (const json& r : rows) {
    const ObservationKey key = observation_key(grid, obs_from(r.at("obs")));
    const auto values = r.at("q").get<std::vector<double>>();
    if (values.size() != N) throw FormatError("Q-table row has the wrong action count");
    for (std::size_t a = 0; a < N; ++a) q.at(key, a) = values[a];
  }
  return q;
}

std::string param_name(ProfileVariant v, int slot, Channel ch, const char* which) {
  std::string name = v == ProfileVariant::Activity12d ? "a" + std::to_string(slot) + "." : "";
  name += ch == Channel::Temperature ? "temp." : "hum.";
  return name + which;
}

json identification_json(const Identification& id) {
  return {{"id", id.id},
          {"is_new", id.is_new},
          {"divergence", id.match.divergence},
          {"divergences", id.match.divergences}};
}

Identification identification_from(const json& j) {
  Identification id;
  id.id = j.at("id").get<int>();
  id.is_new = j.at("is_new").get<bool>();
  id.match.outcome = id.is_new ? MatchResult::Outcome::New : MatchResult::Outcome::Known;
  if (!id.is_new) id.match.id = id.id;
  id.match.divergence = j.value("divergence", 0.0);
  read_opt(j, "divergences", id.match.divergences);
  return id;
}

json summary_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.std}, {"n", s.n}}; }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

// --- configuration ---------------------------------------------------------

namespace {

json comfort_json(const ComfortParams& c) {
  return {{"clo", c.clo},
          {"air_speed", c.air_speed},
          {"humidity_min", c.humidity_min},
          {"humidity_max", c.humidity_max},
          {"sensation_noise", c.sensation_noise}};
}

ComfortParams comfort_from(const json& e, ComfortParams c = {}) {
  reject_unknown(e, {"clo", "air_speed", "humidity_min", "humidity_max", "sensation_noise"}, "comfort");
  read_opt(e, "clo", c.clo);
  read_opt(e, "air_speed", c.air_speed);
  read_opt(e, "humidity_min", c.humidity_min);
  read_opt(e, "humidity_max", c.humidity_max);
  read_opt(e, "sensation_noise", c.sensation_noise);
  return c;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json occupants = json::array();
  for (const auto& o : c.occupants) occupants.push_back({{"id", o.id}, {"met", o.met_indices}});
  json j = header("experiment-config");
  j["experiment_id"] = c.experiment_id;
  j["env"] = {{"grid", grid_json(c.env.grid)}, {"max_steps_per_activity", c.env.max_steps_per_activity}};
  j["comfort"] = comfort_json(c.comfort);
  j["human"] = {{"alpha", c.human.alpha},
                {"gamma", c.human.gamma},
                {"epsilon_start", c.human.epsilon_start},
                {"epsilon_end", c.human.epsilon_end},
                {"dwell_steps", c.human.dwell_steps},
                {"exploring_starts", c.human.exploring_starts},
                {"planning_sweeps", c.human.planning_sweeps}};
  j["occupants"] = occupants;
  j["n_models"] = c.n_models;
  j["pmv_band"] = c.pmv_band;
  j["variant"] = to_string(c.variant);
  j["pretrain_episodes"] = c.pretrain_episodes;
  j["train_episodes"] = c.train_episodes;
  j["test_episodes"] = c.test_episodes;
  j["tau"] = c.tau ? json(*c.tau) : json(nullptr);
  j["amplification"] = c.amplification;
  j["merge_weight"] = c.merge_weight;
  j["sigma_floor"] = c.sigma_floor;
  j["likelihood_floor"] = c.likelihood_floor;
  j["policy"] = policy_json(c.policy);
  j["hold_manual_changes"] = c.hold_manual_changes;
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  if (j.contains("format")) check_header(j, "experiment-config");
  reject_unknown(j,
                 {"format", "version", "experiment_id", "env", "comfort", "human", "occupants", "n_models",
                  "pmv_band", "variant", "pretrain_episodes", "train_episodes", "test_episodes", "tau",
                  "amplification", "merge_weight", "sigma_floor", "likelihood_floor", "policy",
                  "hold_manual_changes", "seeds", "output_dir"},
                 "configuration");
  ExperimentConfig c;
  try {
    read_opt(j, "experiment_id", c.experiment_id);
    if (j.contains("env")) {
      const json& e = j.at("env");
      reject_unknown(e, {"grid", "max_steps_per_activity"}, "env");
      if (e.contains("grid")) c.env.grid = grid_from(e.at("grid"));
      read_opt(e, "max_steps_per_activity", c.env.max_steps_per_activity);
    }
    if (j.contains("comfort")) c.comfort = comfort_from(j.at("comfort"));
    if (j.contains("human")) {
      const json& e = j.at("human");
      reject_unknown(e,
                     {"alpha", "gamma", "epsilon_start", "epsilon_end", "dwell_steps", "exploring_starts",
                      "planning_sweeps"},
                     "human");
      read_opt(e, "alpha", c.human.alpha);
      read_opt(e, "gamma", c.human.gamma);
      read_opt(e, "epsilon_start", c.human.epsilon_start);
      read_opt(e, "epsilon_end", c.human.epsilon_end);
      read_opt(e, "dwell_steps", c.human.dwell_steps);
      read_opt(e, "exploring_starts", c.human.exploring_starts);
      read_opt(e, "planning_sweeps", c.human.planning_sweeps);
    }
    if (j.contains("occupants")) {
      c.occupants.clear();
      for (const json& o : j.at("occupants")) {
        reject_unknown(o, {"id", "met"}, "occupant");
        c.occupants.push_back({o.at("id").get<std::string>(), o.at("met").get<std::array<double, 3>>()});
      }
    }
    read_opt(j, "n_models", c.n_models);
    read_opt(j, "pmv_band", c.pmv_band);
    if (j.contains("variant")) c.variant = profile_variant_from_string(j.at("variant").get<std::string>());
    read_opt(j, "pretrain_episodes", c.pretrain_episodes);
    read_opt(j, "train_episodes", c.train_episodes);
    read_opt(j, "test_episodes", c.test_episodes);
    if (j.contains("tau") && !j.at("tau").is_null()) c.tau = j.at("tau").get<double>();
    read_opt(j, "amplification", c.amplification);
    read_opt(j, "merge_weight", c.merge_weight);
    read_opt(j, "sigma_floor", c.sigma_floor);
    read_opt(j, "likelihood_floor", c.likelihood_floor);
    if (j.contains("policy")) c.policy = policy_from(j.at("policy"));
    read_opt(j, "hold_manual_changes", c.hold_manual_changes);
    read_opt(j, "seeds", c.seeds);
    read_opt(j, "output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("configuration file not found: " + path.string());
  return experiment_config_from_json(read_json_file(path));
}

// --- preference profiles ---------------------------------------------------

json profile_record(const PreferenceProfile& profile, const std::string& occupant) {
  json params = json::object();
  for (int s = 0; s < profile.slot_count(); ++s) {
    for (Channel ch : {Channel::Temperature, Channel::Humidity}) {
      params[param_name(profile.variant(), s, ch, "mu")] = profile.slot(s, ch).mu;
      params[param_name(profile.variant(), s, ch, "sigma")] = profile.slot(s, ch).sigma;
    }
  }
  return {{"occupant", occupant}, {"variant", to_string(profile.variant())}, {"params", params}};
}

PreferenceProfile profile_from_record(const json& j) {
  const ProfileVariant v = profile_variant_from_string(j.at("variant").get<std::string>());
  const json& params = j.at("params");
  PreferenceProfile::Slots slots{};
  const int n = v == ProfileVariant::Activity12d ? kActivityCount : 1;
  if (params.size() != static_cast<std::size_t>(n * 4)) throw FormatError("profile has the wrong parameter count");
  for (int s = 0; s < n; ++s) {
    for (Channel ch : {Channel::Temperature, Channel::Humidity}) {
      auto& g = slots[static_cast<std::size_t>(s)][static_cast<std::size_t>(ch)];
      g.mu = params.at(param_name(v, s, ch, "mu")).get<double>();
      g.sigma = params.at(param_name(v, s, ch, "sigma")).get<double>();
    }
  }
  return PreferenceProfile(v, slots);
}

// --- occupant Q-tables -----------------------------------------------------

json to_json(const HumanModel& m) {
  json j = header("occupant-model");
  j["id"] = m.id();
  j["met"] = m.met_indices();
  j["pmv_band"] = m.pmv_band();
  j["grid"] = grid_json(m.grid());
  j["comfort"] = comfort_json(m.comfort_params());
  j["epsilon"] = m.epsilon;
  j["pretrained_episodes"] = m.pretrained_episodes;
  j["q"] = qtable_json(m.q_table(), m.grid());
  return j;
}

HumanModel human_model_from_json(const json& j) {
  check_header(j, "occupant-model");
  const ThermalGrid grid = grid_from(j.at("grid"));
  const ComfortParams cp = comfort_from(j.at("comfort"));
  HumanModel m(j.at("id").get<std::string>(), j.at("met").get<std::array<double, 3>>(),
               j.at("pmv_band").get<double>(), grid, cp);
  m.epsilon = j.at("epsilon").get<double>();
  m.pretrained_episodes = j.at("pretrained_episodes").get<int>();
  m.q_table() = qtable_from<kHumanActionCount>(j.at("q"), grid);
  return m;
}

void save_human_model(const std::filesystem::path& path, const HumanModel& model) {
  write_json_file(path, to_json(model));
}

HumanModel load_human_model(const std::filesystem::path& path) {
  return human_model_from_json(read_json_file(path));
}

// --- agent snapshot --------------------------------------------------------

void save_agent_snapshot(const std::filesystem::path& path, const PoshsAgent& agent,
                         const std::vector<std::string>& labels) {
  const AgentConfig& c = agent.config();
  json j = header("agent-snapshot");
  j["grid"] = grid_json(agent.grid());
  j["policy"] = policy_json(c.policy);
  j["variant"] = to_string(c.variant);
  j["jsd"] = {{"tau", c.jsd.tau},
              {"amplification", c.jsd.amplification},
              {"weights", c.jsd.weights},
              {"eval_grid", grid_json(c.jsd.eval_grid)}};
  j["merge_weight"] = c.merge_weight;
  j["sigma_floor"] = c.sigma_floor;
  j["likelihood_floor"] = c.likelihood_floor;
  j["hold_manual_changes"] = c.hold_manual_changes;
  j["epsilon"] = agent.epsilon();
  j["episodes"] = agent.episodes();
  std::ostringstream rng;
  rng << agent.rng();
  j["rng"] = rng.str();
  json pool = json::array();
  for (const PoolEntry& e : agent.pool().entries()) {
    const std::string label = static_cast<std::size_t>(e.id) < labels.size() ? labels[e.id] : "";
    pool.push_back({{"id", e.id}, {"profile", profile_record(e.profile, label)},
                    {"q", qtable_json(e.q_table, agent.grid())}});
  }
  j["pool"] = pool;
  j["labels"] = labels;
  write_json_file(path, j);
}

AgentSnapshot load_agent_snapshot(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  check_header(j, "agent-snapshot");
  AgentConfig c;
  c.policy = policy_from(j.at("policy"));
  c.variant = profile_variant_from_string(j.at("variant").get<std::string>());
  const json& jj = j.at("jsd");
  c.jsd.tau = jj.at("tau").get<double>();
  c.jsd.amplification = jj.at("amplification").get<double>();
  c.jsd.weights = jj.at("weights").get<std::array<double, 2>>();
  c.jsd.eval_grid = grid_from(jj.at("eval_grid"));
  c.merge_weight = j.at("merge_weight").get<double>();
  c.sigma_floor = j.at("sigma_floor").get<double>();
  c.likelihood_floor = j.at("likelihood_floor").get<double>();
  c.hold_manual_changes = j.at("hold_manual_changes").get<bool>();
  const ThermalGrid grid = grid_from(j.at("grid"));

  AgentSnapshot snap{PoshsAgent(c, grid, 0), j.at("labels").get<std::vector<std::string>>()};
  OccupantPool pool;
  for (const json& e : j.at("pool")) {
    const int id = pool.add(profile_from_record(e.at("profile")));
    if (id != e.at("id").get<int>()) throw FormatError("snapshot pool ids are not dense");
    pool.at(id).q_table = qtable_from<kShsActionCount>(e.at("q"), grid);
  }
  snap.agent.restore(std::move(pool), j.at("epsilon").get<double>(), j.at("episodes").get<int>());
  std::istringstream rng(j.at("rng").get<std::string>());
  rng >> snap.agent.rng();
  if (!rng) throw FormatError("snapshot RNG state is corrupt");
  return snap;
}

// --- episode traces --------------------------------------------------------

void write_episode_log(std::ostream& out, const EpisodeLog& log, int episode, int n_models,
                       const std::string& phase) {
  json h = {{"type", "episode"},
            {"version", kFormatVersion},
            {"episode", episode},
            {"n_models", n_models},
            {"phase", phase},
            {"occupant", log.occupant},
            {"seed", log.seed},
            {"assisted", log.assisted},
            {"pool_size", log.pool_size},
            {"occupant_reward", log.occupant_reward},
            {"th_changes", log.th_changes},
            {"steps", log.steps},
            {"identification", identification_json(log.identification)},
            {"profile", profile_record(log.profile, log.occupant)},
            {"belief_trajectory", log.belief_trajectory},
            {"transitions", log.transitions.size()}};
  out << h.dump() << '\n';
  for (std::size_t t = 0; t < log.transitions.size(); ++t) {
    const Transition& tr = log.transitions[t];
    json s = {{"type", "step"},
              {"t", t},
              {"obs", obs_json(tr.obs)},
              {"human_action", to_string(tr.human_action)},
              {"action", to_string(tr.action)},
              {"next", obs_json(tr.next)},
              {"reward", tr.reward},
              {"belief", tr.belief},
              {"valid_sample", tr.valid_sample},
              {"terminal", tr.terminal}};
    out << s.dump() << '\n';
  }
}

std::vector<EpisodeLog> read_episode_logs(std::istream& in) {
  std::vector<EpisodeLog> logs;
  std::size_t expected = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("episode log line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "episode") {
      if (!logs.empty() && logs.back().transitions.size() != expected) {
        throw FormatError("episode log is missing step lines before line " + std::to_string(lineno));
      }
      if (j.value("version", 0) > kFormatVersion) throw FormatError("unsupported episode log version");
      EpisodeLog log;
      log.occupant = j.at("occupant").get<std::string>();
      log.seed = j.at("seed").get<std::uint64_t>();
      log.assisted = j.at("assisted").get<bool>();
      log.pool_size = j.at("pool_size").get<std::size_t>();
      log.occupant_reward = j.at("occupant_reward").get<double>();
      log.th_changes = j.at("th_changes").get<std::array<int, kActivityCount>>();
      log.steps = j.at("steps").get<int>();
      log.identification = identification_from(j.at("identification"));
      log.profile = profile_from_record(j.at("profile"));
      log.belief_trajectory = j.at("belief_trajectory").get<std::vector<std::vector<double>>>();
      expected = j.at("transitions").get<std::size_t>();
      logs.push_back(std::move(log));
    } else if (type == "step") {
      if (logs.empty()) throw FormatError("step line before any episode line");
      Transition tr;
      tr.obs = obs_from(j.at("obs"));
      tr.human_action = human_action_from_string(j.at("human_action").get<std::string>());
      tr.action = shs_action_from_string(j.at("action").get<std::string>());
      tr.next = obs_from(j.at("next"));
      tr.reward = j.at("reward").get<double>();
      tr.belief = j.at("belief").get<std::vector<double>>();
      tr.valid_sample = j.at("valid_sample").get<bool>();
      tr.terminal = j.at("terminal").get<bool>();
      logs.back().transitions.push_back(std::move(tr));
    } else {
      throw FormatError("episode log line " + std::to_string(lineno) + " has unknown type");
    }
  }
  if (!logs.empty() && logs.back().transitions.size() != expected) {
    throw FormatError("episode log ends early");
  }
  return logs;
}

// --- per-episode CSV -------------------------------------------------------

std::string episode_csv_header() {
  return "seed,phase,episode,n_models,occupant,predicted,is_new,correct,reward,th_steps,steps,"
         "belief_steps,pool_size";
}

void write_episode_csv(const std::filesystem::path& path, const std::vector<EpisodeRecord>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << episode_csv_header() << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.seed << ',' << r.phase << ',' << r.episode << ',' << r.n_models << ',' << r.occupant << ','
        << r.predicted << ',' << (r.is_new ? 1 : 0) << ',' << (r.correct ? 1 : 0) << ',' << r.reward << ','
        << r.th_steps << ',' << r.steps << ',' << r.belief_steps << ',' << r.pool_size << '\n';
  }
}

std::vector<EpisodeRecord> read_episode_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto columns = split_csv(line);
  const auto expected = split_csv(episode_csv_header());
  std::vector<int> index(expected.size(), -1);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == expected[i]) index[i] = static_cast<int>(c);
    }
    if (index[i] < 0) throw FormatError(path.string() + " lacks column " + expected[i]);
  }
  std::vector<EpisodeRecord> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != columns.size()) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
    }
    const auto at = [&](std::size_t i) -> const std::string& { return f[static_cast<std::size_t>(index[i])]; };
    try {
      EpisodeRecord r;
      r.seed = std::stoull(at(0));
      r.phase = at(1);
      r.episode = std::stoi(at(2));
      r.n_models = std::stoi(at(3));
      r.occupant = at(4);
      r.predicted = at(5);
      r.is_new = at(6) == "1" || at(6) == "true";
      r.correct = at(7) == "1" || at(7) == "true";
      r.reward = std::stod(at(8));
      r.th_steps = std::stod(at(9));
      r.steps = std::stoi(at(10));
      r.belief_steps = std::stoi(at(11));
      r.pool_size = std::stoull(at(12));
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": unparsable field");
    }
  }
  return rows;
}

void write_belief_curves(const std::filesystem::path& path, std::uint64_t seed,
                         const std::vector<std::vector<double>>& curves) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "seed,episode,step,belief\n" << std::setprecision(17);
  for (std::size_t e = 0; e < curves.size(); ++e) {
    for (std::size_t t = 0; t < curves[e].size(); ++t) {
      out << seed << ',' << e << ',' << t + 1 << ',' << curves[e][t] << '\n';
    }
  }
}

std::vector<std::vector<double>> read_belief_curves(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("seed,episode,step,belief", 0) != 0) {
    throw FormatError(path.string() + " is not a belief-curve file");
  }
  std::vector<std::vector<double>> curves;
  std::string last_key;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) throw FormatError(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
    const std::string key = f[0] + "/" + f[1];
    if (key != last_key) {
      curves.emplace_back();
      last_key = key;
    }
    try {
      curves.back().push_back(std::stod(f[3]));
    } catch (const std::logic_error&) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": unparsable field");
    }
  }
  return curves;
}

// --- reports ---------------------------------------------------------------

json to_json(const RunReport& r) {
  json scores = json::array();
  for (const auto& s : r.scores) scores.push_back({{"id", s.id}, {"accuracy", s.accuracy}, {"f1", s.f1}});
  json j = header("run-report");
  j["experiment_id"] = r.experiment_id;
  j["n_models"] = r.n_models;
  j["labels"] = r.labels;
  j["confusion"] = r.confusion;
  j["scores"] = scores;
  j["mean_accuracy"] = r.mean_accuracy;
  j["mean_f1"] = r.mean_f1;
  j["seed_accuracy"] = r.seed_accuracy;
  j["belief_steps"] = summary_json(r.belief_steps);
  j["reward"] = {{"poshs", summary_json(r.reward_poshs)}, {"unassisted", summary_json(r.reward_unassisted)}};
  j["th_steps"] = {{"poshs", summary_json(r.th_steps_poshs)},
                   {"unassisted", summary_json(r.th_steps_unassisted)}};
  if (r.reward_baseline) j["reward"]["baseline"] = summary_json(*r.reward_baseline);
  if (r.th_steps_baseline) j["th_steps"]["baseline"] = summary_json(*r.th_steps_baseline);
  return j;
}

void write_report(const std::filesystem::path& dir, const RunReport& report) {
  std::filesystem::create_directories(dir);
  write_json_file(dir / "summary.json", to_json(report));
  write_episode_csv(dir / "episodes.csv", report.episodes);
  {
    std::ofstream out(dir / "training_accuracy.csv");
    out << "episode,accuracy\n";
    for (std::size_t e = 0; e < report.training_accuracy.size(); ++e) {
      out << e << ',' << report.training_accuracy[e] << '\n';
    }
  }
  std::ofstream out(dir / "belief_curve.csv");
  out << "step,belief\n";
  for (std::size_t t = 0; t < report.mean_belief_curve.size(); ++t) {
    out << t + 1 << ',' << report.mean_belief_curve[t] << '\n';
  }
}

}  // namespace poshs
