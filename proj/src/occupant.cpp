#include "poshs/occupant.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace poshs {

double pmv(double temp, double humidity, double met_index, const ComfortParams& params) {
  const double ta = temp;
  const double tr = temp;
  const double pa = humidity * 10.0 * std::exp(16.6536 - 4030.183 / (ta + 235.0));
  const double icl = 0.155 * params.clo;
  const double m = met_index * kMetUnit;
  const double mw = m;
  const double fcl = icl <= 0.078 ? 1.0 + 1.29 * icl : 1.05 + 0.645 * icl;
  const double hcf = 12.1 * std::sqrt(params.air_speed);
  const double taa = ta + 273.0;
  const double tra = tr + 273.0;
  const double tcla = taa + (35.5 - ta) / (3.5 * (6.45 * icl + 0.1));

  const double p1 = icl * fcl;
  const double p2 = p1 * 3.96;
  const double p3 = p1 * 100.0;
  const double p4 = p1 * taa;
  const double p5 = 308.7 - 0.028 * mw + p2 * std::pow(tra / 100.0, 4);

  double xn = tcla / 100.0;
  double xf = tcla / 50.0;
  double hc = hcf;
  for (int n = 0; std::abs(xn - xf) > 0.00015; ++n) {
    if (n > 150) throw std::runtime_error("pmv: clothing temperature iteration did not converge");
    xf = (xf + xn) / 2.0;
    const double hcn = 2.38 * std::pow(std::abs(100.0 * xf - taa), 0.25);
    hc = std::max(hcf, hcn);
    xn = (p5 + p4 * hc - p2 * std::pow(xf, 4)) / (100.0 + p3 * hc);
  }
  const double tcl = 100.0 * xn - 273.0;

  const double hl1 = 3.05 * 0.001 * (5733.0 - 6.99 * mw - pa);           // skin diffusion
  const double hl2 = mw > kMetUnit ? 0.42 * (mw - kMetUnit) : 0.0;        // sweating
  const double hl3 = 1.7e-5 * m * (5867.0 - pa);                          // latent respiration
  const double hl4 = 0.0014 * m * (34.0 - ta);                            // dry respiration
  const double hl5 = 3.96 * fcl * (std::pow(xn, 4) - std::pow(tra / 100.0, 4));  // radiation
  const double hl6 = fcl * hc * (tcl - ta);                               // convection

  const double ts = 0.303 * std::exp(-0.036 * m) + 0.028;
  return ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6);
}

HumanModel::HumanModel(std::string id, std::array<double, kActivityCount> met_indices,
                       double pmv_band, const ThermalGrid& grid, ComfortParams params)
    : id_(std::move(id)), met_(met_indices), pmv_band_(pmv_band), grid_(grid), params_(params) {
  for (double met : met_) {
    if (met < 0.8 || met > 2.0) throw std::invalid_argument("metabolic index outside [0.8, 2.0]");
  }
  if (!(pmv_band > 0.0)) throw std::invalid_argument("pmv band must be positive");
  grid_.validate();
  const int nt = grid_.temp_points();
  const int nh = grid_.hum_points();
  pmv_cache_.resize(static_cast<std::size_t>(kActivityCount * nt * nh));
  for (int a = 0; a < kActivityCount; ++a) {
    for (int ti = 0; ti < nt; ++ti) {
      for (int hi = 0; hi < nh; ++hi) {
        pmv_cache_[cell(a, ti, hi)] =
            pmv(grid_.temperature(ti), grid_.humidity(hi), met_[static_cast<std::size_t>(a)], params_);
      }
    }
  }
}

std::size_t HumanModel::cell(int activity, int ti, int hi) const {
  return static_cast<std::size_t>((activity * grid_.temp_points() + ti) * grid_.hum_points() + hi);
}

double HumanModel::pmv_at(const ThermalObservation& obs) const {
  return pmv_cache_[cell(obs.activity, grid_.temp_index(obs.temp), grid_.hum_index(obs.humidity))];
}

bool HumanModel::humidity_ok(const ThermalObservation& obs) const {
  return obs.humidity >= params_.humidity_min - 1e-9 && obs.humidity <= params_.humidity_max + 1e-9;
}

bool HumanModel::comfortable(const ThermalObservation& obs) const {
  return std::abs(pmv_at(obs)) <= pmv_band_ && humidity_ok(obs);
}

double comfort_reward(const ThermalObservation& obs, HumanAction action, const HumanModel& model) {
  if (changes_th(action)) return -0.1;
  return model.comfortable(obs) ? 1.0 : 0.0;
}

namespace {

constexpr std::size_t kAdjustActions = 4;  // the TH-changing actions

HumanAction greedy_adjust(const HumanModel& model, const ThermalObservation& obs) {
  const auto row = model.q_table().row(observation_key(model.grid(), obs));
  std::array<double, kAdjustActions> head{};
  std::copy_n(row.begin(), kAdjustActions, head.begin());
  return static_cast<HumanAction>(argmax(head));
}

}  // namespace

HumanAction act(const HumanModel& model, const ThermalObservation& obs, int dwell, int dwell_steps) {
  if (model.comfortable(obs)) {
    return dwell < dwell_steps ? HumanAction::Continue : HumanAction::Leave;
  }
  return greedy_adjust(model, obs);
}

OccupantPolicy::OccupantPolicy(const HumanModel& model, std::uint64_t seed, int dwell_steps)
    : model_(&model), dwell_steps_(dwell_steps), rng_(seed) {}

HumanAction OccupantPolicy::act(const ThermalObservation& obs) {
  if (obs.activity != activity_) {
    activity_ = obs.activity;
    dwell_ = 0;
  }
  const double noise_sd = model_->comfort_params().sensation_noise;
  if (noise_sd <= 0.0) return poshs::act(*model_, obs, dwell_, dwell_steps_);

  const double felt = model_->pmv_at(obs) + std::normal_distribution<double>(0.0, noise_sd)(rng_);
  const bool in_band = model_->comfortable(obs);
  if (std::abs(felt) <= model_->pmv_band() && (in_band || model_->humidity_ok(obs))) {
    return dwell_ < dwell_steps_ ? HumanAction::Continue : HumanAction::Leave;
  }
  if (in_band) return felt > 0.0 ? HumanAction::DecT : HumanAction::IncT;
  return greedy_adjust(*model_, obs);
}

void OccupantPolicy::observe_executed(const ThermalObservation&, HumanAction executed) {
  if (executed == HumanAction::Continue) ++dwell_;
}

namespace {

struct Outcome {
  double reward;
  ObservationKey next;
  bool next_comfortable;
  bool terminal;
};

// Value of the best action the occupant may take in a state: Continue/Leave
// inside the band, the TH moves outside it.
double state_value(const HumanQTable& q, ObservationKey key, bool comfortable) {
  const auto row = q.row(key);
  if (comfortable) {
    return std::max(row[static_cast<std::size_t>(HumanAction::Continue)],
                    row[static_cast<std::size_t>(HumanAction::Leave)]);
  }
  return *std::max_element(row.begin(), row.begin() + kAdjustActions);
}

void q_update(HumanQTable& q, ObservationKey key, HumanAction action, const Outcome& o,
              const HumanLearning& learning) {
  const double bootstrap = o.terminal ? 0.0 : learning.gamma * state_value(q, o.next, o.next_comfortable);
  double& cell = q.at(key, static_cast<std::size_t>(action));
  cell += learning.alpha * (o.reward + bootstrap - cell);
}

}  // namespace

HumanModel pretrain(HumanModel model, int episodes, const EnvConfig& env_config,
                    std::uint64_t seed, const HumanLearning& learning) {
  if (episodes < 0) throw std::invalid_argument("pretrain episodes must be >= 0");
  SmartHome env(env_config);
  env.register_occupant(model.id());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> explore(0, static_cast<int>(kAdjustActions) - 1);
  const ThermalGrid& grid = env_config.grid;
  // Segment starts walk a shuffled sweep of the grid, one per activity, so
  // every state is a start state once per sweep.
  std::array<std::vector<std::pair<int, int>>, kActivityCount> starts;
  std::array<std::size_t, kActivityCount> next_start{};
  const auto draw_start = [&](int a) {
    auto& order = starts[static_cast<std::size_t>(a)];
    auto& i = next_start[static_cast<std::size_t>(a)];
    if (i == order.size()) {
      order.clear();
      for (int ti = 0; ti < grid.temp_points(); ++ti) {
        for (int hi = 0; hi < grid.hum_points(); ++hi) order.emplace_back(ti, hi);
      }
      std::shuffle(order.begin(), order.end(), rng);
      i = 0;
    }
    return order[i++];
  };
  // Last observed outcome of every (state, action) pair; the home is
  // deterministic apart from Leave under exploring starts.
  std::map<std::pair<ObservationKey, HumanAction>, Outcome> seen;

  for (int e = 0; e < episodes; ++e) {
    const double progress = episodes > 1 ? static_cast<double>(e) / (episodes - 1) : 1.0;
    const double eps = learning.epsilon_start *
                       std::pow(learning.epsilon_end / learning.epsilon_start, progress);
    ThermalObservation obs = env.reset(rng(), model.id());
    int dwell = 0;
    int activity = -1;
    while (!env.terminal()) {
      if (obs.activity != activity) {
        activity = obs.activity;
        dwell = 0;
        if (learning.exploring_starts) {
          const auto [ti, hi] = draw_start(activity);
          env.set_thermal_state(ti, hi);
          obs = env.observation();
        }
      }
      const ThermalObservation before = obs;
      HumanAction chosen;
      if (model.comfortable(before)) {
        chosen = act(model, before, dwell, learning.dwell_steps);
      } else if (coin(rng) < eps) {
        chosen = static_cast<HumanAction>(explore(rng));
      } else {
        chosen = greedy_adjust(model, before);
      }
      obs = env.apply(chosen);
      const HumanAction executed = env.last_human_action();
      const Outcome outcome{comfort_reward(before, executed, model), observation_key(grid, obs),
                            model.comfortable(obs), env.terminal()};
      const ObservationKey key = observation_key(grid, before);
      q_update(model.q_table(), key, executed, outcome, learning);
      seen.insert_or_assign({key, executed}, outcome);
      if (executed == HumanAction::Continue && model.comfortable(before)) ++dwell;
    }
    for (int sweep = 0; sweep < learning.planning_sweeps; ++sweep) {
      for (const auto& [sa, outcome] : seen) q_update(model.q_table(), sa.first, sa.second, outcome, learning);
    }
    ++model.pretrained_episodes;
  }
  model.epsilon = 0.0;
  return model;
}

std::vector<ThermalObservation> comfort_states(const HumanModel& model, int activity) {
  std::vector<ThermalObservation> out;
  const ThermalGrid& g = model.grid();
  for (int ti = 0; ti < g.temp_points(); ++ti) {
    for (int hi = 0; hi < g.hum_points(); ++hi) {
      const ThermalObservation obs{activity, g.temperature(ti), g.humidity(hi)};
      if (model.comfortable(obs)) out.push_back(obs);
    }
  }
  return out;
}

}  // namespace poshs
