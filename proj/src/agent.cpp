#include "poshs/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poshs {

void PolicyConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(epsilon_min > 0.0)) throw std::invalid_argument("epsilon_min must be positive");
  if (epsilon_start < epsilon_min || epsilon_start > 1.0) {
    throw std::invalid_argument("epsilon_start must lie in [epsilon_min, 1]");
  }
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) {
    throw std::invalid_argument("epsilon_decay must lie in (0, 1]");
  }
}

ShsValues q_net(ObservationKey key, const BeliefVector& belief,
                std::span<const ShsQTable* const> tables) {
  if (belief.size() != tables.size()) throw std::invalid_argument("belief does not cover the Q-tables");
  ShsValues out{};
  for (std::size_t h = 0; h < tables.size(); ++h) {
    const auto row = tables[h]->row(key);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += belief[h] * row[a];
  }
  return out;
}

ShsValues q_net(const ThermalGrid& grid, const ThermalObservation& obs, const BeliefVector& belief,
                const OccupantPool& pool) {
  std::vector<const ShsQTable*> tables;
  tables.reserve(pool.size());
  for (const PoolEntry& e : pool.entries()) tables.push_back(&e.q_table);
  return q_net(observation_key(grid, obs), belief, tables);
}

ShsAction select_action(const ShsValues& values, double epsilon, std::mt19937_64& rng,
                        const ActionMask& blocked) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (blocked.test(0)) throw std::invalid_argument("NoOp cannot be blocked");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    const int open = kShsActionCount - static_cast<int>(blocked.count());
    std::uniform_int_distribution<int> any(0, open - 1);
    int k = any(rng);
    for (int a = 0; a < kShsActionCount; ++a) {
      if (blocked.test(static_cast<std::size_t>(a))) continue;
      if (k-- == 0) return static_cast<ShsAction>(a);
    }
  }
  int best = 0;
  for (int a = 1; a < kShsActionCount; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (!blocked.test(i) && values[i] > values[static_cast<std::size_t>(best)]) best = a;
  }
  return static_cast<ShsAction>(best);
}

void ManualHold::observe(HumanAction executed) {
  switch (executed) {
    case HumanAction::IncT:
    case HumanAction::DecT:
    case HumanAction::IncH:
    case HumanAction::DecH: held_ = true; break;
    case HumanAction::Leave: held_ = false; break;
    case HumanAction::Continue: break;
  }
}

ActionMask ManualHold::blocked() const {
  ActionMask m;
  if (held_) m.set().reset(0);
  return m;
}

void update_q(std::span<ShsQTable* const> tables, std::span<const Transition> memory, bool new_node,
              const PolicyConfig& config, const ThermalGrid& grid) {
  if (new_node && !tables.empty()) tables.back()->clear();
  for (std::size_t h = 0; h < tables.size(); ++h) {
    ShsQTable& q = *tables[h];
    for (const Transition& tr : memory) {
      const double weight = h < tr.belief.size() ? tr.belief[h] : 0.0;
      const double bootstrap = tr.terminal ? 0.0 : q.max_value(observation_key(grid, tr.next));
      double& cell = q.at(observation_key(grid, tr.obs), static_cast<std::size_t>(tr.action));
      cell = (1.0 - config.alpha) * cell + config.alpha * (tr.reward * weight + config.gamma * bootstrap);
    }
  }
}

void update_q(OccupantPool& pool, std::span<const Transition> memory, bool new_node,
              const PolicyConfig& config, const ThermalGrid& grid) {
  std::vector<ShsQTable*> tables;
  tables.reserve(pool.size());
  for (PoolEntry& e : pool.entries()) tables.push_back(&e.q_table);
  update_q(tables, memory, new_node, config, grid);
}

PoshsAgent::PoshsAgent(AgentConfig config, const ThermalGrid& grid, std::uint64_t seed)
    : config_(std::move(config)), grid_(grid), epsilon_(config_.policy.epsilon_start), rng_(seed) {
  config_.policy.validate();
  config_.jsd.validate();
}

void PoshsAgent::decay_epsilon() {
  epsilon_ = std::max(config_.policy.epsilon_min, epsilon_ * config_.policy.epsilon_decay);
}

void PoshsAgent::restore(OccupantPool pool, double epsilon, int episodes) {
  pool_ = std::move(pool);
  epsilon_ = epsilon;
  episodes_ = episodes;
}

int EpisodeLog::total_th_changes() const {
  int n = 0;
  for (int c : th_changes) n += c;
  return n;
}

namespace {

std::vector<double> likelihoods(const OccupantPool& pool, const ThermalObservation& obs, double floor) {
  std::vector<double> out;
  out.reserve(pool.size());
  for (const PoolEntry& e : pool.entries()) out.push_back(likelihood(e.profile, obs, floor));
  return out;
}

// One occupant move; returns the executed action after recording reward and
// TH-change statistics.
HumanAction occupant_step(SmartHome& env, OccupantPolicy& policy, const HumanModel& model,
                          ThermalObservation& obs, EpisodeLog& log) {
  const ThermalObservation before = obs;
  obs = env.apply(policy.act(before));
  const HumanAction executed = env.last_human_action();
  policy.observe_executed(before, executed);
  log.occupant_reward += comfort_reward(before, executed, model);
  if (changes_th(executed)) ++log.th_changes[static_cast<std::size_t>(before.activity)];
  ++log.steps;
  return executed;
}

}  // namespace

EpisodeLog run_episode(SmartHome& env, const HumanModel& occupant, PoshsAgent& agent,
                       std::uint64_t seed, const EpisodeOptions& options) {
  const AgentConfig& cfg = agent.config();
  OccupantPool& pool = agent.pool();
  EpisodeLog log;
  log.occupant = occupant.id();
  log.seed = seed;

  ThermalObservation obs = env.reset(seed, occupant.id());
  OccupantPolicy policy(occupant, seed);
  policy.begin_episode();
  BeliefVector belief = pool.empty() ? BeliefVector{} : init_uniform(pool.size());
  EpisodeEstimator estimator;
  std::optional<Transition> pending;
  ManualHold hold;

  for (;;) {
    const ThermalObservation before = obs;
    const HumanAction executed = occupant_step(env, policy, occupant, obs, log);
    if (pending) {
      pending->next = obs;
      pending->reward = comfort_reward(before, executed, occupant);
      pending->terminal = env.terminal();
      log.transitions.push_back(std::move(*pending));
      pending.reset();
    }
    const bool valid = is_valid_sample(executed);
    estimator.accumulate(before, executed);
    if (valid && !belief.empty()) belief = update(belief, likelihoods(pool, before, cfg.likelihood_floor));
    log.belief_trajectory.push_back(belief.values());
    if (env.terminal()) break;

    const ShsValues values = belief.empty() ? ShsValues{} : q_net(agent.grid(), obs, belief, pool);
    hold.observe(executed);
    const ActionMask blocked = cfg.hold_manual_changes ? hold.blocked() : ActionMask{};
    const ShsAction action = select_action(values, agent.epsilon(), agent.rng(), blocked);
    pending = Transition{obs, executed, action, obs, 0.0, belief.values(), valid, false};
    obs = env.apply(action);
  }

  log.profile = estimator.finalize(cfg.variant, cfg.sigma_floor);
  if (options.learn) {
    log.identification = end_of_episode(pool, log.profile, cfg.jsd, cfg.merge_weight);
    if (log.identification.is_new) {
      // A new occupant was none of the pooled ones; its table takes the rewards.
      for (Transition& tr : log.transitions) {
        tr.belief.assign(pool.size(), 0.0);
        tr.belief[static_cast<std::size_t>(log.identification.id)] = 1.0;
      }
    }
    update_q(pool, log.transitions, log.identification.is_new, cfg.policy, agent.grid());
  } else {
    const MatchResult m = match(pool, log.profile, cfg.jsd);
    log.identification = Identification{m.id.value_or(-1), m.is_new(), m};
  }
  log.pool_size = pool.size();
  agent.decay_epsilon();
  agent.count_episode();
  return log;
}

EpisodeLog run_unassisted_episode(SmartHome& env, const HumanModel& occupant, std::uint64_t seed,
                                  ProfileVariant variant) {
  EpisodeLog log;
  log.occupant = occupant.id();
  log.seed = seed;
  log.assisted = false;
  ThermalObservation obs = env.reset(seed, occupant.id());
  OccupantPolicy policy(occupant, seed);
  policy.begin_episode();
  EpisodeEstimator estimator;
  while (!env.terminal()) {
    const ThermalObservation before = obs;
    const HumanAction executed = occupant_step(env, policy, occupant, obs, log);
    estimator.accumulate(before, executed);
    log.belief_trajectory.emplace_back();
  }
  log.profile = estimator.finalize(variant);
  log.identification.id = -1;
  return log;
}

}  // namespace poshs
