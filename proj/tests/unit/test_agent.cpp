#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "poshs/agent.hpp"

using namespace poshs;

namespace {

const ThermalGrid kGrid{};

ObservationKey key(int a, double t, double h) { return observation_key(kGrid, {a, t, h}); }

Transition transition(ThermalObservation o, ShsAction a, ThermalObservation next, double r,
                      std::vector<double> belief, bool terminal = false) {
  Transition t;
  t.obs = o;
  t.action = a;
  t.next = next;
  t.reward = r;
  t.belief = std::move(belief);
  t.terminal = terminal;
  return t;
}

const HumanModel& occupant_a() {
  static const HumanModel m =
      pretrain(HumanModel("H_a", {1.0, 1.2, 1.4}, 0.25, kGrid), 350, EnvConfig{}, 3);
  return m;
}

SmartHome home() {
  SmartHome env(EnvConfig{});
  env.register_occupant("H_a");
  return env;
}

AgentConfig agent_config() {
  AgentConfig c;
  c.jsd = JsdConfig::for_variant(c.variant, kGrid);
  return c;
}

// Textbook tabular Q-learning used as the reference for the one-occupant case.
struct ReferenceQ {
  std::map<ObservationKey, std::array<double, kShsActionCount>> q;
  double alpha, gamma;
  double max_at(ObservationKey k) {
    auto it = q.find(k);
    if (it == q.end()) return 0.0;
    double m = it->second[0];
    for (double v : it->second) m = std::max(m, v);
    return m;
  }
  void learn(ObservationKey s, int a, double r, ObservationKey s2, bool terminal) {
    const double target = terminal ? 0.0 : max_at(s2);
    double& c = q[s][static_cast<std::size_t>(a)];
    c = (1.0 - alpha) * c + alpha * (r + gamma * target);
  }
};

}  // namespace

TEST_CASE("q_net") {
  ShsQTable qa, qb;
  const ObservationKey k = key(0, 22.0, 45.0);
  qa.at(k, 2) = 1.0;
  qb.at(k, 2) = 2.0;
  qa.at(k, 4) = -0.5;
  const std::array<const ShsQTable*, 2> tables{&qa, &qb};

  const auto v = q_net(k, BeliefVector({0.3, 0.7}), tables);
  CHECK(v[2] == doctest::Approx(1.7));
  CHECK(v[4] == doctest::Approx(-0.15));

  const auto only_a = q_net(k, BeliefVector({1.0, 0.0}), tables);
  CHECK(only_a == qa.row(k));

  ShsQTable z1, z2;
  const std::array<const ShsQTable*, 2> zeros{&z1, &z2};
  CHECK(q_net(k, init_uniform(2), zeros) == ShsValues{});
  CHECK_THROWS(q_net(k, init_uniform(3), zeros));
}

TEST_CASE("select_action") {
  std::mt19937_64 rng(1);
  CHECK(select_action({0, 1, 0, 0, 0}, 0.0, rng) == ShsAction::IncT);
  CHECK(select_action({0.3, 0.3, 0.3, 0.3, 0.3}, 0.0, rng) == ShsAction::NoOp);
  CHECK(select_action({-1, 2, 2, 0, 0}, 0.0, rng) == ShsAction::IncT);
  CHECK_THROWS(select_action({}, 1.5, rng));
}

TEST_CASE("exploration is uniform") {
  std::mt19937_64 rng(2024);
  constexpr int n = 100000;
  std::array<int, kShsActionCount> counts{};
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(select_action({5, 0, 0, 0, 0}, 1.0, rng))];
  const double expect = n / 5.0;
  const double sd = std::sqrt(n * 0.2 * 0.8);
  for (int c : counts) CHECK(std::abs(c - expect) < 3.0 * sd);
}

TEST_CASE("blocked actions") {
  std::mt19937_64 rng(7);
  ActionMask no_t;
  no_t.set(1).set(2);
  for (int i = 0; i < 2000; ++i) {
    const ShsAction a = select_action({0, 1, 1, 0, 0}, 0.5, rng, no_t);
    REQUIRE(a != ShsAction::IncT);
    REQUIRE(a != ShsAction::DecT);
  }
  CHECK(select_action({0, 1, 1, 0.5, 0}, 0.0, rng, no_t) == ShsAction::IncH);
  ActionMask bad;
  bad.set(0);
  CHECK_THROWS(select_action({}, 0.0, rng, bad));
}

TEST_CASE("manual hold") {
  ManualHold h;
  CHECK(h.blocked().none());
  h.observe(HumanAction::Continue);
  CHECK_FALSE(h.held());
  h.observe(HumanAction::DecH);
  CHECK(h.held());
  CHECK(h.blocked().count() == 4);
  CHECK_FALSE(h.blocked().test(0));
  h.observe(HumanAction::Continue);
  CHECK(h.held());
  h.observe(HumanAction::Leave);
  CHECK_FALSE(h.held());

  std::mt19937_64 rng(3);
  h.observe(HumanAction::IncT);
  for (int i = 0; i < 200; ++i) REQUIRE(select_action({0, 9, 9, 9, 9}, 1.0, rng, h.blocked()) == ShsAction::NoOp);
}

TEST_CASE("update_q") {
  PolicyConfig cfg;  // alpha 0.05, gamma 0.98
  const ThermalObservation o{0, 22.0, 45.0}, o2{0, 22.5, 45.0};
  const ObservationKey ko = observation_key(kGrid, o);

  SUBCASE("single rewarded step") {
    ShsQTable q;
    std::array<ShsQTable*, 1> t{&q};
    const std::array<Transition, 1> mem{transition(o, ShsAction::IncT, o2, 1.0, {1.0})};
    update_q(t, mem, false, cfg, kGrid);
    CHECK(q.value(ko, 1) == doctest::Approx(0.05));
  }
  SUBCASE("zero belief and zero bootstrap leave the entry alone") {
    ShsQTable qa, qb;
    std::array<ShsQTable*, 2> t{&qa, &qb};
    const std::array<Transition, 1> mem{transition(o, ShsAction::DecT, o2, 1.0, {1.0, 0.0})};
    update_q(t, mem, false, cfg, kGrid);
    CHECK(qa.value(ko, 2) == doctest::Approx(0.05));
    CHECK(qb.value(ko, 2) == 0.0);
  }
  SUBCASE("replays are not idempotent") {
    ShsQTable q;
    std::array<ShsQTable*, 1> t{&q};
    const std::array<Transition, 1> mem{transition(o, ShsAction::IncT, o2, 1.0, {1.0})};
    update_q(t, mem, false, cfg, kGrid);
    update_q(t, mem, false, cfg, kGrid);
    CHECK(q.value(ko, 1) == doctest::Approx(0.95 * 0.05 + 0.05 * 1.0));
  }
  SUBCASE("bootstrap and terminal") {
    ShsQTable q;
    q.at(observation_key(kGrid, o2), 3) = 2.0;
    std::array<ShsQTable*, 1> t{&q};
    std::array<Transition, 1> mem{transition(o, ShsAction::NoOp, o2, 0.5, {1.0})};
    update_q(t, mem, false, cfg, kGrid);
    CHECK(q.value(ko, 0) == doctest::Approx(0.05 * (0.5 + 0.98 * 2.0)));
    q.at(ko, 0) = 0.0;
    mem[0].terminal = true;
    update_q(t, mem, false, cfg, kGrid);
    CHECK(q.value(ko, 0) == doctest::Approx(0.05 * 0.5));
  }
  SUBCASE("a new node starts from an empty table") {
    ShsQTable qa, qb;
    qb.at(key(2, 30.0, 70.0), 4) = 9.0;
    std::array<ShsQTable*, 2> t{&qa, &qb};
    const std::array<Transition, 1> mem{transition(o, ShsAction::IncT, o2, 1.0, {0.0, 1.0})};
    update_q(t, mem, true, cfg, kGrid);
    CHECK(qb.size() == 1);
    CHECK(qb.value(ko, 1) == doctest::Approx(0.05));
  }
}

TEST_CASE("epsilon schedule") {
  PoshsAgent agent(agent_config(), kGrid, 1);
  CHECK(agent.epsilon() == 1.0);
  agent.decay_epsilon();
  CHECK(agent.epsilon() == doctest::Approx(0.97));
  for (int i = 0; i < 500; ++i) agent.decay_epsilon();
  CHECK(agent.epsilon() == 0.005);
}

TEST_CASE("first episode creates the first occupant") {
  SmartHome env = home();
  PoshsAgent agent(agent_config(), kGrid, 9);
  const EpisodeLog log = run_episode(env, occupant_a(), agent, 100);
  CHECK(log.identification.is_new);
  CHECK(log.pool_size == 1);
  CHECK(agent.pool().size() == 1);
  CHECK(agent.episodes() == 1);
  CHECK(log.steps == static_cast<int>(log.belief_trajectory.size()));
  CHECK(log.steps == static_cast<int>(log.transitions.size()) + 1);
  CHECK(agent.pool().at(0).q_table.size() > 0);
}

TEST_CASE("learn=false leaves the pool untouched") {
  SmartHome env = home();
  PoshsAgent agent(agent_config(), kGrid, 9);
  run_episode(env, occupant_a(), agent, 100);
  const OccupantPool before = agent.pool();
  const EpisodeLog log = run_episode(env, occupant_a(), agent, 101, EpisodeOptions{false});
  CHECK(agent.pool().size() == before.size());
  CHECK(agent.pool().at(0).q_table == before.at(0).q_table);
  CHECK(agent.pool().at(0).profile == before.at(0).profile);
  CHECK_FALSE(log.identification.is_new);
}

TEST_CASE("run_episode is deterministic") {
  auto play = [] {
    SmartHome env = home();
    PoshsAgent agent(agent_config(), kGrid, 42);
    std::vector<double> rewards;
    for (std::uint64_t s = 0; s < 8; ++s) rewards.push_back(run_episode(env, occupant_a(), agent, s).occupant_reward);
    return std::make_pair(rewards, agent.pool().at(0).q_table);
  };
  const auto a = play();
  const auto b = play();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("one occupant reduces to standard Q-learning") {
  SmartHome env = home();
  AgentConfig cfg = agent_config();
  cfg.jsd.tau = 1.0;  // above the divergence ceiling: the pool stays at one entry
  PoshsAgent agent(cfg, kGrid, 77);
  ReferenceQ ref{{}, cfg.policy.alpha, cfg.policy.gamma};

  for (std::uint64_t s = 0; s < 30; ++s) {
    const EpisodeLog log = run_episode(env, occupant_a(), agent, 500 + s);
    REQUIRE(agent.pool().size() == 1);
    for (const Transition& t : log.transitions) {
      REQUIRE(t.belief == std::vector<double>{1.0});
      ref.learn(observation_key(kGrid, t.obs), static_cast<int>(t.action), t.reward,
                observation_key(kGrid, t.next), t.terminal);
    }
    // decisions come from Q_net, which with a single certain belief is the table itself
    const ShsQTable& q = agent.pool().at(0).q_table;
    for (const auto& [k, row] : q.rows()) {
      const std::array<const ShsQTable*, 1> t{&q};
      REQUIRE(q_net(k, init_uniform(1), t) == row);
    }
  }
  const ShsQTable& q = agent.pool().at(0).q_table;
  REQUIRE(q.size() == ref.q.size());
  for (const auto& [k, row] : q.rows()) {
    REQUIRE(ref.q.count(k) == 1);
    CHECK(row == ref.q.at(k));  // bitwise
  }
}

TEST_CASE("unassisted episode") {
  SmartHome env = home();
  const EpisodeLog log = run_unassisted_episode(env, occupant_a(), 12);
  CHECK_FALSE(log.assisted);
  CHECK(log.transitions.empty());
  CHECK(log.steps > 0);
  const EpisodeLog again = run_unassisted_episode(env, occupant_a(), 12);
  CHECK(again.occupant_reward == log.occupant_reward);
  CHECK(again.th_changes == log.th_changes);
}
