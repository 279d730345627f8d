#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "poshs/identity.hpp"

using namespace poshs;

namespace {

PreferenceProfile flat(double mu_t, double mu_h, double sigma = 0.5,
                       ProfileVariant v = ProfileVariant::Activity12d) {
  PreferenceProfile::Slots s{};
  for (auto& slot : s) slot = {GaussianParams{mu_t, sigma}, GaussianParams{mu_h, sigma}};
  return PreferenceProfile(v, s);
}

std::vector<double> temps(const ThermalGrid& g) {
  std::vector<double> out;
  for (int i = 0; i < g.temp_points(); ++i) out.push_back(g.temperature(i));
  return out;
}

std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double t = 0.0;
  for (auto& x : p) t += (x = e(rng));
  for (auto& x : p) x /= t;
  return p;
}

const JsdConfig kCfg = JsdConfig::for_variant(ProfileVariant::Activity12d, ThermalGrid{});

}  // namespace

TEST_CASE("thresholds per variant") {
  ThermalGrid g;
  CHECK(JsdConfig::for_variant(ProfileVariant::Activity12d, g).tau == 0.20);
  CHECK(JsdConfig::for_variant(ProfileVariant::Episode4d, g).tau == 0.13);
}

TEST_CASE("disjoint support reaches ln 2") {
  const std::vector<double> p{1.0, 0.0, 0.0}, q{0.0, 0.0, 1.0};
  CHECK(jensen_shannon(p, q) == doctest::Approx(std::log(2.0)));
  CHECK(jensen_shannon_distance(p, q) == doctest::Approx(std::sqrt(std::log(2.0))));

  // scipy.spatial.distance.jensenshannon on the same discretised Gaussians
  const auto support = temps(ThermalGrid{});
  const auto a = discretize({17.0, 0.5}, support);
  const auto b = discretize({28.0, 0.5}, support);
  CHECK(std::sqrt(jensen_shannon(a, b)) == doctest::Approx(0.8325546111576978).epsilon(1e-12));
}

TEST_CASE("JSD properties on random distributions") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_pmf(rng, 31);
    const auto q = random_pmf(rng, 31);
    const double pq = jensen_shannon(p, q);
    REQUIRE(pq == doctest::Approx(jensen_shannon(q, p)).epsilon(1e-14));
    REQUIRE(jensen_shannon(p, p) == doctest::Approx(0.0).epsilon(1e-14));
    REQUIRE(pq >= 0.0);
    REQUIRE(pq <= std::log(2.0) + 1e-12);
    // entropy form and relative-entropy form agree
    REQUIRE(std::sqrt(pq) == doctest::Approx(jensen_shannon_distance(p, q)).epsilon(1e-9));
  }
}

TEST_CASE("profile divergence properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mu_t(17.0, 28.0), mu_h(25.0, 65.0), sd(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    PreferenceProfile::Slots sa{}, sb{};
    for (int a = 0; a < kActivityCount; ++a) {
      sa[a] = {GaussianParams{mu_t(rng), sd(rng)}, GaussianParams{mu_h(rng), sd(rng)}};
      sb[a] = {GaussianParams{mu_t(rng), sd(rng)}, GaussianParams{mu_h(rng), sd(rng)}};
    }
    const PreferenceProfile p(ProfileVariant::Activity12d, sa), q(ProfileVariant::Activity12d, sb);
    REQUIRE(jsd(p, q, kCfg) == doctest::Approx(jsd(q, p, kCfg)).epsilon(1e-14));
    REQUIRE(jsd(p, p, kCfg) < 1e-7);
    REQUIRE(jsd(p, q, kCfg) <= std::sqrt(std::log(2.0)) + 1e-12);
  }
  CHECK_THROWS_AS(jsd(flat(22, 45), flat(22, 45, 0.5, ProfileVariant::Episode4d), kCfg), VariantMismatchError);
}

TEST_CASE("amplification scales the divergence") {
  JsdConfig amp = kCfg;
  amp.amplification = 3.0;
  const auto p = flat(22, 45), q = flat(23, 50);
  CHECK(jsd(p, q, amp) == doctest::Approx(3.0 * jsd(p, q, kCfg)));
}

TEST_CASE("match") {
  OccupantPool pool;
  CHECK(match(pool, flat(22, 45), kCfg).is_new());

  const int a = pool.add(flat(22.0, 45.0));
  const int b = pool.add(flat(26.0, 45.0));
  const auto exact = match(pool, flat(26.0, 45.0), kCfg);
  REQUIRE_FALSE(exact.is_new());
  CHECK(*exact.id == b);
  CHECK(exact.divergence < 1e-7);

  // scipy jensenshannon on the temperature axis: 0.14003632 vs A, 0.83242284 vs B;
  // humidity is identical, so the profile divergence is half of each
  const auto near_a = match(pool, flat(22.2, 45.0), kCfg);
  REQUIRE_FALSE(near_a.is_new());
  CHECK(*near_a.id == a);
  CHECK(near_a.divergences[0] == doctest::Approx(0.14003632350763134 / 2).epsilon(1e-9));
  CHECK(near_a.divergences[1] == doctest::Approx(0.8324228385784087 / 2).epsilon(1e-9));
}

TEST_CASE("end of episode") {
  OccupantPool pool;
  const auto first = end_of_episode(pool, flat(22.0, 45.0), kCfg);
  CHECK(first.is_new);
  CHECK(pool.size() == 1);

  const auto again = end_of_episode(pool, flat(22.4, 45.0), kCfg);
  CHECK_FALSE(again.is_new);
  CHECK(again.id == 0);
  CHECK(pool.size() == 1);
  CHECK(pool.at(0).profile.at(0, Channel::Temperature).mu == doctest::Approx(22.2));

  // every channel mean at least 4 sigma away
  const auto other = end_of_episode(pool, flat(26.0, 65.0), kCfg);
  CHECK(other.match.divergence > kCfg.tau);
  CHECK(other.is_new);
  CHECK(other.id == 1);
  CHECK(pool.at(1).q_table.size() == 0);

  const auto d = divergence_matrix(pool, kCfg);
  CHECK(d[0][0] == 0.0);
  CHECK(d[0][1] == d[1][0]);
  CHECK(d[0][1] > kCfg.tau);
}
