#include <gtest/gtest.h>

#include <memory>

#include "netcontagion/oracle.hpp"

using namespace netcontagion;

namespace {

GameConfig unit_game(Network net, Rational alpha = Rational(0), std::vector<Node> d = {}) {
  auto p = std::make_shared<const Network>(std::move(net));
  PlayerSet inf(p->node_count(), std::span<const Node>(d));
  return GameConfig::parametric(p, alpha, inf, ConnectivityPolicy::silent);
}

bool contains(const std::vector<PlayerSet>& v, const PlayerSet& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST(Oracle, EnumerateNashOnFourCycle) {
  auto plain = oracle::enumerate_nash(unit_game(make_cycle(4)), Rational(3, 4));
  EXPECT_FALSE(contains(plain, PlayerSet(4, {0})));
  EXPECT_TRUE(contains(plain, PlayerSet(4)));
  EXPECT_TRUE(contains(plain, PlayerSet::full(4)));
  // At q = 3/4 a member needs both neighbors: only the empty and full sets survive.
  EXPECT_EQ(plain.size(), 2u);

  auto with_d = oracle::enumerate_nash(unit_game(make_cycle(4), Rational(0), {0}), Rational(3, 4));
  EXPECT_TRUE(contains(with_d, PlayerSet(4, {0})));
  EXPECT_FALSE(contains(with_d, PlayerSet(4)));
  for (std::size_t k = 1; k < with_d.size(); ++k) EXPECT_LE(with_d[k - 1].size(), with_d[k].size());
}

TEST(Oracle, SmallestContaining) {
  auto g = unit_game(make_path(3), Rational(0), {1});
  EXPECT_EQ(oracle::smallest_nash_containing(g, PlayerSet(3, {1}), Rational(3, 4)), PlayerSet::full(3));
  auto c = unit_game(make_cycle(4), Rational(0), {0});
  EXPECT_EQ(oracle::smallest_nash_containing(c, PlayerSet(4, {0}), Rational(3, 4)), PlayerSet(4, {0}));
}

TEST(Oracle, BruteThreshold) {
  EXPECT_EQ(oracle::brute_threshold(unit_game(make_star(5), Rational(0), {0}), PlayerSet(5, {0})), Rational(1));
  EXPECT_EQ(oracle::brute_threshold(unit_game(make_cycle(4), Rational(0), {0}), PlayerSet(4, {0})), Rational(1, 2));
  auto cands = oracle::threshold_candidates(unit_game(make_cycle(4)));
  EXPECT_EQ(cands, (std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1)}));
}

TEST(Oracle, UniformCohesion) {
  Network c4 = make_cycle(4);
  EXPECT_TRUE(oracle::brute_uniform_cohesion(c4, PlayerSet(4, {1, 2, 3}), Rational(1, 2)));
  EXPECT_FALSE(oracle::brute_uniform_cohesion(c4, PlayerSet(4, {1, 2, 3}), Rational(2, 5)));
  EXPECT_FALSE(oracle::brute_uniform_cohesion(c4, PlayerSet::full(4), Rational(99, 100)));
}

TEST(Oracle, SizeGuard) {
  auto g = unit_game(make_cycle(21));
  EXPECT_THROW(oracle::enumerate_nash(g, Rational(1, 2)), SizeGuardError);
  EXPECT_THROW(oracle::brute_threshold(g, PlayerSet(21)), SizeGuardError);
  EXPECT_THROW(oracle::smallest_nash_containing(g, PlayerSet(21), Rational(1, 2)), SizeGuardError);
}
