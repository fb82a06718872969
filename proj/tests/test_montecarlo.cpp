#include <gtest/gtest.h>

#include <map>

#include "netcontagion/montecarlo.hpp"

using namespace netcontagion;

namespace {

mc::ExperimentGrid tiny() {
  mc::ExperimentGrid g;
  g.network_size = 60;
  g.m_values = {2, 4};
  g.alpha_values = {Rational(0), Rational(1, 2), Rational(1)};
  g.networks_per_m = 3;
  g.sets_per_size = 4;
  g.set_sizes = mc::size_range(5, 50, 5);
  g.q_grid = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  g.master_seed = RngSeed{99};
  return g;
}

mc::DepthCurve synthetic(const std::vector<double>& depths) {
  mc::DepthCurve c{5, Rational(0), Rational(1, 2), 100, {}};
  for (std::size_t k = 0; k < depths.size(); ++k) {
    mc::CurvePoint p;
    p.set_size = 10 * (k + 1);
    p.fraction = p.set_size / 100.0;
    p.count = 1;
    p.mean_depth = depths[k];
    p.mean_virality = depths[k] - p.fraction;
    c.points.push_back(p);
  }
  return c;
}

}  // namespace

TEST(Grid, CountsAndPresets) {
  auto g = tiny();
  EXPECT_EQ(g.draw_count(), 2u * 3 * 10 * 4);
  EXPECT_EQ(g.run_count(), g.draw_count() * 3);
  EXPECT_EQ(mc::ExperimentGrid::preset("acceptance").run_count(), 39600u);
  EXPECT_EQ(mc::ExperimentGrid::preset("paper").set_sizes.size(), 99u);
  EXPECT_THROW(mc::ExperimentGrid::preset("huge"), ParameterError);
  EXPECT_EQ(mc::size_range(10, 30, 10), (std::vector<std::size_t>{10, 20, 30}));
}

TEST(Grid, InvalidGridsRejected) {
  auto g = tiny();
  g.set_sizes.clear();
  EXPECT_THROW(g.validate(), ParameterError);
  EXPECT_THROW(mc::run_grid(g), ParameterError);
  g = tiny();
  g.m_values = {60};
  EXPECT_THROW(g.validate(), ParameterError);
  g = tiny();
  g.alpha_values = {Rational(3, 2)};
  EXPECT_THROW(g.validate(), ParameterError);
  g = tiny();
  g.set_sizes = {60};
  EXPECT_THROW(g.validate(), ParameterError);
}

TEST(Grid, JsonRoundTrip) {
  auto g = tiny();
  auto back = mc::grid_from_json(mc::grid_to_json(g));
  EXPECT_EQ(mc::grid_to_json(back), mc::grid_to_json(g));
  auto ranged = mc::grid_from_json(nlohmann::json{{"set_sizes", {{"start", 10}, {"stop", 40}, {"step", 15}}}, {"alpha_values", {"1/4", 1}}});
  EXPECT_EQ(ranged.set_sizes, (std::vector<std::size_t>{10, 25, 40}));
  EXPECT_EQ(ranged.alpha_values, (std::vector<Rational>{Rational(1, 4), Rational(1)}));
}

TEST(Seeds, StreamsAreIndependentOfGridShape) {
  auto g = tiny();
  auto a = mc::grid_seed_set(g, 2, 1, 15, 3);
  auto h = g;
  h.set_sizes = {15};
  h.alpha_values = {Rational(1)};
  EXPECT_EQ(mc::grid_seed_set(h, 2, 1, 15, 3), a);
  EXPECT_EQ(mc::grid_network(g, 4, 2).edges(), mc::grid_network(h, 4, 2).edges());
  EXPECT_EQ(a.size(), 15u);
  EXPECT_NE(mc::grid_seed_set(g, 2, 1, 15, 2), a);
}

TEST(RunGrid, DeterministicAcrossWorkerCounts) {
  auto g = tiny();
  auto one = mc::run_grid(g, 1);
  auto many = mc::run_grid(g, 5);
  ASSERT_EQ(one.size(), g.run_count());
  EXPECT_EQ(mc::records_csv(one), mc::records_csv(many));
  EXPECT_EQ(mc::records_jsonl(one), mc::records_jsonl(many));
}

TEST(RunGrid, ThresholdsRiseWithAlphaForTheSameSet) {
  auto g = tiny();
  auto rs = mc::run_grid(g, 2);
  // Records for one draw are adjacent, alpha ascending.
  for (std::size_t k = 0; k + 2 < rs.size(); k += 3) {
    EXPECT_LE(rs[k].q_star, rs[k + 1].q_star);
    EXPECT_LE(rs[k + 1].q_star, rs[k + 2].q_star);
    EXPECT_LE(rs[k].subsets_checked, g.network_size - rs[k].set_size);
  }
}

TEST(RunGrid, NestedSeedSetsGiveMonotoneThresholds) {
  auto g = tiny();
  auto net = std::make_shared<const Network>(mc::grid_network(g, 2, 0));
  Rng rng(RngSeed{5});
  auto order = rng.sample_without_replacement<Node>(g.network_size, g.network_size);
  Rational prev(0);
  for (std::size_t k = 1; k < g.network_size; k += 6) {
    PlayerSet s(g.network_size, std::span<const Node>(order.data(), k));
    auto cfg = GameConfig::parametric(net, Rational(1, 2), s, ConnectivityPolicy::silent);
    auto q = full_contagion_threshold(cfg, s).q_star;
    EXPECT_GE(q, prev) << "size " << k;
    prev = q;
  }
}

TEST(Aggregate, MeansAndWarnings) {
  auto g = tiny();
  auto rs = mc::run_grid(g, 1);
  auto t = mc::average_thresholds(rs, g.network_size);
  EXPECT_EQ(t.rows.size(), 2u * 3 * 10);
  auto row = mc::find_row(t, 2, Rational(1, 2), 25);
  ASSERT_TRUE(row);
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : rs)
    if (r.m == 2 && r.alpha == Rational(1, 2) && r.set_size == 25) {
      sum += r.q_star.to_double();
      ++n;
    }
  EXPECT_EQ(row->count, n);
  EXPECT_NEAR(row->mean, sum / n, 1e-12);
  EXPECT_DOUBLE_EQ(row->fraction, 25.0 / 60);
  EXPECT_FALSE(mc::find_row(t, 3, Rational(0), 25));
}

TEST(Aggregate, DepthCurveMatchesRecords) {
  auto g = tiny();
  auto rs = mc::run_grid(g, 1);
  auto c = mc::depth_curve(rs, 4, Rational(0), Rational(1, 2), g.network_size);
  ASSERT_EQ(c.points.size(), g.set_sizes.size());
  for (const auto& p : c.points) {
    EXPECT_EQ(p.count, g.networks_per_m * g.sets_per_size);
    EXPECT_GE(p.mean_depth, p.fraction - 1e-12);
    EXPECT_LE(p.mean_depth, 1.0);
  }
  // Depth at q = 0 is full everywhere.
  auto zero = mc::depth_curve(rs, 4, Rational(0), Rational(0), g.network_size);
  for (const auto& p : zero.points) EXPECT_DOUBLE_EQ(p.mean_depth, 1.0);
}

TEST(Isotonic, PoolsViolators) {
  auto fit = mc::isotonic({0.1, 0.5, 0.3, 0.9}, {1, 1, 1, 1});
  EXPECT_EQ(fit, (std::vector<double>{0.1, 0.4, 0.4, 0.9}));
  auto weighted = mc::isotonic({1.0, 0.0}, {3, 1});
  EXPECT_DOUBLE_EQ(weighted[0], 0.75);
  EXPECT_DOUBLE_EQ(weighted[1], 0.75);
  EXPECT_EQ(mc::isotonic({0.2, 0.2, 0.3}, {1, 1, 1}), (std::vector<double>{0.2, 0.2, 0.3}));
}

TEST(InverseDepth, FirstSizeReachingTarget) {
  auto c = synthetic({0.2, 0.5, 0.96, 0.997, 1.0});
  EXPECT_DOUBLE_EQ(*mc::inverse_depth(c, 0.5), 0.2);
  EXPECT_DOUBLE_EQ(*mc::inverse_depth(c, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(*mc::inverse_depth(c, 1.0, mc::kTwoDecimals), 0.4);
  EXPECT_FALSE(mc::inverse_depth(synthetic({0.2, 0.3}), 0.9));
  EXPECT_THROW(mc::inverse_depth(c, 0.0), ParameterError);
  // A dip is smoothed out before reading.
  auto dip = synthetic({0.2, 0.6, 0.4, 0.9});
  EXPECT_DOUBLE_EQ(*mc::inverse_depth(dip, 0.5), 0.2);
}

TEST(Singularity, IntervalEndpoints) {
  // Virality = depth - fraction: 0, 0.005, 0.2, 0.6, 0.5.
  auto c = synthetic({0.1, 0.205, 0.5, 1.0, 1.0});
  auto iv = mc::singularity_interval(c);
  EXPECT_DOUBLE_EQ(*iv.lower, 0.3);
  EXPECT_DOUBLE_EQ(*iv.upper, 0.4);
  auto loose = mc::singularity_interval(c, 0.001, 0.95);
  EXPECT_DOUBLE_EQ(*loose.lower, 0.2);
  EXPECT_FALSE(mc::singularity_interval(synthetic({0.1, 0.2})).lower);
  EXPECT_THROW(mc::singularity_interval(c, 0.5, 0.4), ParameterError);
}

TEST(Writers, CsvShapes) {
  auto g = tiny();
  g.m_values = {2};
  g.set_sizes = {10, 20};
  auto rs = mc::run_grid(g, 1);
  auto csv = mc::records_csv(rs);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(rs.size() + 1));
  auto table = mc::thresholds_table_csv(mc::average_thresholds(rs, g.network_size), g);
  EXPECT_EQ(table.substr(0, table.find('\n')), "set_fraction,m2_alpha0.00,m2_alpha0.50,m2_alpha1.00");
  auto curves = mc::all_curves(rs, g);
  EXPECT_EQ(curves.size(), g.alpha_values.size() * g.q_grid.size());
  auto sing = mc::singularity_csv(curves);
  EXPECT_EQ(std::count(sing.begin(), sing.end(), '\n'), static_cast<long>(2 * curves.size() + 1));
  auto meta = mc::metadata(g, rs.size());
  EXPECT_EQ(meta.at("runs"), rs.size());
  EXPECT_TRUE(meta.contains("seed_scheme"));
}
