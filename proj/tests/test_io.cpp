#include <gtest/gtest.h>

#include <filesystem>

#include "netcontagion/io.hpp"
#include "netcontagion/svg.hpp"

using namespace netcontagion;
using json = nlohmann::json;

TEST(Io, RationalsFromStringsAndNumbers) {
  EXPECT_EQ(io::rational_from_json(json("3/4")), Rational(3, 4));
  EXPECT_EQ(io::rational_from_json(json(2)), Rational(2));
  EXPECT_EQ(io::rational_from_json(json(0.25)), Rational(1, 4));
  EXPECT_THROW(io::rational_from_json(json::array()), ParseError);
  auto r = io::rational_report(Rational(2, 3));
  EXPECT_EQ(r.at("exact"), "2/3");
  EXPECT_EQ(r.at("decimal"), "0.666667");
}

TEST(Io, GameDocumentDefaults) {
  json doc = {{"network", {{"edges", {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}}}, {"seeds", {0}}};
  auto game = io::game_from_json(doc);
  EXPECT_EQ(game.config.node_count(), 4u);
  EXPECT_TRUE(game.config.weights().is_unit());
  EXPECT_EQ(game.config.c(), Rational(1));
  EXPECT_EQ(game.config.infected(), game.seeds);  // D = S unless given
  EXPECT_EQ(full_contagion_threshold(game.config, game.seeds).q_star, Rational(1, 2));
}

TEST(Io, GameDocumentFullForm) {
  json doc = {{"network", {{"generator", {{"model", "ba"}, {"n", 20}, {"m", 2}, {"seed", 3}}}}},
              {"seeds", {{"random", 4}, {"seed", 8}}},
              {"infected", json::array()},
              {"c", "2"},
              {"global", {{"alpha", "1/2"}}},
              {"q", {"1/4", 0.5}}};
  auto game = io::game_from_json(doc);
  EXPECT_EQ(game.seeds.size(), 4u);
  EXPECT_TRUE(game.config.infected().empty());
  EXPECT_EQ(game.config.c(), Rational(2));
  EXPECT_EQ(game.q, (std::vector<Rational>{Rational(1, 4), Rational(1, 2)}));
  EXPECT_EQ(io::game_from_json(doc).seeds, game.seeds);
}

TEST(Io, GameRoundTripPreservesThreshold) {
  auto net = std::make_shared<const Network>(make_cycle(6));
  std::vector<std::tuple<Node, Node, Rational>> entries = {{0, 1, Rational(3)}, {2, 3, Rational(1, 2)}};
  PlayerSet s(6);
  s.insert(0);
  s.insert(3);
  GameConfig cfg(net, InfluenceWeights::from_entries(*net, entries), Rational(1), GlobalEffect::parametric(Rational(1, 4)), s);
  auto doc = io::game_to_json(cfg, &s);
  auto back = io::game_from_json(doc);
  EXPECT_EQ(back.seeds, s);
  EXPECT_EQ(io::game_to_json(back.config, &back.seeds), doc);
  EXPECT_EQ(full_contagion_threshold(back.config, back.seeds).q_star, full_contagion_threshold(cfg, s).q_star);
}

TEST(Io, TabularGlobalEffectRoundTrip) {
  auto g = json::parse(R"({"tables": [[["0", "0"], ["1/2", "1/4"]]]})");
  auto eff = io::global_from_json(g);
  EXPECT_FALSE(eff.is_parametric());
  EXPECT_EQ(io::global_to_json(eff), g);
  EXPECT_THROW(io::global_from_json(json{{"beta", 1}}), ParseError);
}

TEST(Io, BadDocumentsRejected) {
  EXPECT_THROW(io::game_from_json(json::array()), ParseError);
  EXPECT_THROW(io::game_from_json(json{{"seeds", {0}}}), ParseError);
  json doc = {{"network", {{"edges", {{0, 1}, {1, 2}}}}}, {"seeds", {5}}};
  EXPECT_THROW(io::game_from_json(doc), ParseError);
  doc["seeds"] = {{"random", 9}};
  EXPECT_THROW(io::game_from_json(doc), ParameterError);
  EXPECT_THROW(io::network_from_json(json{{"generator", {{"model", "er"}, {"n", 5}, {"m", 1}}}}), ParameterError);
  EXPECT_THROW(io::network_from_json(json{{"edges", {{0}}}}), ParseError);
}

TEST(Io, NetworkFromRelativePath) {
  auto dir = std::filesystem::temp_directory_path() / "netcontagion_io_test";
  io::write_file(dir / "nets" / "p.txt", save_edge_list(make_path(5)));
  auto net = io::network_from_json(json{{"path", "nets/p.txt"}}, dir);
  EXPECT_EQ(net.edges(), make_path(5).edges());
  EXPECT_THROW(io::read_file(dir / "missing.txt"), ParameterError);
  std::filesystem::remove_all(dir);
}

TEST(Io, ThresholdReport) {
  auto net = std::make_shared<const Network>(make_path(4));
  PlayerSet s(4);
  s.insert(0);
  auto cfg = GameConfig::parametric(net, Rational(0), s);
  auto j = io::threshold_to_json(full_contagion_threshold(cfg, s), true);
  EXPECT_EQ(j.at("q_star").at("exact"), "1/2");
  EXPECT_EQ(j.at("subsets_checked"), 3);
  EXPECT_EQ(j.at("stages").back().at("equilibrium_members"), json({0, 1, 2, 3}));
}

TEST(Svg, ChartIsWellFormed) {
  svg::Series s{"a<b", {{0, 0}, {0.5, 0.25}, {1, 1}}, "#000000", false};
  auto text = svg::chart("t & u", "x", "y", {s});
  EXPECT_EQ(text.rfind("<svg", 0), 0u);
  EXPECT_NE(text.find("t &amp; u"), std::string::npos);
  EXPECT_NE(text.find("a&lt;b"), std::string::npos);
  EXPECT_NE(text.find("</svg>"), std::string::npos);
}
