#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "contagion.hpp"
#include "errors.hpp"
#include "game.hpp"
#include "network.hpp"

// JSON documents for games and results.
//
// Game document:
//   network:  {"path": "file.txt"} | {"generator": {"model": "ba", "n", "m", "seed"}}
//             | {"nodes": N, "edges": [[u, v], ...]}
//   weights:  "unit" | {"entries": [[i, j, w], ...]}        (optional, default unit)
//   c:        rational                                      (optional, default 1)
//   global:   {"alpha": a} | {"tables": [[[p, v], ...], ...]} (optional, default alpha 0)
//   seeds:    [i, ...] | {"random": k, "seed": x}            (starting set S)
//   infected: [i, ...]                                      (optional, default D = S)
//   q:        [q, ...]                                      (optional)
// Rationals are written as strings ("3/4", "0.75") or JSON numbers.
namespace netcontagion::io {

using json = nlohmann::json;

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParameterError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + p.string());
  out << text;
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return Rational::parse(j.dump());
  throw ParseError("expected a rational, got " + j.dump());
}

inline json rational_to_json(const Rational& r) { return r.to_string(); }

inline std::vector<Node> nodes_from_json(const json& j, std::size_t n, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be a list of node indices");
  std::vector<Node> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || static_cast<std::size_t>(v.get<std::int64_t>()) >= n)
      throw ParseError(std::string(what) + ": invalid node " + v.dump());
    out.push_back(static_cast<Node>(v.get<std::int64_t>()));
  }
  return out;
}

inline json set_to_json(const PlayerSet& s) { return s.members(); }

// --- networks -----------------------------------------------------------------

inline Network network_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ParseError("network spec must be an object");
  if (j.contains("path")) {
    std::filesystem::path p = j.at("path").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return load_edge_list(read_file(p));
  }
  if (j.contains("generator")) {
    const json& g = j.at("generator");
    const std::string model = g.value("model", "ba");
    if (model != "ba") throw ParameterError("unknown generator model '" + model + "'");
    return generate_ba(g.at("n").get<std::size_t>(), g.at("m").get<std::size_t>(), RngSeed{g.value("seed", std::uint64_t{0})});
  }
  if (j.contains("edges")) {
    std::vector<Edge> edges;
    std::size_t n = j.value("nodes", std::size_t{0});
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair, got " + e.dump());
      auto u = e[0].get<std::int64_t>(), v = e[1].get<std::int64_t>();
      if (u < 0 || v < 0) throw ParseError("negative node index in " + e.dump());
      edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
      n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(u, v)) + 1);
    }
    return Network(n, edges);
  }
  throw ParseError("network spec needs one of path, generator, edges");
}

inline json network_to_json(const Network& net) {
  json edges = json::array();
  for (auto [u, v] : net.edges()) edges.push_back({u, v});
  return {{"nodes", net.node_count()}, {"edges", edges}};
}

// --- games --------------------------------------------------------------------

struct GameSpec {
  GameConfig config;
  PlayerSet seeds;
  std::vector<Rational> q;
};

inline InfluenceWeights weights_from_json(const json& j, const Network& net) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "unit")) return InfluenceWeights::unit();
  if (!j.is_object() || !j.contains("entries")) throw ParseError("weights must be \"unit\" or {\"entries\": [...]}");
  std::vector<std::tuple<Node, Node, Rational>> entries;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw ParseError("weight entry must be [i, j, w], got " + e.dump());
    entries.emplace_back(e[0].get<Node>(), e[1].get<Node>(), rational_from_json(e[2]));
  }
  return InfluenceWeights::from_entries(net, entries);
}

inline json weights_to_json(const InfluenceWeights& w, const Network& net) {
  if (w.is_unit()) return "unit";
  json entries = json::array();
  for (Node i = 0; i < net.node_count(); ++i) {
    auto nb = net.neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      Rational v = w.at_slot(net.slot_begin(i) + k);
      if (v != Rational(1)) entries.push_back({i, nb[k], rational_to_json(v)});
    }
  }
  return {{"entries", entries}};
}

inline GlobalEffect global_from_json(const json& j) {
  if (j.is_null()) return GlobalEffect::none();
  if (j.contains("alpha")) return GlobalEffect::parametric(rational_from_json(j.at("alpha")));
  if (j.contains("tables")) {
    std::vector<StepTable> tables;
    for (const auto& t : j.at("tables")) {
      std::vector<std::pair<Rational, Rational>> steps;
      for (const auto& s : t) steps.emplace_back(rational_from_json(s.at(0)), rational_from_json(s.at(1)));
      tables.emplace_back(std::move(steps));
    }
    return GlobalEffect::tabular(std::move(tables));
  }
  throw ParseError("global must be {\"alpha\": a} or {\"tables\": [...]}");
}

inline json global_to_json(const GlobalEffect& g) {
  if (g.is_parametric()) return {{"alpha", rational_to_json(g.as_parametric().alpha)}};
  json tables = json::array();
  for (const auto& t : g.as_tabular().tables) {
    json steps = json::array();
    for (const auto& [p, v] : t.steps()) steps.push_back({rational_to_json(p), rational_to_json(v)});
    tables.push_back(steps);
  }
  return {{"tables", tables}};
}

inline PlayerSet seeds_from_json(const json& j, std::size_t n) {
  if (j.is_null()) return PlayerSet(n);
  if (j.is_object()) {
    std::size_t k = j.at("random").get<std::size_t>();
    if (k > n) throw ParameterError("cannot draw " + std::to_string(k) + " seeds from " + std::to_string(n) + " players");
    Rng rng(RngSeed{j.value("seed", std::uint64_t{0})});
    auto picks = rng.sample_without_replacement<Node>(n, k);
    return PlayerSet(n, std::span<const Node>(picks));
  }
  auto v = nodes_from_json(j, n, "seeds");
  return PlayerSet(n, std::span<const Node>(v));
}

inline GameSpec game_from_json(const json& doc, const std::filesystem::path& base_dir = {},
                               ConnectivityPolicy policy = ConnectivityPolicy::warn) {
  if (!doc.is_object()) throw ParseError("game document must be a JSON object");
  if (!doc.contains("network")) throw ParseError("game document needs a network");
  auto net = std::make_shared<const Network>(network_from_json(doc.at("network"), base_dir));
  const std::size_t n = net->node_count();
  PlayerSet seeds = seeds_from_json(doc.value("seeds", json()), n);
  PlayerSet infected = seeds;
  if (doc.contains("infected")) {
    auto d = nodes_from_json(doc.at("infected"), n, "infected");
    infected = PlayerSet(n, std::span<const Node>(d));
  }
  Rational c = doc.contains("c") ? rational_from_json(doc.at("c")) : Rational(1);
  GameConfig cfg(net, weights_from_json(doc.value("weights", json()), *net), c, global_from_json(doc.value("global", json())),
                 infected, policy);
  std::vector<Rational> qs;
  if (doc.contains("q"))
    for (const auto& q : doc.at("q")) qs.push_back(rational_from_json(q));
  return {std::move(cfg), std::move(seeds), std::move(qs)};
}

inline json game_to_json(const GameConfig& cfg, const PlayerSet* seeds = nullptr) {
  json doc = {{"network", network_to_json(cfg.network())},
              {"weights", weights_to_json(cfg.weights(), cfg.network())},
              {"c", rational_to_json(cfg.c())},
              {"global", global_to_json(cfg.global())},
              {"infected", set_to_json(cfg.infected())}};
  if (seeds) doc["seeds"] = set_to_json(*seeds);
  return doc;
}

// --- results ------------------------------------------------------------------

inline json rational_report(const Rational& r) {
  return {{"num", r.num()}, {"den", r.den()}, {"exact", r.to_string()}, {"decimal", r.to_decimal(6)}};
}

inline json threshold_to_json(const ThresholdResult& r, bool verbose = false) {
  json stages = json::array();
  for (std::size_t n = 0; n < r.stages.size(); ++n) {
    const auto& st = r.stages[n];
    json s = {{"q", rational_report(st.q)}, {"equilibrium_size", st.equilibrium_size}};
    if (st.marginal) s["marginal_player"] = *st.marginal;
    if (verbose) s["equilibrium_members"] = set_to_json(r.equilibrium(n));
    stages.push_back(std::move(s));
  }
  return {{"q_star", rational_report(r.q_star)}, {"stages", stages}, {"subsets_checked", r.subsets_checked}};
}

inline json cascade_to_json(const CascadeResult& r, bool verbose = false) {
  json out = {{"final_size", r.final.size()}, {"steps", r.steps()}, {"subsets_checked", r.subsets_checked}};
  if (verbose) {
    out["final_members"] = set_to_json(r.final);
    out["waves"] = r.waves;
  }
  return out;
}

}  // namespace netcontagion::io
