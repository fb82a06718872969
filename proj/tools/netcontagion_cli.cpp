#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "netcontagion/netcontagion.hpp"

namespace fs = std::filesystem;
using namespace netcontagion;
using json = nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 failure (verification, internal), 2 usage or bad input,
// 3 starting-set precondition.
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = std::string(netcontagion::detail::trim(item));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

json node_list(const std::string& text) {
  json out = json::array();
  for (const auto& tok : split_list(text)) {
    std::int64_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("invalid node index '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& tok : split_list(text)) out.push_back(Rational::parse(tok));
  return out;
}

// "i j w" per line, '#' comments.
json weight_entries_from_file(const fs::path& p) {
  json entries = json::array();
  std::istringstream in(io::read_file(p));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = netcontagion::detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 3) throw ParseError("expected 'i j w'", line_no);
    entries.push_back({netcontagion::detail::parse_index(toks[0], line_no), netcontagion::detail::parse_index(toks[1], line_no),
                       std::string(toks[2])});
  }
  return {{"entries", entries}};
}

// Game inputs shared by `threshold` and `depth`. Flags override the config file.
struct GameOptions {
  std::string config, network, ba, seeds, infected, weights, alpha, c;
  std::size_t random_seeds = 0;
  std::uint64_t seed_rng = 0;
  bool strict = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "game document (JSON)");
    app->add_option("--network", network, "edge-list file");
    app->add_option("--ba", ba, "generate the network instead: N:M:SEED");
    app->add_option("--seeds", seeds, "starting set S, comma-separated node ids");
    app->add_option("--random-seeds", random_seeds, "draw |S| players uniformly instead");
    app->add_option("--seed-rng", seed_rng, "seed for --random-seeds");
    app->add_option("--infected", infected, "exogenously infected set D (default: D = S)");
    app->add_option("--weights", weights, "weight file with 'i j w' lines (default: unit weights)");
    app->add_option("--alpha", alpha, "global effect intensity, phi_i(p) = alpha*c*d_i*p");
    app->add_option("--c", c, "miscoordination cost (default 1)");
    app->add_flag("--strict", strict, "reject disconnected networks");
  }

  io::GameSpec load() const {
    json doc = json::object();
    fs::path base;
    if (!config.empty()) {
      doc = json::parse(io::read_file(config));
      base = fs::path(config).parent_path();
    }
    if (!network.empty()) doc["network"] = {{"path", fs::absolute(network).string()}};
    if (!ba.empty()) {
      std::vector<std::string> f;
      std::stringstream ss(ba);
      for (std::string x; std::getline(ss, x, ':');) f.push_back(x);
      if (f.size() != 3) throw UsageError("--ba expects N:M:SEED");
      doc["network"] = {{"generator", {{"model", "ba"}, {"n", std::stoull(f[0])}, {"m", std::stoull(f[1])}, {"seed", std::stoull(f[2])}}}};
    }
    if (!doc.contains("network")) throw UsageError("no network given (use --network, --ba or --config)");
    if (!seeds.empty()) doc["seeds"] = node_list(seeds);
    if (random_seeds > 0) doc["seeds"] = {{"random", random_seeds}, {"seed", seed_rng}};
    if (!infected.empty()) doc["infected"] = node_list(infected);
    if (!weights.empty()) doc["weights"] = weight_entries_from_file(weights);
    if (!alpha.empty()) doc["global"] = {{"alpha", alpha}};
    if (!c.empty()) doc["c"] = c;
    return io::game_from_json(doc, base, strict ? ConnectivityPolicy::strict : ConnectivityPolicy::warn);
  }
};

void print_threshold(const ThresholdResult& r, const GameConfig& cfg, const PlayerSet& s, bool verbose) {
  std::cout << "players: " << cfg.node_count() << "  |S| = " << s.size() << "  |D| = " << cfg.infected().size() << '\n';
  std::cout << "q* = " << r.q_star.to_string() << "  (decimal " << r.q_star.to_decimal(6) << ")\n";
  std::cout << "subsets checked: " << r.subsets_checked << "  (bound |I \\ S| = " << cfg.node_count() - s.size() << ")\n";
  std::cout << "stage  q_n (exact)  q_n (decimal)  |A_{n+1}|  marginal\n";
  for (std::size_t n = 0; n < r.stages.size(); ++n) {
    const auto& st = r.stages[n];
    std::cout << "  " << n << "  " << st.q.to_string() << "  " << st.q.to_decimal(6) << "  " << st.equilibrium_size << "  "
              << (st.marginal ? std::to_string(*st.marginal) : "-") << '\n';
    if (verbose) std::cout << "      members " << r.equilibrium(n).to_string() << '\n';
  }
}

int cmd_generate(std::size_t n, std::size_t m, std::uint64_t seed, const std::string& out) {
  Network net = generate_ba(n, m, RngSeed{seed});
  std::ostringstream comment;
  comment << "barabasi-albert n=" << n << " m=" << m << " seed=" << seed << " core=" << kBaCoreConvention;
  std::string text = save_edge_list(net, comment.str());
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    io::write_file(out, text);
    std::cerr << "wrote " << net.edge_count() << " edges on " << n << " nodes to " << out << '\n';
  }
  return 0;
}

int cmd_threshold(const GameOptions& opt, bool as_json, bool verbose) {
  auto game = opt.load();
  auto r = full_contagion_threshold(game.config, game.seeds);
  if (as_json) {
    json out = io::threshold_to_json(r, verbose);
    out["players"] = game.config.node_count();
    out["seeds"] = io::set_to_json(game.seeds);
    std::cout << out.dump(2) << '\n';
  } else {
    print_threshold(r, game.config, game.seeds, verbose);
  }
  return 0;
}

int cmd_depth(const GameOptions& opt, const std::string& qlist, bool as_json, bool verbose) {
  auto game = opt.load();
  std::vector<Rational> qs = qlist.empty() ? game.q : rational_list(qlist);
  if (qs.empty()) qs = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  const auto& cfg = game.config;
  auto thr = full_contagion_threshold(cfg, game.seeds);
  DepthFunction df(thr, cfg.node_count());
  const Rational seed_share(static_cast<std::int64_t>(game.seeds.size()), static_cast<std::int64_t>(cfg.node_count()));
  json rows = json::array();
  if (!as_json) std::cout << "q* = " << thr.q_star.to_string() << "  (decimal " << thr.q_star.to_decimal(6) << ")\n"
                          << "q  depth  depth(decimal)  virality  virality(decimal)\n";
  for (const auto& q : qs) {
    Rational d = df.at(q);
    Rational v = d - seed_share;
    if (as_json) {
      json row = {{"q", io::rational_report(q)}, {"depth", io::rational_report(d)}, {"virality", io::rational_report(v)},
                  {"equilibrium_size", df.size_at(q)}};
      if (verbose) row["equilibrium_members"] = io::set_to_json(cascade(cfg, game.seeds, q).final);
      rows.push_back(row);
    } else {
      std::cout << q.to_string() << "  " << d.to_string() << "  " << d.to_decimal(6) << "  " << v.to_string() << "  "
                << v.to_decimal(6) << '\n';
      if (verbose) std::cout << "    members " << cascade(cfg, game.seeds, q).final.to_string() << '\n';
    }
  }
  if (as_json) {
    json out = {{"q_star", io::rational_report(thr.q_star)}, {"rows", rows}};
    json bps = json::array();
    for (std::size_t k = 0; k < df.breakpoints().size(); ++k)
      bps.push_back({{"q", io::rational_report(df.breakpoints()[k])}, {"equilibrium_size", df.sizes()[k]}});
    out["breakpoints"] = bps;
    std::cout << out.dump(2) << '\n';
  }
  return 0;
}

void write_plots(const fs::path& dir, const std::vector<mc::RunRecord>& records, const mc::AggregateTable& table,
                 const std::vector<mc::DepthCurve>& curves, const mc::ExperimentGrid& g) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const double n = static_cast<double>(g.network_size);
  for (auto m : g.m_values)
    for (const auto& a : g.alpha_values) {
      svg::Series dots{"runs", {}, "#1f77b4", true};
      std::vector<const mc::RunRecord*> rs;
      for (const auto& r : records)
        if (r.m == m && r.alpha == a) rs.push_back(&r);
      const std::size_t stride = std::max<std::size_t>(1, rs.size() / 20000);  // keep files small
      for (std::size_t k = 0; k < rs.size(); k += stride)
        dots.points.emplace_back(static_cast<double>(rs[k]->set_size) / n, rs[k]->q_star.to_double());
      svg::Series mean{"mean q*", {}, "#000000", false};
      for (const auto& row : table.rows)
        if (row.m == m && row.alpha == a) mean.points.emplace_back(row.fraction, row.mean);
      std::string name = "thresholds_m" + std::to_string(m) + "_alpha" + a.to_decimal(2) + ".svg";
      io::write_file(dir / name, svg::chart("Contagion thresholds, m=" + std::to_string(m) + ", alpha=" + a.to_decimal(2),
                                            "starting set size (fraction)", "q*", {dots, mean}));
    }
  for (auto m : g.m_values)
    for (const auto& q : g.q_grid) {
      std::vector<svg::Series> lines;
      std::size_t k = 0;
      for (const auto& c : curves) {
        if (c.m != m || c.q != q) continue;
        svg::Series s{"alpha=" + c.alpha.to_decimal(2), {}, palette[k++ % 5], false};
        for (const auto& p : c.points) s.points.emplace_back(p.fraction, p.mean_depth);
        lines.push_back(std::move(s));
      }
      std::string name = "depth_m" + std::to_string(m) + "_q" + q.to_decimal(2) + ".svg";
      io::write_file(dir / name, svg::chart("Mean contagion depth, m=" + std::to_string(m) + ", q=" + q.to_decimal(2),
                                            "starting set size (fraction)", "depth", lines));
    }
}

int cmd_montecarlo(const std::string& config, const std::string& preset, const std::string& out_dir, std::size_t workers,
                   std::optional<std::uint64_t> seed, bool plots, bool quiet) {
  if (out_dir.empty()) throw UsageError("--out is required");
  mc::ExperimentGrid g = mc::ExperimentGrid::preset(preset);
  if (!config.empty()) g = mc::grid_from_json(json::parse(io::read_file(config)), g);
  if (seed) g.master_seed = RngSeed{*seed};
  try {
    g.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (!quiet) std::cerr << "running " << g.run_count() << " threshold computations on " << workers << " worker(s)\n";
  std::size_t last_pct = 0;
  auto progress = [&](std::size_t done, std::size_t total) {
    std::size_t pct = done * 100 / total;
    if (!quiet && pct >= last_pct + 10) {
      last_pct = pct;
      std::cerr << "  " << pct << "%\n";
    }
  };
  auto records = mc::run_grid(g, workers, progress);
  auto table = mc::average_thresholds(records, g.network_size);
  auto curves = mc::all_curves(records, g);
  const fs::path dir = out_dir;
  io::write_file(dir / "runs.csv", mc::records_csv(records));
  io::write_file(dir / "runs.jsonl", mc::records_jsonl(records));
  io::write_file(dir / "thresholds.csv", mc::thresholds_csv(table));
  io::write_file(dir / "thresholds_table.csv", mc::thresholds_table_csv(table, g));
  io::write_file(dir / "depth_curves.csv", mc::depth_curves_csv(curves));
  io::write_file(dir / "inverse_depth.csv", mc::inverse_depth_csv(curves));
  io::write_file(dir / "inverse_depth_two_decimals.csv", mc::inverse_depth_csv(curves, mc::kTwoDecimals));
  io::write_file(dir / "singularity.csv", mc::singularity_csv(curves));
  io::write_file(dir / "metadata.json", mc::metadata(g, records.size()).dump(2) + "\n");
  if (plots) write_plots(dir / "plots", records, table, curves, g);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  if (!quiet) std::cerr << "wrote " << records.size() << " records to " << dir.string() << '\n';
  return 0;
}

int cmd_verify(std::size_t max_nodes, std::size_t trials, std::uint64_t seed, bool inject_fault, bool as_json) {
  if (max_nodes < 4 || max_nodes > oracle::kMaxPlayers)
    throw UsageError("--max-nodes must lie in [4, " + std::to_string(oracle::kMaxPlayers) + "]");
  if (trials == 0) {
    std::cerr << "warning: zero trials requested; nothing was checked (vacuous pass)\n";
    if (as_json) std::cout << json{{"instances", 0}, {"passed", true}, {"vacuous", true}}.dump(2) << '\n';
    return 0;
  }
  auto sut = inject_fault ? verify::CascadeFn(verify::first_wave_only) : verify::CascadeFn(verify::reference_cascade);
  auto t = verify::run_suite(RngSeed{seed}, trials, sut, max_nodes);
  if (as_json) {
    json props = json::object();
    for (const auto& [k, v] : t.checks) props[k] = {{"checks", v}, {"failures", t.failures[k]}};
    json cex = json::array();
    for (const auto& f : t.examples) cex.push_back({{"property", f.property}, {"counterexample", f.counterexample}});
    std::cout << json{{"instances", t.instances}, {"passed", t.ok()}, {"properties", props}, {"counterexamples", cex}}.dump(2)
              << '\n';
  } else {
    std::cout << "instances: " << t.instances << '\n';
    for (const auto& [k, v] : t.checks) {
      const auto fails = t.failures[k];
      std::cout << (fails ? "FAIL " : "ok   ") << k << ": " << v << " checks, " << fails << " failures\n";
    }
    for (const auto& f : t.examples) std::cout << "counterexample (" << f.property << "): " << f.counterexample.dump() << '\n';
  }
  return t.ok() ? 0 : kExitFailure;
}

void report_error(bool as_json, const std::string& type, const std::string& message, json extra = json::object()) {
  if (as_json) {
    json e = {{"type", type}, {"message", message}};
    e.update(extra);
    std::cout << json{{"error", e}}.dump() << '\n';
  } else {
    std::cerr << "error: " << message << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network contagion with local and global effects: thresholds, depth and Monte Carlo experiments"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "print errors as a JSON object on stdout");

  auto* gen = app.add_subcommand("generate", "write a Barabasi-Albert network as an edge list");
  std::size_t gen_n = 0, gen_m = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("-n", gen_n, "number of nodes")->required();
  gen->add_option("-m", gen_m, "links per new node")->required();
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  GameOptions thr_opt, depth_opt;
  bool thr_json = false, thr_verbose = false, depth_json = false, depth_verbose = false;
  auto* thr = app.add_subcommand("threshold", "contagion threshold q* and its stage sequence");
  thr_opt.attach(thr);
  thr->add_flag("--json", thr_json, "JSON output");
  thr->add_flag("-v,--verbose", thr_verbose, "include equilibrium member lists");

  auto* depth = app.add_subcommand("depth", "contagion depth and virality at given q");
  depth_opt.attach(depth);
  std::string depth_q;
  depth->add_option("--q", depth_q, "comma-separated q values (default: config q list or 1/4,1/2,3/4)");
  depth->add_flag("--json", depth_json, "JSON output");
  depth->add_flag("-v,--verbose", depth_verbose, "include equilibrium member lists");

  auto* mcc = app.add_subcommand("montecarlo", "run an experiment grid and write CSV, JSONL and SVG outputs");
  std::string mc_config, mc_preset = "desk", mc_out;
  std::size_t mc_workers = 0;
  std::optional<std::uint64_t> mc_seed;
  bool mc_no_plots = false, mc_quiet = false;
  mcc->add_option("--config", mc_config, "grid document (JSON); keys override the preset");
  mcc->add_option("--preset", mc_preset, "desk, paper or acceptance");
  mcc->add_option("--out", mc_out, "output directory")->required();
  mcc->add_option("--workers", mc_workers, "worker threads (default: hardware concurrency)");
  mcc->add_option("--seed", mc_seed, "master seed override");
  mcc->add_flag("--no-plots", mc_no_plots, "skip SVG output");
  mcc->add_flag("-q,--quiet", mc_quiet, "no progress output");

  auto* ver = app.add_subcommand("verify", "cross-check the engine against brute force on random small games");
  std::size_t ver_nodes = 12, ver_trials = 500;
  std::uint64_t ver_seed = 1;
  bool ver_fault = false, ver_json = false;
  ver->add_option("--max-nodes", ver_nodes, "largest instance size (4..20)");
  ver->add_option("--trials", ver_trials, "number of random instances");
  ver->add_option("--seed", ver_seed, "master seed");
  ver->add_flag("--inject-fault", ver_fault, "check a deliberately broken cascade (stops after one wave)");
  ver->add_flag("--json", ver_json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (json_errors || std::find(argv, argv + argc, std::string("--json-errors")) != argv + argc) {
      report_error(true, "usage", e.what());
      return kExitUsage;
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_n, gen_m, gen_seed, gen_out);
    if (*thr) return cmd_threshold(thr_opt, thr_json, thr_verbose);
    if (*depth) return cmd_depth(depth_opt, depth_q, depth_json, depth_verbose);
    if (*mcc) return cmd_montecarlo(mc_config, mc_preset, mc_out, mc_workers, mc_seed, !mc_no_plots, mc_quiet);
    if (*ver) return cmd_verify(ver_nodes, ver_trials, ver_seed, ver_fault, ver_json);
  } catch (const UsageError& e) {
    report_error(json_errors, "usage", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    report_error(json_errors, "parse", e.what(), e.line() ? json{{"line", e.line()}} : json::object());
    return kExitUsage;
  } catch (const json::exception& e) {
    report_error(json_errors, "parse", e.what());
    return kExitUsage;
  } catch (const ParameterError& e) {
    report_error(json_errors, "parameter", e.what());
    return kExitUsage;
  } catch (const PreconditionError& e) {
    report_error(json_errors, "precondition", e.what(), {{"player", e.player()}});
    return kExitPrecondition;
  } catch (const std::exception& e) {
    report_error(json_errors, "internal", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
