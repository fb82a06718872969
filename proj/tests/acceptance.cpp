// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "netcontagion/netcontagion.hpp"

using namespace netcontagion;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string f3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string fopt(const std::optional<double>& x) { return x ? f3(*x) : "none"; }

bool near(const std::optional<double>& x, double target, double tol) {
  return x && std::abs(*x - target) <= tol + 1e-9;
}

std::string props_summary(const verify::Tally& t, std::initializer_list<const char*> props, bool& ok) {
  std::ostringstream os;
  ok = true;
  for (const char* p : props) {
    const auto n = t.checked(p);
    const bool good = n > 0 && t.ok(p);
    ok = ok && good;
    os << (os.tellp() > 0 ? " " : "") << p << '=' << n << (good ? "" : "(FAILED)");
  }
  return os.str();
}

}  // namespace

int main() {
  // Random small games against brute force.
  const std::size_t trials = 600;
  auto t0 = std::chrono::steady_clock::now();
  auto tally = verify::run_suite(RngSeed{20210901}, trials);
  const double suite_seconds = seconds_since(t0);
  for (const auto& f : tally.examples) std::cerr << "counterexample (" << f.property << "): " << f.counterexample.dump() << '\n';

  {
    bool ok = false;
    auto s = props_summary(tally,
                           {"smallest_nash", "fixed_points", "monotone_in_seeds", "monotone_in_q", "bootstrapping",
                            "global_containment", "threshold_exact", "stage_equilibria"},
                           ok);
    ok = ok && tally.instances >= 500 && suite_seconds < 120;
    report(ok, "theorem-suite", std::to_string(tally.instances) + " instances in " + f3(suite_seconds) + "s; " + s);
  }

  {
    bool ok = false;
    auto s = props_summary(tally, {"linear_bound"}, ok);
    // A path seeded at one end advances one node per stage: |I \ S| subsets.
    const std::size_t n = 12;
    auto cfg = GameConfig::parametric(std::make_shared<const Network>(make_path(n)), Rational(0), PlayerSet(n));
    PlayerSet s0(n);
    s0.insert(0);
    auto thr = full_contagion_threshold(cfg.with_infected(s0), s0);
    const bool equality = thr.subsets_checked == n - 1;
    report(ok && equality, "linear-bound",
           s + "; path of " + std::to_string(n) + " from an end: " + std::to_string(thr.subsets_checked) + " subsets, |I\\S| = " +
               std::to_string(n - 1));
  }

  {
    bool ok = false;
    auto s = props_summary(tally, {"cohesion_nash", "uniform_cohesion"}, ok);
    report(ok, "cohesion-suite", "alpha=0 unit-weight instances; " + s);
  }

  {
    bool ok = false;
    auto s = props_summary(tally, {"trivial_limits"}, ok);
    // Larger networks as well: q = 0 fills in at most two waves, empty start stays empty.
    std::size_t extra = 0;
    bool extra_ok = true;
    for (std::uint64_t k = 0; k < 20; ++k) {
      auto net = std::make_shared<const Network>(generate_ba(200, 1 + k % 5, RngSeed{k}));
      auto cfg = GameConfig::parametric(net, Rational(static_cast<std::int64_t>(k % 3), 2), PlayerSet(200), ConnectivityPolicy::silent);
      PlayerSet seed(200);
      seed.insert(static_cast<Node>(k * 7 % 200));
      auto full = cascade(cfg.with_infected(seed), seed, Rational(0));
      auto empty = cascade(cfg, PlayerSet(200), Rational(1, static_cast<std::int64_t>(k + 2)));
      extra_ok = extra_ok && full.final.is_full() && full.steps() <= 2 && empty.final.empty() && empty.steps() == 0;
      extra += 2;
    }
    report(ok && extra_ok, "trivial-limits", s + "; plus " + std::to_string(extra) + " checks on 200-node networks");
  }

  // Desk-scale experiment: I=1000, m=5, alpha in {0,1}, 10 networks x 20 sets.
  auto grid = mc::ExperimentGrid::preset("acceptance");
  t0 = std::chrono::steady_clock::now();
  auto records = mc::run_grid(grid, std::max(1u, std::thread::hardware_concurrency()));
  const double grid_seconds = seconds_since(t0);
  auto table = mc::average_thresholds(records, grid.network_size);

  {
    struct Cell { std::size_t size; Rational alpha; double ref; };
    const std::vector<Cell> cells = {{50, Rational(0), 0.226},  {100, Rational(0), 0.308}, {200, Rational(0), 0.405},
                                     {400, Rational(0), 0.584}, {50, Rational(1), 0.253},  {100, Rational(1), 0.376},
                                     {200, Rational(1), 0.571}, {400, Rational(1), 1.000}};
    bool ok = true;
    std::ostringstream os;
    for (const auto& c : cells) {
      auto row = mc::find_row(table, 5, c.alpha, c.size);
      const bool good = row && std::abs(row->mean - c.ref) <= 0.02 + 1e-9;
      ok = ok && good;
      os << " a" << c.alpha.to_string() << "/" << c.size << "=" << (row ? f3(row->mean) : "missing") << "(" << f3(c.ref) << ")"
         << (good ? "" : "!");
    }
    std::size_t exact_one = 0, cell_runs = 0;
    for (const auto& r : records)
      if (r.alpha == Rational(1) && r.set_size == 400) {
        ++cell_runs;
        if (r.q_star == Rational(1)) ++exact_one;
      }
    ok = ok && cell_runs > 0 && exact_one == cell_runs;
    report(ok, "table-thresholds",
           std::to_string(records.size()) + " runs in " + f3(grid_seconds) + "s;" + os.str() + "; alpha=1 size 400: " +
               std::to_string(exact_one) + "/" + std::to_string(cell_runs) + " runs with q*=1");
  }

  auto curve = [&](int a, const Rational& q) { return mc::depth_curve(records, 5, Rational(a), q, grid.network_size); };
  const Rational half(1, 2), three_q(3, 4);

  {
    // Sizes read at two-decimal depth precision; strict values shown alongside.
    struct Spot { int alpha; Rational q; double ref; double tol; };
    const std::vector<Spot> spots = {{0, half, 0.35, 0.03}, {1, half, 0.19, 0.03}, {0, three_q, 0.68, 0.04}, {1, three_q, 0.31, 0.03}};
    bool ok = true;
    std::ostringstream os;
    for (const auto& sp : spots) {
      auto c = curve(sp.alpha, sp.q);
      auto v = mc::inverse_depth(c, 1.0, mc::kTwoDecimals);
      auto strict = mc::inverse_depth(c, 1.0);
      const bool good = near(v, sp.ref, sp.tol);
      ok = ok && good;
      os << " a" << sp.alpha << "/q" << sp.q.to_decimal(2) << "=" << fopt(v) << "(" << f3(sp.ref) << ", strict " << fopt(strict)
         << ")" << (good ? "" : "!");
    }
    report(ok, "inverse-depth", "full-contagion size;" + os.str());
  }

  {
    // No contagion: virality below one percent. Full contagion: depth at least 0.95.
    struct Spot { int alpha; double lo; double hi; };
    const std::vector<Spot> spots = {{0, 0.30, 0.68}, {1, 0.20, 0.30}};
    bool ok = true;
    std::ostringstream os;
    for (const auto& sp : spots) {
      auto c = curve(sp.alpha, three_q);
      auto iv = mc::singularity_interval(c, 0.01, 0.95);
      auto dflt = mc::singularity_interval(c);
      const bool good = near(iv.lower, sp.lo, 0.04) && near(iv.upper, sp.hi, 0.04);
      ok = ok && good;
      os << " a" << sp.alpha << "=[" << fopt(iv.lower) << "," << fopt(iv.upper) << "] (reference [" << f3(sp.lo) << "," << f3(sp.hi)
         << "], with 5% virality bound [" << fopt(dflt.lower) << "," << fopt(dflt.upper) << "])" << (good ? "" : "!");
    }
    report(ok, "singularity", "q=0.75;" + os.str());
  }

  {
    auto desk = mc::ExperimentGrid::preset("desk");
    auto outputs = [&](std::size_t workers) {
      auto rs = mc::run_grid(desk, workers);
      auto tb = mc::average_thresholds(rs, desk.network_size);
      auto cs = mc::all_curves(rs, desk);
      return std::vector<std::string>{mc::records_csv(rs),        mc::thresholds_csv(tb),     mc::thresholds_table_csv(tb, desk),
                                      mc::depth_curves_csv(cs),   mc::inverse_depth_csv(cs),  mc::singularity_csv(cs)};
    };
    auto one = outputs(1);
    auto eight = outputs(8);
    std::size_t bytes = 0;
    for (const auto& s : one) bytes += s.size();
    report(one == eight, "determinism",
           "desk preset, 1 vs 8 workers: " + std::to_string(one.size()) + " CSV outputs, " + std::to_string(bytes) + " bytes, " +
               (one == eight ? "identical" : "DIFFERENT"));
  }

  return failures == 0 ? 0 : 1;
}
