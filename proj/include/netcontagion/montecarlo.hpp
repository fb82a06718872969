#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "contagion.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "network.hpp"
#include "rng.hpp"

namespace netcontagion::mc {

using json = nlohmann::json;

// Per-task seeds. Networks: derive_seed(master, {1, m, network_id}).
// Starting sets: derive_seed(master, {2, m, network_id, set_size, replicate}).
// The same S is used for every alpha, so alpha comparisons are paired.
inline constexpr std::uint64_t kNetworkStream = 1;
inline constexpr std::uint64_t kSetStream = 2;
inline constexpr const char* kSeedScheme =
    "splitmix64 chain: network = derive(master, 1, m, network_id); "
    "set = derive(master, 2, m, network_id, set_size, replicate); engine mt19937_64";

inline std::vector<std::size_t> size_range(std::size_t start, std::size_t stop, std::size_t step) {
  if (step == 0) throw ParameterError("set size step must be positive");
  std::vector<std::size_t> out;
  for (std::size_t s = start; s <= stop; s += step) out.push_back(s);
  return out;
}

struct ExperimentGrid {
  std::size_t network_size = 300;
  std::vector<std::size_t> m_values{5, 10, 20};
  std::vector<Rational> alpha_values{Rational(0), Rational(1, 2), Rational(1)};
  std::size_t networks_per_m = 8;
  std::size_t sets_per_size = 10;
  std::vector<std::size_t> set_sizes = size_range(10, 290, 10);
  std::vector<Rational> q_grid{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  RngSeed master_seed{2021};

  // desk: I=300, 8 networks, 10 sets per size. paper: the full-scale grid
  // (long-running). acceptance: I=1000, m=5, alpha in {0,1}, 10 x 20 draws.
  static ExperimentGrid preset(const std::string& name) {
    ExperimentGrid g;
    if (name == "desk") return g;
    if (name == "paper") {
      g.network_size = 1000;
      g.networks_per_m = 40;
      g.sets_per_size = 50;
      g.set_sizes = size_range(10, 990, 10);
      return g;
    }
    if (name == "acceptance") {
      g.network_size = 1000;
      g.m_values = {5};
      g.alpha_values = {Rational(0), Rational(1)};
      g.networks_per_m = 10;
      g.sets_per_size = 20;
      g.set_sizes = size_range(10, 990, 10);
      return g;
    }
    throw ParameterError("unknown preset '" + name + "' (expected desk, paper or acceptance)");
  }

  void validate() const {
    if (m_values.empty() || alpha_values.empty() || set_sizes.empty() || networks_per_m == 0 || sets_per_size == 0)
      throw ParameterError("experiment grid is empty");
    for (auto m : m_values)
      if (m == 0 || m >= network_size) throw ParameterError("attachment parameter m=" + std::to_string(m) + " must satisfy 0 < m < I");
    for (const auto& a : alpha_values)
      if (a < Rational(0) || a > Rational(1)) throw ParameterError("alpha outside [0,1]: " + a.to_string());
    for (auto s : set_sizes)
      if (s == 0 || s >= network_size) throw ParameterError("set size " + std::to_string(s) + " must lie in [1, I)");
    for (const auto& q : q_grid)
      if (q < Rational(0) || q > Rational(1)) throw ParameterError("q outside [0,1]: " + q.to_string());
  }

  std::size_t draw_count() const { return m_values.size() * networks_per_m * set_sizes.size() * sets_per_size; }
  std::size_t run_count() const { return draw_count() * alpha_values.size(); }
};

inline json grid_to_json(const ExperimentGrid& g) {
  json alphas = json::array(), qs = json::array();
  for (const auto& a : g.alpha_values) alphas.push_back(a.to_string());
  for (const auto& q : g.q_grid) qs.push_back(q.to_string());
  return {{"network_size", g.network_size}, {"m_values", g.m_values},       {"alpha_values", alphas},
          {"networks_per_m", g.networks_per_m}, {"sets_per_size", g.sets_per_size}, {"set_sizes", g.set_sizes},
          {"q_grid", qs},                   {"master_seed", g.master_seed.value}};
}

// Missing keys keep the values of `base` (a preset or the defaults).
inline ExperimentGrid grid_from_json(const json& doc, ExperimentGrid base = {}) {
  if (!doc.is_object()) throw ParseError("grid document must be a JSON object");
  ExperimentGrid g = std::move(base);
  if (doc.contains("network_size")) g.network_size = doc.at("network_size").get<std::size_t>();
  if (doc.contains("m_values")) g.m_values = doc.at("m_values").get<std::vector<std::size_t>>();
  if (doc.contains("alpha_values")) {
    g.alpha_values.clear();
    for (const auto& a : doc.at("alpha_values")) g.alpha_values.push_back(io::rational_from_json(a));
  }
  if (doc.contains("networks_per_m")) g.networks_per_m = doc.at("networks_per_m").get<std::size_t>();
  if (doc.contains("sets_per_size")) g.sets_per_size = doc.at("sets_per_size").get<std::size_t>();
  if (doc.contains("set_sizes")) {
    const json& s = doc.at("set_sizes");
    if (s.is_array()) {
      g.set_sizes = s.get<std::vector<std::size_t>>();
    } else if (s.is_object()) {
      g.set_sizes = size_range(s.at("start").get<std::size_t>(), s.at("stop").get<std::size_t>(), s.value("step", std::size_t{1}));
    } else {
      throw ParseError("set_sizes must be a list or {start, stop, step}");
    }
  }
  if (doc.contains("q_grid")) {
    g.q_grid.clear();
    for (const auto& q : doc.at("q_grid")) g.q_grid.push_back(io::rational_from_json(q));
  }
  if (doc.contains("master_seed")) g.master_seed = RngSeed{doc.at("master_seed").get<std::uint64_t>()};
  return g;
}

struct RunRecord {
  std::size_t m = 0;
  Rational alpha;
  std::size_t network_id = 0;
  std::size_t set_size = 0;
  std::size_t replicate = 0;
  Rational q_star;
  std::size_t subsets_checked = 0;
  DepthFunction depth;
};

inline Network grid_network(const ExperimentGrid& g, std::size_t m, std::size_t network_id) {
  return generate_ba(g.network_size, m, derive_seed(g.master_seed, {kNetworkStream, m, network_id}));
}

inline PlayerSet grid_seed_set(const ExperimentGrid& g, std::size_t m, std::size_t network_id, std::size_t set_size,
                               std::size_t replicate) {
  Rng rng(derive_seed(g.master_seed, {kSetStream, m, network_id, set_size, replicate}));
  auto picks = rng.sample_without_replacement<Node>(g.network_size, set_size);
  return PlayerSet(g.network_size, std::span<const Node>(picks));
}

// One record per (m, network, size, replicate, alpha), in that nesting order,
// regardless of `workers`. Starting players are exogenously infected (D = S).
inline std::vector<RunRecord> run_grid(const ExperimentGrid& grid, std::size_t workers = 1,
                                       const std::function<void(std::size_t, std::size_t)>& progress = {}) {
  grid.validate();
  workers = std::max<std::size_t>(workers, 1);
  const std::size_t nets = grid.networks_per_m;
  const std::size_t sizes = grid.set_sizes.size();
  const std::size_t reps = grid.sets_per_size;
  const std::size_t alphas = grid.alpha_values.size();

  std::vector<std::shared_ptr<const Network>> networks(grid.m_values.size() * nets);
  for (std::size_t mi = 0; mi < grid.m_values.size(); ++mi)
    for (std::size_t k = 0; k < nets; ++k)
      networks[mi * nets + k] = std::make_shared<const Network>(grid_network(grid, grid.m_values[mi], k));

  const std::size_t tasks = grid.draw_count();
  std::vector<RunRecord> records(tasks * alphas);
  std::atomic<std::size_t> next{0}, done{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      try {
        std::size_t rest = t;
        const std::size_t rep = rest % reps;
        rest /= reps;
        const std::size_t si = rest % sizes;
        rest /= sizes;
        const std::size_t net_id = rest % nets;
        const std::size_t mi = rest / nets;
        const std::size_t m = grid.m_values[mi];
        const std::size_t size = grid.set_sizes[si];
        PlayerSet s = grid_seed_set(grid, m, net_id, size, rep);
        for (std::size_t a = 0; a < alphas; ++a) {
          auto cfg = GameConfig::parametric(networks[mi * nets + net_id], grid.alpha_values[a], s, ConnectivityPolicy::silent);
          ThresholdResult thr = full_contagion_threshold(cfg, s);
          RunRecord& r = records[t * alphas + a];
          r.m = m;
          r.alpha = grid.alpha_values[a];
          r.network_id = net_id;
          r.set_size = size;
          r.replicate = rep;
          r.q_star = thr.q_star;
          r.subsets_checked = thr.subsets_checked;
          r.depth = DepthFunction(thr, grid.network_size);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks;
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(failure_mutex);
        progress(finished, tasks);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

// --- aggregation --------------------------------------------------------------

struct ThresholdRow {
  std::size_t m = 0;
  Rational alpha;
  std::size_t set_size = 0;
  double fraction = 0;
  std::size_t count = 0;
  double mean = 0;
  double sd = 0;  // sample standard deviation, 0 for a single run
};

struct AggregateTable {
  std::vector<ThresholdRow> rows;     // sorted by (m, alpha, set_size)
  std::vector<std::string> warnings;  // mean q* decreasing in set size
};

inline AggregateTable average_thresholds(const std::vector<RunRecord>& records, std::size_t network_size) {
  if (records.empty()) throw ParameterError("no records to aggregate");
  struct Acc {
    std::size_t n = 0;
    long double sum = 0, sumsq = 0;
  };
  std::map<std::tuple<std::size_t, Rational, std::size_t>, Acc> groups;
  for (const auto& r : records) {
    auto& g = groups[{r.m, r.alpha, r.set_size}];
    const long double x = r.q_star.to_double();
    ++g.n;
    g.sum += x;
    g.sumsq += x * x;
  }
  AggregateTable out;
  for (const auto& [key, g] : groups) {
    ThresholdRow row;
    std::tie(row.m, row.alpha, row.set_size) = key;
    row.fraction = static_cast<double>(row.set_size) / static_cast<double>(network_size);
    row.count = g.n;
    row.mean = static_cast<double>(g.sum / g.n);
    if (g.n > 1) {
      long double var = (g.sumsq - g.sum * g.sum / g.n) / (g.n - 1);
      row.sd = static_cast<double>(std::sqrt(std::max<long double>(var, 0)));
    }
    out.rows.push_back(row);
  }
  for (std::size_t k = 1; k < out.rows.size(); ++k) {
    const auto& a = out.rows[k - 1];
    const auto& b = out.rows[k];
    if (a.m == b.m && a.alpha == b.alpha && b.mean < a.mean - 1e-12) {
      std::ostringstream msg;
      msg << "mean q* decreases from size " << a.set_size << " to " << b.set_size << " (m=" << a.m
          << ", alpha=" << a.alpha.to_string() << ")";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

inline std::optional<ThresholdRow> find_row(const AggregateTable& t, std::size_t m, const Rational& alpha, std::size_t size) {
  for (const auto& r : t.rows)
    if (r.m == m && r.alpha == alpha && r.set_size == size) return r;
  return std::nullopt;
}

struct CurvePoint {
  std::size_t set_size = 0;
  double fraction = 0;
  std::size_t count = 0;
  double mean_depth = 0;
  double mean_virality = 0;  // mean depth minus set_size / I
};

struct DepthCurve {
  std::size_t m = 0;
  Rational alpha;
  Rational q;
  std::size_t network_size = 0;
  std::vector<CurvePoint> points;  // ascending set size
};

// Mean delta(S, q) per set size over the records of one (m, alpha).
inline DepthCurve depth_curve(const std::vector<RunRecord>& records, std::size_t m, const Rational& alpha, const Rational& q,
                              std::size_t network_size) {
  std::map<std::size_t, std::pair<std::size_t, std::uint64_t>> sums;  // size -> (runs, infected total)
  for (const auto& r : records) {
    if (r.m != m || r.alpha != alpha) continue;
    auto& s = sums[r.set_size];
    ++s.first;
    s.second += r.depth.size_at(q);
  }
  DepthCurve c{m, alpha, q, network_size, {}};
  const double n = static_cast<double>(network_size);
  for (const auto& [size, s] : sums) {
    CurvePoint p;
    p.set_size = size;
    p.fraction = static_cast<double>(size) / n;
    p.count = s.first;
    p.mean_depth = static_cast<double>(s.second) / (static_cast<double>(s.first) * n);
    p.mean_virality = p.mean_depth - p.fraction;
    c.points.push_back(p);
  }
  return c;
}

// Pool-adjacent-violators fit of a nondecreasing sequence, weighted by counts.
inline std::vector<double> isotonic(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double value, weight;
    std::size_t len;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i], w[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].value > blocks.back().value) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.value = (a.value * a.weight + b.value * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.len += b.len;
    }
  }
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.len, b.value);
  return out;
}

inline constexpr double kTolerance = 1e-12;

// Smallest grid set-size fraction whose (isotonic) mean depth reaches `target`;
// nullopt when unreachable at the grid maximum. With resolution r > 0 a mean
// counts as reaching the target once it is within r below it: r = 0.005 reads
// depths at two-decimal reporting precision, so 0.997 counts as full depth.
inline constexpr double kTwoDecimals = 0.005;

inline std::optional<double> inverse_depth(const DepthCurve& curve, double target, double resolution = 0) {
  if (!(target > 0 && target <= 1)) throw ParameterError("target depth must lie in (0, 1]");
  std::vector<double> y, w;
  for (const auto& p : curve.points) {
    y.push_back(p.mean_depth);
    w.push_back(static_cast<double>(p.count));
  }
  auto fit = isotonic(y, w);
  for (std::size_t k = 0; k < fit.size(); ++k)
    if (fit[k] >= target - resolution - kTolerance) return curve.points[k].fraction;
  return std::nullopt;
}

struct Interval {
  std::optional<double> lower;  // first size with mean virality >= lo
  std::optional<double> upper;  // first size with mean depth >= hi
};

inline Interval singularity_interval(const DepthCurve& curve, double lo = 0.05, double hi = 0.95) {
  if (!(0 < lo && lo < hi && hi < 1)) throw ParameterError("singularity bounds need 0 < lo < hi < 1");
  Interval out;
  for (const auto& p : curve.points)
    if (p.mean_virality >= lo - kTolerance) {
      out.lower = p.fraction;
      break;
    }
  out.upper = inverse_depth(curve, hi);
  return out;
}

// --- output -------------------------------------------------------------------

inline std::string fmt(double x, int places = 6) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(places);
  s << x;
  return s.str();
}

inline std::string records_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "m,alpha,network_id,set_size,replicate,q_star_num,q_star_den,q_star_decimal,subsets_checked\n";
  for (const auto& r : records)
    out << r.m << ',' << r.alpha.to_string() << ',' << r.network_id << ',' << r.set_size << ',' << r.replicate << ','
        << r.q_star.num() << ',' << r.q_star.den() << ',' << r.q_star.to_decimal(6) << ',' << r.subsets_checked << '\n';
  return out.str();
}

inline std::string records_jsonl(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    json depth = json::array();
    for (std::size_t k = 0; k < r.depth.breakpoints().size(); ++k)
      depth.push_back({{"q", r.depth.breakpoints()[k].to_string()}, {"equilibrium_size", r.depth.sizes()[k]}});
    json rec = {{"m", r.m},
                {"alpha", r.alpha.to_string()},
                {"network_id", r.network_id},
                {"set_size", r.set_size},
                {"replicate", r.replicate},
                {"q_star", io::rational_report(r.q_star)},
                {"subsets_checked", r.subsets_checked},
                {"depth", depth}};
    out << rec.dump() << '\n';
  }
  return out.str();
}

inline std::string thresholds_csv(const AggregateTable& t) {
  std::ostringstream out;
  out << "m,alpha,set_size,set_fraction,count,mean_q_star,sd_q_star\n";
  for (const auto& r : t.rows)
    out << r.m << ',' << r.alpha.to_string() << ',' << r.set_size << ',' << fmt(r.fraction, 4) << ',' << r.count << ','
        << fmt(r.mean) << ',' << fmt(r.sd) << '\n';
  return out.str();
}

// Wide layout: one row per set size, one column per (m, alpha).
inline std::string thresholds_table_csv(const AggregateTable& t, const ExperimentGrid& g) {
  std::ostringstream out;
  out << "set_fraction";
  for (auto m : g.m_values)
    for (const auto& a : g.alpha_values) out << ",m" << m << "_alpha" << a.to_decimal(2);
  out << '\n';
  for (auto size : g.set_sizes) {
    out << fmt(static_cast<double>(size) / static_cast<double>(g.network_size), 3);
    for (auto m : g.m_values)
      for (const auto& a : g.alpha_values) {
        auto row = find_row(t, m, a, size);
        out << ',' << (row ? fmt(row->mean, 3) : "");
      }
    out << '\n';
  }
  return out.str();
}

inline std::vector<DepthCurve> all_curves(const std::vector<RunRecord>& records, const ExperimentGrid& g) {
  std::vector<DepthCurve> out;
  for (auto m : g.m_values)
    for (const auto& q : g.q_grid)
      for (const auto& a : g.alpha_values) out.push_back(depth_curve(records, m, a, q, g.network_size));
  return out;
}

inline std::string depth_curves_csv(const std::vector<DepthCurve>& curves) {
  std::ostringstream out;
  out << "m,q,alpha,set_size,set_fraction,count,mean_depth,mean_virality\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out << c.m << ',' << c.q.to_string() << ',' << c.alpha.to_string() << ',' << p.set_size << ',' << fmt(p.fraction, 4)
          << ',' << p.count << ',' << fmt(p.mean_depth) << ',' << fmt(p.mean_virality) << '\n';
  return out.str();
}

// Rows (m, q, alpha), columns target depths 0.1 .. 1.0.
inline std::string inverse_depth_csv(const std::vector<DepthCurve>& curves, double resolution = 0) {
  std::ostringstream out;
  out << "m,q,alpha";
  for (int k = 1; k <= 10; ++k) out << ",depth_" << fmt(k / 10.0, 1);
  out << '\n';
  for (const auto& c : curves) {
    out << c.m << ',' << c.q.to_string() << ',' << c.alpha.to_string();
    for (int k = 1; k <= 10; ++k) {
      auto v = inverse_depth(c, k / 10.0, resolution);
      out << ',' << (v ? fmt(*v, 3) : "unreachable");
    }
    out << '\n';
  }
  return out.str();
}

// One row per curve and (virality bound, depth bound) pair.
inline std::string singularity_csv(const std::vector<DepthCurve>& curves,
                                   const std::vector<std::pair<double, double>>& bounds = {{0.05, 0.95}, {0.01, 0.95}}) {
  std::ostringstream out;
  out << "m,q,alpha,virality_bound,depth_bound,lower_fraction,upper_fraction\n";
  for (const auto& c : curves)
    for (auto [lo, hi] : bounds) {
      auto iv = singularity_interval(c, lo, hi);
      out << c.m << ',' << c.q.to_string() << ',' << c.alpha.to_string() << ',' << fmt(lo, 2) << ',' << fmt(hi, 2) << ','
          << (iv.lower ? fmt(*iv.lower, 3) : "unreachable") << ',' << (iv.upper ? fmt(*iv.upper, 3) : "unreachable") << '\n';
    }
  return out.str();
}

inline json metadata(const ExperimentGrid& g, std::size_t runs) {
  return {{"grid", grid_to_json(g)},
          {"runs", runs},
          {"barabasi_albert_core", std::string(kBaCoreConvention)},
          {"seed_scheme", kSeedScheme},
          {"infected_set", "D = S (starting players are exogenously infected)"},
          {"global_effect", "phi_i(p) = alpha * c * d_i * p with c = 1"},
          {"csv_columns", "m,alpha,network_id,set_size,replicate,q_star_num,q_star_den,q_star_decimal,subsets_checked"}};
}

}  // namespace netcontagion::mc
