#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "contagion.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "rng.hpp"

// Randomized cross-checks of the contagion engine against the brute-force
// oracle. Shared by the `verify` subcommand and the acceptance suite.
namespace netcontagion::verify {

using json = nlohmann::json;
using CascadeFn = std::function<CascadeResult(const GameConfig&, const PlayerSet&, const Rational&)>;

inline CascadeResult reference_cascade(const GameConfig& cfg, const PlayerSet& s, const Rational& q) {
  return cascade(cfg, s, q);
}

// Deliberately broken engine: stops after the first wave.
inline CascadeResult first_wave_only(const GameConfig& cfg, const PlayerSet& s, const Rational& q) {
  CascadeResult r = cascade(cfg, s, q);
  if (r.waves.size() > 1) {
    r.waves.resize(1);
    r.final = r.after_wave(1);
  }
  return r;
}

struct InstanceOptions {
  std::size_t min_nodes = 4;
  std::size_t max_nodes = 12;
  bool local_unit_only = false;  // alpha = 0, unit weights
};

struct Instance {
  std::string family;
  GameConfig cfg;
  PlayerSet seeds;  // satisfies the cascade precondition at q
  Rational q;
};

// Drops members of S outside D that lack incentive at q until none remain.
// Incentive is monotone in the set, so the result is the largest valid subset.
inline PlayerSet prune(const GameConfig& cfg, PlayerSet s, const Rational& q) {
  for (bool changed = true; changed;) {
    changed = false;
    for (Node i : s.members())
      if (!has_incentive(cfg, i, s, q)) {
        s.erase(i);
        changed = true;
      }
  }
  return s;
}

inline bool precondition_holds(const GameConfig& cfg, const PlayerSet& s, const Rational& q) {
  for (Node i : s.members())
    if (!has_incentive(cfg, i, s, q)) return false;
  return true;
}

inline PlayerSet random_subset(Rng& rng, std::size_t n, std::uint64_t one_in) {
  PlayerSet s(n);
  for (Node i = 0; i < n; ++i)
    if (rng.uniform_below(one_in) == 0) s.insert(i);
  return s;
}

inline Rational random_rational(Rng& rng, std::int64_t max_den = 12) {
  auto den = static_cast<std::int64_t>(1 + rng.uniform_below(static_cast<std::uint64_t>(max_den)));
  auto num = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(den) + 1));
  return Rational(num, den);
}

inline Network random_network(Rng& rng, std::size_t n, std::string& family) {
  switch (rng.uniform_below(4)) {
    case 0: {
      family = "ba";
      std::size_t m = 1 + rng.uniform_below(std::min<std::size_t>(3, n - 1));
      return generate_ba(n, m, RngSeed{rng.next()});
    }
    case 1:
      family = "cycle";
      return make_cycle(n);
    case 2:
      family = "path";
      return make_path(n);
    default:
      family = "star";
      return make_star(n);
  }
}

inline Instance random_instance(Rng& rng, const InstanceOptions& opt = {}) {
  const std::size_t n = opt.min_nodes + rng.uniform_below(opt.max_nodes - opt.min_nodes + 1);
  std::string family;
  auto net = std::make_shared<const Network>(random_network(rng, n, family));

  static const Rational alphas[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
  static const Rational weight_values[] = {Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3)};
  static const Rational costs[] = {Rational(1), Rational(2), Rational(1, 3)};

  Rational alpha = opt.local_unit_only ? Rational(0) : alphas[rng.uniform_below(4)];
  Rational c = opt.local_unit_only ? Rational(1) : costs[rng.uniform_below(3)];

  InfluenceWeights weights = InfluenceWeights::unit();
  if (!opt.local_unit_only && rng.uniform_below(3) == 0) {
    std::vector<Rational> slots(2 * net->edge_count());
    for (auto& w : slots) w = weight_values[rng.uniform_below(5)];
    // Zero weights only without global effects, which would otherwise exceed c*w_i.
    if (alpha.is_zero())
      for (Node i = 0; i < n; ++i) {
        bool any = false;
        for (std::size_t s = net->slot_begin(i); s < net->slot_begin(i) + net->degree(i); ++s) {
          if (rng.uniform_below(4) == 0) slots[s] = Rational(0);
          any = any || !slots[s].is_zero();
        }
        if (!any && net->degree(i) > 0) slots[net->slot_begin(i)] = Rational(1);
      }
    weights = InfluenceWeights::from_slots(std::move(slots));
  }

  GlobalEffect global = GlobalEffect::parametric(alpha);
  if (!opt.local_unit_only && rng.uniform_below(6) == 0) {
    // A shared step table bounded by c * min_i w_i.
    Rational min_w(-1);
    for (Node i = 0; i < n; ++i) {
      Rational w = weights.is_unit() ? Rational(static_cast<std::int64_t>(net->degree(i))) : Rational(0);
      if (!weights.is_unit())
        for (std::size_t s = net->slot_begin(i); s < net->slot_begin(i) + net->degree(i); ++s) w += weights.at_slot(s);
      if (min_w < Rational(0) || w < min_w) min_w = w;
    }
    std::vector<std::pair<Rational, Rational>> steps;
    Rational p(0), f(0);
    const std::size_t count = 1 + rng.uniform_below(3);
    for (std::size_t k = 0; k < count; ++k) {
      p = p + Rational(static_cast<std::int64_t>(1 + rng.uniform_below(3)), 10);
      f = std::min(Rational(1), f + Rational(static_cast<std::int64_t>(rng.uniform_below(3)), 4));
      steps.emplace_back(p, c * min_w * f);
    }
    family += "+table";
    global = GlobalEffect::tabular({StepTable(std::move(steps))});
  }

  PlayerSet infected = random_subset(rng, n, 4);
  GameConfig cfg(net, std::move(weights), c, std::move(global), infected, ConnectivityPolicy::silent);

  Rational q;
  if (rng.uniform_below(2) == 0) {
    auto cands = oracle::threshold_candidates(cfg);
    q = cands[rng.uniform_below(cands.size())];
  } else {
    q = random_rational(rng);
  }
  PlayerSet seeds = prune(cfg, random_subset(rng, n, 3), q);
  return {family, std::move(cfg), std::move(seeds), q};
}

// --- bookkeeping --------------------------------------------------------------

struct Failure {
  std::string property;
  json counterexample;
};

struct Tally {
  std::size_t instances = 0;
  std::map<std::string, std::size_t> checks;
  std::map<std::string, std::size_t> failures;
  std::vector<Failure> examples;  // first few failures, serialized
  std::size_t max_examples = 10;

  bool ok() const {
    for (const auto& [k, v] : failures)
      if (v) return false;
    return true;
  }
  bool ok(const std::string& property) const {
    auto it = failures.find(property);
    return it == failures.end() || it->second == 0;
  }
  std::size_t checked(const std::string& property) const {
    auto it = checks.find(property);
    return it == checks.end() ? 0 : it->second;
  }

  void record(const std::string& property, bool passed, const std::function<json()>& describe) {
    ++checks[property];
    if (passed) return;
    ++failures[property];
    if (examples.size() < max_examples) examples.push_back({property, describe()});
  }
};

inline json describe(const Instance& inst, std::uint64_t trial_seed, json detail = json::object()) {
  json doc = io::game_to_json(inst.cfg, &inst.seeds);
  doc["q"] = {io::rational_to_json(inst.q)};
  return {{"family", inst.family}, {"trial_seed", trial_seed}, {"game", doc}, {"detail", std::move(detail)}};
}

// C_t for every t up to `steps`, holding the final set after the last wave.
inline bool wavewise_subset(const CascadeResult& small, const CascadeResult& big) {
  const std::size_t t_max = std::max(small.steps(), big.steps());
  for (std::size_t t = 0; t <= t_max; ++t)
    if (!small.after_wave(t).is_subset_of(big.after_wave(t))) return false;
  return true;
}

inline Rational random_below(Rng& rng, const Rational& q) { return q * random_rational(rng); }

// --- theorem checks -----------------------------------------------------------

inline void check_theorems(const Instance& inst, Rng& rng, std::uint64_t trial_seed, const CascadeFn& sut, Tally& tally) {
  const GameConfig& cfg = inst.cfg;
  const std::size_t n = cfg.node_count();
  const PlayerSet& s = inst.seeds;
  const Rational& q = inst.q;
  auto bound_ok = [&](const CascadeResult& r, const PlayerSet& start) { return r.subsets_checked <= n - start.size(); };

  CascadeResult base = sut(cfg, s, q);
  tally.record("linear_bound", bound_ok(base, s), [&] {
    return describe(inst, trial_seed, {{"subsets_checked", base.subsets_checked}, {"bound", n - s.size()}});
  });

  // Smallest equilibrium containing S.
  PlayerSet expected = oracle::smallest_nash_containing(cfg, s, q);
  tally.record("smallest_nash", base.final == expected, [&] {
    return describe(inst, trial_seed, {{"cascade", io::set_to_json(base.final)}, {"oracle", io::set_to_json(expected)}});
  });

  // Fixed points of the cascade are exactly the equilibria.
  {
    auto nash = oracle::enumerate_nash(cfg, q);
    std::vector<PlayerSet> fixed;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      PlayerSet e = PlayerSet::from_mask(n, mask);
      if (!precondition_holds(cfg, e, q)) continue;
      if (sut(cfg, e, q).final == e) fixed.push_back(std::move(e));
    }
    std::sort(fixed.begin(), fixed.end(), [](const PlayerSet& a, const PlayerSet& b) {
      return a.size() != b.size() ? a.size() < b.size() : a.members() < b.members();
    });
    tally.record("fixed_points", fixed == nash, [&] {
      json a = json::array(), b = json::array();
      for (const auto& e : fixed) a.push_back(io::set_to_json(e));
      for (const auto& e : nash) b.push_back(io::set_to_json(e));
      return describe(inst, trial_seed, {{"fixed_points", a}, {"equilibria", b}});
    });
    bool agrees = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n) && agrees; ++mask) {
      PlayerSet e = PlayerSet::from_mask(n, mask);
      agrees = is_nash(cfg, e, q) == (std::find(nash.begin(), nash.end(), e) != nash.end());
    }
    tally.record("fixed_points", agrees, [&] { return describe(inst, trial_seed, {{"is_nash", "disagrees with oracle"}}); });
  }

  // Monotonicity in S, wave by wave.
  {
    PlayerSet sub(n);
    for (Node i : s.members())
      if (rng.uniform_below(2)) sub.insert(i);
    sub = prune(cfg, sub, q);
    CascadeResult small = sut(cfg, sub, q);
    tally.record("linear_bound", bound_ok(small, sub), [&] { return describe(inst, trial_seed, {{"start_set", io::set_to_json(sub)}}); });
    tally.record("monotone_in_seeds", wavewise_subset(small, base), [&] {
      return describe(inst, trial_seed, {{"subset", io::set_to_json(sub)}});
    });
  }

  // Monotonicity in q and bootstrapping from the equilibrium at q.
  {
    Rational lower = random_below(rng, q);
    CascadeResult low = sut(cfg, s, lower);
    tally.record("linear_bound", bound_ok(low, s), [&] { return describe(inst, trial_seed, {{"q_prime", io::rational_to_json(lower)}}); });
    tally.record("monotone_in_q", wavewise_subset(base, low), [&] {
      return describe(inst, trial_seed, {{"q_prime", io::rational_to_json(lower)}});
    });
    CascadeResult boot = sut(cfg, base.final, lower);
    tally.record("bootstrapping", boot.final == low.final, [&] {
      return describe(inst, trial_seed,
                      {{"q_prime", io::rational_to_json(lower)}, {"from_equilibrium", io::set_to_json(boot.final)},
                       {"from_seeds", io::set_to_json(low.final)}});
    });
  }

  // Larger global effect pointwise gives larger sets wave by wave.
  {
    std::optional<GameConfig> lo, hi;
    if (cfg.global().is_parametric()) {
      static const Rational alphas[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
      const Rational& a = cfg.global().as_parametric().alpha;
      std::vector<GameConfig> above;
      for (const auto& b : alphas) {
        if (b <= a) continue;
        try {
          above.push_back(cfg.with_global(GlobalEffect::parametric(b)));
        } catch (const ParameterError&) {
        }
      }
      if (!above.empty()) {
        lo = cfg;
        hi = above[rng.uniform_below(above.size())];
      } else if (!a.is_zero()) {
        lo = cfg.with_global(GlobalEffect::none());
        hi = cfg;
      }
    } else {
      lo = cfg.with_global(GlobalEffect::none());
      hi = cfg;
    }
    if (lo) {
      PlayerSet start = prune(*lo, s, q);
      CascadeResult a = sut(*lo, start, q);
      CascadeResult b = sut(*hi, start, q);
      tally.record("global_containment", wavewise_subset(a, b), [&] {
        return describe(inst, trial_seed,
                        {{"lower_global", io::global_to_json(lo->global())}, {"higher_global", io::global_to_json(hi->global())},
                         {"start_set", io::set_to_json(start)}});
      });
    }
  }

  // Exact threshold against the candidate-set oracle, plus stage equilibria.
  {
    PlayerSet start = prune(cfg, s, Rational(1));
    ThresholdResult thr = full_contagion_threshold(cfg, start);
    Rational brute = oracle::brute_threshold(cfg, start);
    tally.record("threshold_exact", thr.q_star == brute, [&] {
      return describe(inst, trial_seed,
                      {{"start_set", io::set_to_json(start)}, {"algorithm", io::rational_to_json(thr.q_star)},
                       {"oracle", io::rational_to_json(brute)}});
    });
    tally.record("linear_bound", thr.subsets_checked <= n - start.size(), [&] {
      return describe(inst, trial_seed, {{"start_set", io::set_to_json(start)}, {"threshold_subsets_checked", thr.subsets_checked}});
    });
    bool stages_ok = true;
    for (std::size_t k = 0; k < thr.stages.size() && stages_ok; ++k) {
      PlayerSet a = thr.equilibrium(k);
      stages_ok = is_nash(cfg, a, thr.stages[k].q) && sut(cfg, start, thr.stages[k].q).final == a;
    }
    tally.record("stage_equilibria", stages_ok, [&] { return describe(inst, trial_seed, {{"start_set", io::set_to_json(start)}}); });
    const Rational probe = random_rational(rng, 20);
    const bool full = sut(cfg, start, probe).final.is_full();
    tally.record("threshold_exact", full == (probe <= thr.q_star), [&] {
      return describe(inst, trial_seed, {{"start_set", io::set_to_json(start)}, {"probe_q", io::rational_to_json(probe)}});
    });
  }

  // Trivial limits.
  {
    CascadeResult zero = sut(cfg, s, Rational(0));
    tally.record("trivial_limits", zero.final.is_full() && zero.steps() <= 2, [&] {
      return describe(inst, trial_seed, {{"q", "0"}, {"steps", zero.steps()}, {"final_size", zero.final.size()}});
    });
    GameConfig clean = cfg.with_infected(PlayerSet(n));
    Rational positive = q.is_zero() ? Rational(1, 2) : q;
    CascadeResult none = sut(clean, PlayerSet(n), positive);
    tally.record("trivial_limits", none.final.empty() && none.steps() == 0 && none.subsets_checked == 1, [&] {
      return describe(inst, trial_seed, {{"empty_start_q", io::rational_to_json(positive)}, {"final_size", none.final.size()}});
    });
  }
}

// --- cohesion checks (alpha = 0, unit weights) ---------------------------------

inline void check_cohesion(const Instance& inst, Rng& rng, std::uint64_t trial_seed, Tally& tally) {
  const GameConfig& cfg = inst.cfg;
  const Network& net = cfg.network();
  const std::size_t n = cfg.node_count();
  const Rational& q = inst.q;
  const Rational one_minus_q = Rational(1) - q;

  // Equilibrium iff E is q-cohesive and every outsider has more than 1-q of its
  // neighbors outside E (indifferent players play 1).
  GameConfig clean = cfg.with_infected(PlayerSet(n));
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    PlayerSet e = PlayerSet::from_mask(n, mask);
    const bool nash = is_nash(clean, e, q);
    const bool cohesive = cohesiveness(net, e) >= q && cohesiveness(net, e.complement()) > one_minus_q;
    tally.record("cohesion_nash", nash == cohesive, [&] {
      return describe(inst, trial_seed, {{"set", io::set_to_json(e)}, {"is_nash", nash}, {"cohesive", cohesive}});
    });
  }

  // Uniform cohesion of the complement against the threshold, with S = D.
  PlayerSet s = random_subset(rng, n, 3);
  GameConfig seeded = cfg.with_infected(s);
  ThresholdResult thr = full_contagion_threshold(seeded, s);
  const bool brute = oracle::brute_uniform_cohesion(net, s.complement(), one_minus_q);
  const bool via_threshold = q <= thr.q_star;
  const bool via_cascade = cascade(seeded, s, q).final.is_full();
  const bool via_api = is_uniformly_at_most_cohesive(cfg, s.complement(), one_minus_q);
  tally.record("uniform_cohesion", brute == via_threshold && brute == via_cascade && brute == via_api, [&] {
    return describe(inst, trial_seed,
                    {{"start_set", io::set_to_json(s)}, {"q_star", io::rational_to_json(thr.q_star)}, {"brute", brute},
                     {"threshold", via_threshold}, {"cascade", via_cascade}, {"api", via_api}});
  });
}

// Runs `trials` theorem instances and, for the local unit-weight subset, the
// cohesion checks. Instance k uses seed derive_seed(master, {k}).
inline Tally run_suite(RngSeed master, std::size_t trials, const CascadeFn& sut = reference_cascade,
                       std::size_t max_nodes = 12) {
  Tally tally;
  for (std::size_t k = 0; k < trials; ++k) {
    const std::uint64_t seed = derive_seed(master, {k}).value;
    Rng rng(RngSeed{seed});
    InstanceOptions opt;
    opt.max_nodes = std::max<std::size_t>(max_nodes, opt.min_nodes);
    opt.local_unit_only = (k % 4 == 3);
    Instance inst = random_instance(rng, opt);
    ++tally.instances;
    check_theorems(inst, rng, seed, sut, tally);
    if (opt.local_unit_only) check_cohesion(inst, rng, seed, tally);
  }
  return tally;
}

}  // namespace netcontagion::verify
