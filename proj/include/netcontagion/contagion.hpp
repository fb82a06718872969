#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "game.hpp"
#include "player_set.hpp"
#include "rational.hpp"

namespace netcontagion {

// Best-response cascade from (S, q): C_0 = S u D, then synchronous waves.
struct CascadeResult {
  PlayerSet initial;                      // C_0
  PlayerSet final;                        // C(S, q)
  std::vector<std::vector<Node>> waves;   // F_1..F_T, each sorted
  std::size_t subsets_checked = 0;        // nonempty B_t evaluated

  std::size_t steps() const noexcept { return waves.size(); }

  // C_t for t = 0..steps().
  PlayerSet after_wave(std::size_t t) const {
    PlayerSet c = initial;
    for (std::size_t k = 0; k < t && k < waves.size(); ++k)
      for (Node i : waves[k]) c.insert(i);
    return c;
  }
};

struct ThresholdStage {
  Rational q;                             // q_n
  std::vector<std::vector<Node>> waves;   // flips of the cascade run at q_n from A_n
  std::size_t equilibrium_size = 0;       // |A_{n+1}|
  std::optional<Node> marginal;           // lowest-index player attaining q_n (n >= 1)
};

struct ThresholdResult {
  Rational q_star;
  PlayerSet start;                        // A_0 = S u D
  std::vector<ThresholdStage> stages;
  std::size_t subsets_checked = 0;

  // A_{n+1} = C(S, q_n).
  PlayerSet equilibrium(std::size_t n) const {
    PlayerSet a = start;
    for (std::size_t k = 0; k <= n && k < stages.size(); ++k)
      for (const auto& wave : stages[k].waves)
        for (Node i : wave) a.insert(i);
    return a;
  }
};

namespace detail {

inline void check_q(const Rational& q) {
  if (q < Rational(0) || q > Rational(1)) throw ParameterError("q must lie in [0,1], got " + q.to_string());
}

inline void check_universe(const GameConfig& cfg, const PlayerSet& s) {
  if (s.universe() != cfg.node_count()) throw ParameterError("player set does not match network size");
}

inline void require_incentive(const GameConfig& cfg, const PlayerSet& s, const Rational& q) {
  for (Node i : s.members())
    if (!has_incentive(cfg, i, s, q))
      throw PreconditionError("player " + std::to_string(i) + " in the starting set has no incentive to play 1 at q=" +
                                  q.to_string(),
                              i);
}

// Infected set plus per-player neighbor tallies, updated as players flip.
class ContagionState {
 public:
  ContagionState(const GameConfig& cfg, const PlayerSet& start)
      : cfg_(cfg),
        in_(cfg.node_count()),
        count_(cfg.node_count(), 0),
        stamp_(cfg.node_count(), 0) {
    if (!cfg.weights().is_unit()) weighted_.assign(cfg.node_count(), Rational(0));
    for (Node i : start.members()) add(i);
  }

  const PlayerSet& members() const noexcept { return in_; }

  void add(Node f) {
    if (in_.contains(f)) return;
    in_.insert(f);
    ++total_;
    const Network& net = cfg_.network();
    const std::size_t base = net.slot_begin(f);
    auto nbrs = net.neighbors(f);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      Node j = nbrs[k];
      ++count_[j];
      if (!weighted_.empty()) weighted_[j] += cfg_.weights().at_slot(net.reverse_slot(base + k));
    }
  }

  Support support(Node i) const {
    Support s;
    s.neighbor_count = count_[i];
    s.weighted = weighted_.empty() ? Rational(count_[i]) : weighted_[i];
    s.outside_count = total_ - count_[i] - (in_.contains(i) ? 1 : 0);
    return s;
  }

  bool holds(Node i, const Rational& q) const { return incentive_holds(cfg_, i, support(i), q); }

  // Runs synchronous waves at q until no outsider has incentive. Appends each
  // wave to `waves` and returns how many nonempty complements were evaluated.
  std::size_t run(const Rational& q, std::vector<std::vector<Node>>& waves) {
    const std::size_t n = cfg_.node_count();
    std::size_t checked = 0;
    std::vector<Node> flips;
    const std::vector<Node>* last = nullptr;
    while (in_.size() < n) {
      ++checked;
      flips.clear();
      if (last == nullptr || !cfg_.local_only()) {
        for (Node i = 0; i < n; ++i)
          if (!in_.contains(i) && holds(i, q)) flips.push_back(i);
      } else {
        // phi == 0: only neighbors of the previous wave can have changed.
        ++epoch_;
        for (Node f : *last)
          for (Node j : cfg_.network().neighbors(f))
            if (!in_.contains(j) && stamp_[j] != epoch_) {
              stamp_[j] = epoch_;
              if (holds(j, q)) flips.push_back(j);
            }
        std::sort(flips.begin(), flips.end());
      }
      if (flips.empty()) break;
      for (Node f : flips) add(f);
      waves.push_back(flips);
      last = &waves.back();
    }
    return checked;
  }

  // max over outsiders of the switch threshold, with the lowest-index attainer.
  std::pair<Rational, Node> max_threshold() const {
    const std::size_t n = cfg_.node_count();
    if (cfg_.unit_parametric()) {
      using wide = __int128;
      wide best_num = -1, best_den = 1;
      Node best = 0;
      for (Node i = 0; i < n; ++i) {
        if (in_.contains(i)) continue;
        std::int64_t d = static_cast<std::int64_t>(cfg_.network().degree(i));
        std::int64_t m = cfg_.outside_size(i);
        std::int64_t k = total_ - count_[i];
        if (m == 0) {
          m = 1;
          k = 0;
        }
        wide num = static_cast<wide>(count_[i]) * m * cfg_.alpha_den();
        wide den = static_cast<wide>(d) * (static_cast<wide>(cfg_.alpha_den()) * m - static_cast<wide>(cfg_.alpha_num()) * k);
        if (den <= 0) throw InvariantError("player " + std::to_string(i) + " outside the equilibrium has phi_i >= c*w_i");
        if (best_num < 0 || num * best_den > best_num * den) {
          best_num = num;
          best_den = den;
          best = i;
        }
      }
      return {Rational::from_wide(best_num, best_den), best};
    }
    std::optional<Rational> best_q;
    Node best = 0;
    for (Node i = 0; i < n; ++i) {
      if (in_.contains(i)) continue;
      Rational t = threshold_from_support(cfg_, i, support(i));
      if (!best_q || t > *best_q) {
        best_q = t;
        best = i;
      }
    }
    return {*best_q, best};
  }

 private:
  const GameConfig& cfg_;
  PlayerSet in_;
  std::vector<std::int64_t> count_;
  std::vector<Rational> weighted_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::int64_t total_ = 0;
};

}  // namespace detail

// C(S, q): the smallest Nash equilibrium at q containing S. Every member of S
// outside D must have incentive at q given S.
inline CascadeResult cascade(const GameConfig& cfg, const PlayerSet& s, const Rational& q) {
  detail::check_q(q);
  detail::check_universe(cfg, s);
  detail::require_incentive(cfg, s, q);
  CascadeResult out;
  out.initial = set_union(s, cfg.infected());
  detail::ContagionState state(cfg, out.initial);
  out.subsets_checked = state.run(q, out.waves);
  out.final = state.members();
  return out;
}

// Contagion threshold q* with the stage sequence (q_n, A_{n+1}). Each stage
// resumes from the previous equilibrium. Members of S outside D must have
// incentive at q = 1.
inline ThresholdResult full_contagion_threshold(const GameConfig& cfg, const PlayerSet& s) {
  detail::check_universe(cfg, s);
  detail::require_incentive(cfg, s, Rational(1));
  ThresholdResult out;
  out.start = set_union(s, cfg.infected());
  detail::ContagionState state(cfg, out.start);

  Rational q(1);
  std::optional<Node> marginal;
  for (bool first = true;; first = false) {
    ThresholdStage stage;
    stage.q = q;
    stage.marginal = marginal;
    std::size_t checked = state.run(q, stage.waves);
    // B_{n,0} is the complement that ended the previous stage; count it once.
    if (!first) --checked;
    out.subsets_checked += checked;
    stage.equilibrium_size = state.members().size();
    out.stages.push_back(std::move(stage));
    if (state.members().is_full()) break;

    auto [next_q, who] = state.max_threshold();
    if (next_q >= q) throw InvariantError("threshold sequence failed to decrease at q=" + q.to_string());
    q = next_q;
    marginal = who;
  }
  out.q_star = q;
  return out;
}

// delta(S, q) as a step function: |A_{n+1}|/I on (q_{n+1}, q_n], 1 on [0, q*].
class DepthFunction {
 public:
  DepthFunction() = default;
  DepthFunction(std::vector<Rational> breakpoints, std::vector<std::size_t> sizes, std::size_t node_count)
      : breakpoints_(std::move(breakpoints)), sizes_(std::move(sizes)), node_count_(node_count) {
    if (breakpoints_.empty() || breakpoints_.size() != sizes_.size()) throw ParameterError("malformed depth function");
  }

  explicit DepthFunction(const ThresholdResult& r, std::size_t node_count) : node_count_(node_count) {
    for (const auto& st : r.stages) {
      breakpoints_.push_back(st.q);
      sizes_.push_back(st.equilibrium_size);
    }
  }

  const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  std::size_t node_count() const noexcept { return node_count_; }
  const Rational& q_star() const { return breakpoints_.back(); }

  // Equilibrium size |C(S, q)|.
  std::size_t size_at(const Rational& q) const {
    detail::check_q(q);
    // Breakpoints descend; pick the last n with q <= q_n.
    auto it = std::partition_point(breakpoints_.begin(), breakpoints_.end(), [&](const Rational& b) { return q <= b; });
    return sizes_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  Rational at(const Rational& q) const {
    return Rational(static_cast<std::int64_t>(size_at(q)), static_cast<std::int64_t>(node_count_));
  }

 private:
  std::vector<Rational> breakpoints_;
  std::vector<std::size_t> sizes_;
  std::size_t node_count_ = 0;
};

inline DepthFunction depth_function(const GameConfig& cfg, const PlayerSet& s) {
  return DepthFunction(full_contagion_threshold(cfg, s), cfg.node_count());
}

inline Rational depth_at(const DepthFunction& df, const Rational& q) { return df.at(q); }

// v(S, q) = delta(S, q) - |S|/I.
inline Rational virality(const GameConfig& cfg, const PlayerSet& s, const Rational& q) {
  auto r = cascade(cfg, s, q);
  const auto n = static_cast<std::int64_t>(cfg.node_count());
  return Rational(static_cast<std::int64_t>(r.final.size()) - static_cast<std::int64_t>(s.size()), n);
}

// D in E, every i in E \ D has incentive, every i outside E lacks it.
inline bool is_nash(const GameConfig& cfg, const PlayerSet& e, const Rational& q) {
  detail::check_q(q);
  detail::check_universe(cfg, e);
  if (!cfg.infected().is_subset_of(e)) return false;
  for (Node i = 0; i < cfg.node_count(); ++i) {
    if (e.contains(i) && cfg.infected().contains(i)) continue;
    bool inc = incentive_holds(cfg, i, support_of(cfg, i, e), q);
    if (e.contains(i) != inc) return false;
  }
  return true;
}

// C(S, q) when it is neither empty nor the full set.
inline std::optional<PlayerSet> coexisting_conventions(const GameConfig& cfg, const PlayerSet& s, const Rational& q,
                                                       const ThresholdResult* known = nullptr) {
  if (s.empty()) throw ParameterError("coexisting conventions need a nonempty starting set");
  auto r = cascade(cfg, s, q);
  std::optional<PlayerSet> out;
  if (!r.final.empty() && !r.final.is_full()) out = std::move(r.final);
  if (known && (q > known->q_star) != out.has_value())
    throw InvariantError("coexisting conventions disagree with q > q* at q=" + q.to_string());
  return out;
}

// Largest r such that S is r-cohesive: min over i in S of |N_i n S| / d_i.
// Isolated members have no neighbor outside S and do not lower the minimum.
inline Rational cohesiveness(const Network& net, const PlayerSet& s) {
  if (s.empty()) throw ParameterError("cohesiveness of an empty set is undefined");
  if (s.universe() != net.node_count()) throw ParameterError("player set does not match network size");
  Rational best(1);
  for (Node i : s.members()) {
    auto nbrs = net.neighbors(i);
    if (nbrs.empty()) continue;
    std::int64_t inside = 0;
    for (Node j : nbrs) inside += s.contains(j) ? 1 : 0;
    Rational r(inside, static_cast<std::int64_t>(nbrs.size()));
    if (r < best) best = r;
  }
  return best;
}

// Every nonempty subset of A is at most r-cohesive. Decided through the
// contagion threshold from the complement of A (exogenously infected): true iff
// 1 - r <= q*. Requires unit weights and no global effect.
inline bool is_uniformly_at_most_cohesive(const GameConfig& cfg, const PlayerSet& a, const Rational& r) {
  if (!cfg.weights().is_unit() || !cfg.local_only())
    throw UnsupportedHypothesisError("uniform cohesion test needs unit weights and no global effect");
  detail::check_universe(cfg, a);
  PlayerSet start = a.complement();
  GameConfig local = cfg.with_infected(start);
  auto thr = full_contagion_threshold(local, start);
  return Rational(1) - r <= thr.q_star;
}

}  // namespace netcontagion
