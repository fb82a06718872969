#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "contagion.hpp"
#include "errors.hpp"
#include "game.hpp"

// Brute-force ground truth over all subsets. Exponential; guarded at 20 players.
namespace netcontagion::oracle {

inline constexpr std::size_t kMaxPlayers = 20;

namespace detail {

inline void guard(std::size_t n, const char* what) {
  if (n > kMaxPlayers)
    throw SizeGuardError(std::string(what) + ": " + std::to_string(n) + " players exceeds the brute-force limit of " +
                         std::to_string(kMaxPlayers));
}

inline std::uint64_t mask_of(const PlayerSet& s) {
  std::uint64_t m = 0;
  for (Node i : s.members()) m |= std::uint64_t{1} << i;
  return m;
}

// Three-clause equilibrium definition, evaluated from scratch.
inline bool nash_by_definition(const GameConfig& cfg, const PlayerSet& e, const Rational& q) {
  for (Node i = 0; i < cfg.node_count(); ++i) {
    const bool exo = cfg.infected().contains(i);
    if (exo && !e.contains(i)) return false;
    if (exo) continue;
    const bool wants = incentive_holds(cfg, i, support_of(cfg, i, e), q);
    if (e.contains(i) && !wants) return false;
    if (!e.contains(i) && wants) return false;
  }
  return true;
}

}  // namespace detail

// All Nash equilibria at q, by cardinality then lexicographic member list.
inline std::vector<PlayerSet> enumerate_nash(const GameConfig& cfg, const Rational& q) {
  const std::size_t n = cfg.node_count();
  detail::guard(n, "enumerate_nash");
  std::vector<PlayerSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    PlayerSet e = PlayerSet::from_mask(n, mask);
    if (detail::nash_by_definition(cfg, e, q)) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const PlayerSet& a, const PlayerSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
  });
  return out;
}

// Minimum-cardinality equilibrium containing S. Throws InvariantError if two
// distinct minimal ones exist (the minimal containing equilibrium is unique).
inline PlayerSet smallest_nash_containing(const GameConfig& cfg, const PlayerSet& s, const Rational& q) {
  const std::size_t n = cfg.node_count();
  detail::guard(n, "smallest_nash_containing");
  const std::uint64_t base = detail::mask_of(s);
  const std::uint64_t free_bits = ((std::uint64_t{1} << n) - 1) & ~base;
  std::vector<PlayerSet> best;
  // Enumerate supersets of S by walking the subsets of the free bits.
  for (std::uint64_t sub = free_bits;; sub = (sub - 1) & free_bits) {
    PlayerSet e = PlayerSet::from_mask(n, base | sub);
    if (detail::nash_by_definition(cfg, e, q)) {
      if (best.empty() || e.size() < best.front().size()) {
        best.clear();
        best.push_back(std::move(e));
      } else if (e.size() == best.front().size()) {
        best.push_back(std::move(e));
      }
    }
    if (sub == 0) break;
  }
  if (best.empty()) throw InvariantError("no equilibrium contains the starting set");
  if (best.size() > 1)
    throw InvariantError("minimal equilibrium containing " + s.to_string() + " is not unique: " + best[0].to_string() +
                         " and " + best[1].to_string());
  return best.front();
}

// Every value a switch threshold c*s/(c*w_i - phi_i(k/(I-d_i-1))) can take, over
// all players, all neighbor subsets and all outside counts, plus 0 and 1.
inline std::vector<Rational> threshold_candidates(const GameConfig& cfg) {
  const std::size_t n = cfg.node_count();
  const Network& net = cfg.network();
  std::set<Rational> cands{Rational(0), Rational(1)};
  for (Node i = 0; i < n; ++i) {
    const std::size_t d = net.degree(i);
    std::set<Rational> supports;
    if (cfg.weights().is_unit()) {
      for (std::size_t s = 0; s <= d; ++s) supports.insert(Rational(static_cast<std::int64_t>(s)));
    } else {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        Rational sum(0);
        for (std::size_t k = 0; k < d; ++k)
          if ((mask >> k) & 1U) sum += cfg.weights().at_slot(net.slot_begin(i) + k);
        supports.insert(sum);
      }
    }
    const std::int64_t m = cfg.outside_size(i);
    for (std::int64_t k = 0; k <= std::max<std::int64_t>(m, 0); ++k) {
      Rational den = cfg.c() * cfg.row_sum(i) - cfg.phi(i, k);
      if (den <= Rational(0)) continue;
      for (const auto& s : supports) {
        Rational t = cfg.c() * s / den;
        if (t <= Rational(1)) cands.insert(t);
      }
    }
  }
  return {cands.begin(), cands.end()};
}

// sup{q : C(S, q) = I}, found by evaluating the cascade at every candidate.
inline Rational brute_threshold(const GameConfig& cfg, const PlayerSet& s) {
  detail::guard(cfg.node_count(), "brute_threshold");
  auto cands = threshold_candidates(cfg);
  for (auto it = cands.rbegin(); it != cands.rend(); ++it)
    if (cascade(cfg, s, *it).final.is_full()) return *it;
  throw InvariantError("no candidate q yields full contagion (q = 0 always should)");
}

// Every nonempty subset of A has cohesiveness at most r.
inline bool brute_uniform_cohesion(const Network& net, const PlayerSet& a, const Rational& r) {
  detail::guard(a.size(), "brute_uniform_cohesion");
  auto members = a.members();
  const std::size_t k = members.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    PlayerSet sub(net.node_count());
    for (std::size_t b = 0; b < k; ++b)
      if ((mask >> b) & 1U) sub.insert(members[b]);
    if (cohesiveness(net, sub) > r) return false;
  }
  return true;
}

}  // namespace netcontagion::oracle
