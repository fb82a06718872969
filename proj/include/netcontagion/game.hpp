#pragma once

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "network.hpp"
#include "player_set.hpp"
#include "rational.hpp"

namespace netcontagion {

// q = c/(b+c) and back. The engine works in q with c fixed; b is for reporting.
inline Rational resilience_from_benefit(const Rational& b, const Rational& c) { return c / (b + c); }
inline Rational benefit_from_resilience(const Rational& q, const Rational& c) {
  if (q.is_zero()) throw ParameterError("q = 0 corresponds to unbounded benefit");
  return c * (Rational(1) - q) / q;
}

// w_{i,j} for every directed neighbor relation, stored per adjacency slot.
class InfluenceWeights {
 public:
  static InfluenceWeights unit() { return InfluenceWeights{}; }

  // Entries (i, j, w) override the default weight 1; j must be a neighbor of i.
  static InfluenceWeights from_entries(const Network& net, std::span<const std::tuple<Node, Node, Rational>> entries) {
    InfluenceWeights w;
    w.slots_.assign(net.edge_count() * 2, Rational(1));
    for (const auto& [i, j, value] : entries) {
      if (i >= net.node_count()) throw ParameterError("weight for unknown player " + std::to_string(i));
      auto slot = net.slot_of(i, j);
      if (slot == Network::npos)
        throw ParameterError("weight (" + std::to_string(i) + "," + std::to_string(j) + ") is not on an edge");
      if (value.is_negative()) throw ParameterError("negative weight on (" + std::to_string(i) + "," + std::to_string(j) + ")");
      w.slots_[slot] = value;
    }
    w.check_unit();
    return w;
  }

  // One weight per adjacency slot, in Network slot order.
  static InfluenceWeights from_slots(std::vector<Rational> slots) {
    for (const auto& v : slots)
      if (v.is_negative()) throw ParameterError("negative influence weight");
    InfluenceWeights w;
    w.slots_ = std::move(slots);
    w.check_unit();
    return w;
  }

  bool is_unit() const noexcept { return slots_.empty(); }
  Rational at_slot(std::size_t slot) const { return slots_.empty() ? Rational(1) : slots_[slot]; }
  Rational weight(const Network& net, Node i, Node j) const {
    auto slot = net.slot_of(i, j);
    if (slot == Network::npos) return Rational(0);
    return at_slot(slot);
  }
  const std::vector<Rational>& slots() const noexcept { return slots_; }

 private:
  void check_unit() {
    for (const auto& v : slots_)
      if (v != Rational(1)) return;
    slots_.clear();
  }
  std::vector<Rational> slots_;  // empty means every weight is 1
};

// Monotone step function p -> phi(p) with phi(0) = 0. A step (p_k, v_k) means
// phi(p) = v_k for p >= p_k up to the next step.
class StepTable {
 public:
  StepTable() = default;
  explicit StepTable(std::vector<std::pair<Rational, Rational>> steps) : steps_(std::move(steps)) {
    Rational prev_p(-1);
    Rational prev_v(0);
    for (const auto& [p, v] : steps_) {
      if (p < Rational(0) || p > Rational(1)) throw ParameterError("step table breakpoint outside [0,1]");
      if (p <= prev_p) throw ParameterError("step table breakpoints must be strictly increasing");
      if (v < prev_v) throw ParameterError("step table values must be weakly increasing");
      if (p.is_zero() && !v.is_zero()) throw ParameterError("global effect must satisfy phi(0) = 0");
      prev_p = p;
      prev_v = v;
    }
  }
  Rational at(const Rational& p) const {
    Rational value(0);
    for (const auto& [bp, v] : steps_) {
      if (bp > p) break;
      value = v;
    }
    return value;
  }
  Rational max_value() const { return steps_.empty() ? Rational(0) : steps_.back().second; }
  const std::vector<std::pair<Rational, Rational>>& steps() const noexcept { return steps_; }

 private:
  std::vector<std::pair<Rational, Rational>> steps_;
};

// phi_i(p) = alpha * c * d_i * p.
struct ParametricEffect {
  Rational alpha;
};

// One table per player, or a single table shared by all players.
struct TabularEffect {
  std::vector<StepTable> tables;
  const StepTable& table_for(Node i) const { return tables.size() == 1 ? tables.front() : tables.at(i); }
};

class GlobalEffect {
 public:
  static GlobalEffect none() { return parametric(Rational(0)); }
  static GlobalEffect parametric(Rational alpha) {
    if (alpha < Rational(0) || alpha > Rational(1)) throw ParameterError("alpha must lie in [0,1], got " + alpha.to_string());
    return GlobalEffect(ParametricEffect{alpha});
  }
  static GlobalEffect tabular(std::vector<StepTable> tables) {
    if (tables.empty()) throw ParameterError("tabular global effect needs at least one table");
    return GlobalEffect(TabularEffect{std::move(tables)});
  }

  bool is_parametric() const noexcept { return std::holds_alternative<ParametricEffect>(effect_); }
  const ParametricEffect& as_parametric() const { return std::get<ParametricEffect>(effect_); }
  const TabularEffect& as_tabular() const { return std::get<TabularEffect>(effect_); }

  bool is_zero() const {
    if (is_parametric()) return as_parametric().alpha.is_zero();
    for (const auto& t : as_tabular().tables)
      if (!t.max_value().is_zero()) return false;
    return true;
  }

 private:
  explicit GlobalEffect(std::variant<ParametricEffect, TabularEffect> e) : effect_(std::move(e)) {}
  std::variant<ParametricEffect, TabularEffect> effect_;
};

enum class ConnectivityPolicy { warn, strict, silent };

// The quantities the incentive condition reads for player i against a set E:
// neighbors in E (count and weighted sum) and non-neighbors in E.
struct Support {
  std::int64_t neighbor_count = 0;
  Rational weighted;  // unused for unit weights
  std::int64_t outside_count = 0;
};

class GameConfig {
 public:
  GameConfig(std::shared_ptr<const Network> network, InfluenceWeights weights, Rational c, GlobalEffect global,
             PlayerSet infected, ConnectivityPolicy policy = ConnectivityPolicy::warn)
      : network_(std::move(network)),
        weights_(std::move(weights)),
        c_(c),
        global_(std::move(global)),
        infected_(std::move(infected)) {
    if (!network_) throw ParameterError("game needs a network");
    const std::size_t n = network_->node_count();
    if (c_ <= Rational(0)) throw ParameterError("miscoordination cost c must be positive");
    if (infected_.universe() == 0) infected_ = PlayerSet(n);
    if (infected_.universe() != n) throw ParameterError("infected set does not match network size");
    if (!weights_.is_unit() && weights_.slots().size() != 2 * network_->edge_count())
      throw ParameterError("weight vector does not match network");

    row_sum_.resize(n);
    for (Node i = 0; i < n; ++i) {
      Rational sum(0);
      if (weights_.is_unit()) {
        sum = Rational(static_cast<std::int64_t>(network_->degree(i)));
      } else {
        for (std::size_t s = network_->slot_begin(i), e = s + network_->degree(i); s < e; ++s) sum += weights_.at_slot(s);
      }
      if (sum <= Rational(0)) throw ParameterError("player " + std::to_string(i) + " has zero total influence weight");
      row_sum_[i] = sum;
    }

    if (global_.is_parametric()) {
      const Rational& alpha = global_.as_parametric().alpha;
      for (Node i = 0; i < n; ++i)
        if (alpha * Rational(static_cast<std::int64_t>(network_->degree(i))) > row_sum_[i])
          throw ParameterError("global effect exceeds c*w_i for player " + std::to_string(i));
      unit_parametric_ = weights_.is_unit();
      alpha_num_ = alpha.num();
      alpha_den_ = alpha.den();
    } else {
      const auto& tab = global_.as_tabular();
      if (tab.tables.size() != 1 && tab.tables.size() != n) throw ParameterError("need one step table or one per player");
      for (Node i = 0; i < n; ++i)
        if (tab.table_for(i).max_value() > c_ * row_sum_[i])
          throw ParameterError("global effect exceeds c*w_i for player " + std::to_string(i));
    }
    local_only_ = global_.is_zero();

    if (!is_connected(*network_)) {
      if (policy == ConnectivityPolicy::strict) throw ParameterError("network is not connected");
      warnings_.emplace_back("network is not connected; results are computed componentwise");
      if (policy == ConnectivityPolicy::warn) std::cerr << "warning: " << warnings_.back() << '\n';
    }
  }

  // Unit weights, c = 1, parametric alpha.
  static GameConfig parametric(std::shared_ptr<const Network> network, Rational alpha, PlayerSet infected,
                               ConnectivityPolicy policy = ConnectivityPolicy::warn) {
    return GameConfig(std::move(network), InfluenceWeights::unit(), Rational(1), GlobalEffect::parametric(alpha),
                      std::move(infected), policy);
  }

  GameConfig with_infected(PlayerSet infected) const {
    GameConfig copy = *this;
    if (infected.universe() != node_count()) throw ParameterError("infected set does not match network size");
    copy.infected_ = std::move(infected);
    return copy;
  }
  GameConfig with_global(GlobalEffect global) const {
    return GameConfig(network_, weights_, c_, std::move(global), infected_, ConnectivityPolicy::silent);
  }

  const Network& network() const noexcept { return *network_; }
  std::shared_ptr<const Network> network_ptr() const noexcept { return network_; }
  std::size_t node_count() const noexcept { return network_->node_count(); }
  const InfluenceWeights& weights() const noexcept { return weights_; }
  const Rational& c() const noexcept { return c_; }
  const GlobalEffect& global() const noexcept { return global_; }
  const PlayerSet& infected() const noexcept { return infected_; }
  const Rational& row_sum(Node i) const { return row_sum_[i]; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  // Unit weights with phi_i(p) = alpha*c*d_i*p: the incentive test reduces to
  // integer cross-multiplication.
  bool unit_parametric() const noexcept { return unit_parametric_; }
  // phi identically zero: only neighbors of a newly infected player can change state.
  bool local_only() const noexcept { return local_only_; }
  std::int64_t alpha_num() const noexcept { return alpha_num_; }
  std::int64_t alpha_den() const noexcept { return alpha_den_; }

  // Size of the aggregate p_i ranges over: I - d_i - 1.
  std::int64_t outside_size(Node i) const {
    return static_cast<std::int64_t>(node_count()) - static_cast<std::int64_t>(network_->degree(i)) - 1;
  }

  Rational share(Node i, std::int64_t outside_count) const {
    auto m = outside_size(i);
    return m == 0 ? Rational(0) : Rational(outside_count, m);
  }

  // phi_i(p_i) given the number of non-neighbors in the set.
  Rational phi(Node i, std::int64_t outside_count) const {
    Rational p = share(i, outside_count);
    if (global_.is_parametric())
      return global_.as_parametric().alpha * c_ * Rational(static_cast<std::int64_t>(network_->degree(i))) * p;
    return global_.as_tabular().table_for(i).at(p);
  }

 private:
  std::shared_ptr<const Network> network_;
  InfluenceWeights weights_;
  Rational c_;
  GlobalEffect global_;
  PlayerSet infected_;
  std::vector<Rational> row_sum_;
  std::vector<std::string> warnings_;
  bool unit_parametric_ = false;
  bool local_only_ = false;
  std::int64_t alpha_num_ = 0;
  std::int64_t alpha_den_ = 1;
};

// --- incentive arithmetic ------------------------------------------------------

inline Support support_of(const GameConfig& cfg, Node i, const PlayerSet& e) {
  Support sup;
  const Network& net = cfg.network();
  const std::size_t base = net.slot_begin(i);
  auto nbrs = net.neighbors(i);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    if (!e.contains(nbrs[k])) continue;
    ++sup.neighbor_count;
    if (!cfg.weights().is_unit()) sup.weighted += cfg.weights().at_slot(base + k);
  }
  if (cfg.weights().is_unit()) sup.weighted = Rational(sup.neighbor_count);
  sup.outside_count = static_cast<std::int64_t>(e.size()) - sup.neighbor_count - (e.contains(i) ? 1 : 0);
  return sup;
}

// Endogenous part of the incentive test: s_i/w_i + phi_i(p_i)/(w_i(b+c)) >= q,
// i.e. c*s_i >= q*(c*w_i - phi_i(p_i)). Ties count as incentive.
inline bool incentive_holds(const GameConfig& cfg, Node i, const Support& sup, const Rational& q) {
  if (q.is_zero()) return true;
  if (cfg.unit_parametric()) {
    using wide = __int128;
    std::int64_t d = static_cast<std::int64_t>(cfg.network().degree(i));
    std::int64_t m = cfg.outside_size(i);
    std::int64_t k = sup.outside_count;
    if (m == 0) {
      m = 1;
      k = 0;
    }
    const wide lhs = static_cast<wide>(sup.neighbor_count) * m * cfg.alpha_den() * q.den();
    const wide rhs = static_cast<wide>(q.num()) * d * (static_cast<wide>(cfg.alpha_den()) * m - static_cast<wide>(cfg.alpha_num()) * k);
    return lhs >= rhs;
  }
  const Rational& c = cfg.c();
  return c * sup.weighted >= q * (c * cfg.row_sum(i) - cfg.phi(i, sup.outside_count));
}

// Largest q at which player i has incentive given `sup`: c*s_i / (c*w_i - phi_i(p_i)).
inline Rational threshold_from_support(const GameConfig& cfg, Node i, const Support& sup) {
  if (cfg.unit_parametric()) {
    using wide = __int128;
    std::int64_t d = static_cast<std::int64_t>(cfg.network().degree(i));
    std::int64_t m = cfg.outside_size(i);
    std::int64_t k = sup.outside_count;
    if (m == 0) {
      m = 1;
      k = 0;
    }
    const wide den = static_cast<wide>(d) * (static_cast<wide>(cfg.alpha_den()) * m - static_cast<wide>(cfg.alpha_num()) * k);
    if (den <= 0) throw InvariantError("switch threshold undefined for player " + std::to_string(i) + ": phi_i(p_i) >= c*w_i");
    return Rational::from_wide(static_cast<wide>(sup.neighbor_count) * m * cfg.alpha_den(), den);
  }
  const Rational& c = cfg.c();
  Rational den = c * cfg.row_sum(i) - cfg.phi(i, sup.outside_count);
  if (den <= Rational(0))
    throw InvariantError("switch threshold undefined for player " + std::to_string(i) + ": phi_i(p_i) >= c*w_i");
  return c * sup.weighted / den;
}

// s_i(E) = sum of w_{i,j} over neighbors j in E.
inline Rational local_support(const GameConfig& cfg, Node i, const PlayerSet& e) { return support_of(cfg, i, e).weighted; }

// p_i(E) = |E \ (N_i u {i})| / (I - d_i - 1), defined as 0 when I - d_i - 1 = 0.
inline Rational global_share(const GameConfig& cfg, Node i, const PlayerSet& e) {
  return cfg.share(i, support_of(cfg, i, e).outside_count);
}

inline bool has_incentive(const GameConfig& cfg, Node i, const PlayerSet& e, const Rational& q) {
  if (cfg.infected().contains(i)) return true;
  return incentive_holds(cfg, i, support_of(cfg, i, e), q);
}

inline Rational switch_threshold(const GameConfig& cfg, Node i, const PlayerSet& e) {
  return threshold_from_support(cfg, i, support_of(cfg, i, e));
}

}  // namespace netcontagion
