#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace netcontagion {

using Node = std::uint32_t;

// Set of players playing action 1, stored as a membership vector with a cached
// cardinality.
class PlayerSet {
 public:
  PlayerSet() = default;
  explicit PlayerSet(std::size_t universe) : bits_(universe, 0) {}
  PlayerSet(std::size_t universe, std::initializer_list<Node> members) : PlayerSet(universe) {
    for (Node i : members) insert(i);
  }
  PlayerSet(std::size_t universe, std::span<const Node> members) : PlayerSet(universe) {
    for (Node i : members) insert(i);
  }

  static PlayerSet full(std::size_t universe) {
    PlayerSet s(universe);
    std::fill(s.bits_.begin(), s.bits_.end(), std::uint8_t{1});
    s.count_ = universe;
    return s;
  }

  // Bit i of `mask` selects player i; universe <= 64.
  static PlayerSet from_mask(std::size_t universe, std::uint64_t mask) {
    PlayerSet s(universe);
    for (std::size_t i = 0; i < universe; ++i)
      if ((mask >> i) & 1U) s.insert(static_cast<Node>(i));
    return s;
  }

  std::size_t universe() const noexcept { return bits_.size(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  bool is_full() const noexcept { return count_ == bits_.size(); }

  bool contains(Node i) const noexcept { return i < bits_.size() && bits_[i] != 0; }

  void insert(Node i) {
    check(i);
    if (!bits_[i]) {
      bits_[i] = 1;
      ++count_;
    }
  }
  void erase(Node i) {
    check(i);
    if (bits_[i]) {
      bits_[i] = 0;
      --count_;
    }
  }

  PlayerSet complement() const {
    PlayerSet s(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) s.bits_[i] = bits_[i] ? 0 : 1;
    s.count_ = bits_.size() - count_;
    return s;
  }

  PlayerSet& unite(const PlayerSet& other) {
    same_universe(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (other.bits_[i] && !bits_[i]) {
        bits_[i] = 1;
        ++count_;
      }
    return *this;
  }

  bool is_subset_of(const PlayerSet& other) const {
    same_universe(other);
    if (count_ > other.count_) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] && !other.bits_[i]) return false;
    return true;
  }

  std::vector<Node> members() const {
    std::vector<Node> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(static_cast<Node>(i));
    return out;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (Node i : members()) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const PlayerSet& a, const PlayerSet& b) { return a.bits_ == b.bits_; }

 private:
  void check(Node i) const {
    if (i >= bits_.size())
      throw ParameterError("player " + std::to_string(i) + " outside [0, " + std::to_string(bits_.size()) + ")");
  }
  void same_universe(const PlayerSet& other) const {
    if (other.bits_.size() != bits_.size()) throw ParameterError("player sets over different universes");
  }

  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

inline PlayerSet set_union(PlayerSet a, const PlayerSet& b) { return a.unite(b); }

}  // namespace netcontagion
