#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "player_set.hpp"
#include "rng.hpp"

namespace netcontagion {

using Edge = std::pair<Node, Node>;

// Immutable simple undirected graph in compressed adjacency form. Neighbor lists
// are sorted and duplicate-free; node ids are 0..node_count()-1.
class Network {
 public:
  Network() = default;

  // Builds from an edge list. Duplicate edges (in either orientation) collapse;
  // self-loops and out-of-range endpoints throw ParameterError.
  Network(std::size_t node_count, std::span<const Edge> edges) : offsets_(node_count + 1, 0) {
    if (node_count == 0) throw ParameterError("network needs at least one node");
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count)
        throw ParameterError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside node range");
      if (u == v) throw ParameterError("self-loop at node " + std::to_string(u));
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    edge_count_ = canon.size();

    for (auto [u, v] : canon) {
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : canon) {
      adjacency_[cursor[u]++] = v;
      adjacency_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < node_count; ++i)
      std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);

    reverse_.resize(adjacency_.size());
    for (std::size_t i = 0; i < node_count; ++i)
      for (std::size_t slot = offsets_[i]; slot < offsets_[i + 1]; ++slot)
        reverse_[slot] = slot_of(adjacency_[slot], static_cast<Node>(i));
  }

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const Node> neighbors(Node i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(Node i) const { return offsets_[i + 1] - offsets_[i]; }

  // Position of j inside neighbors(i) as a global slot index, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t slot_of(Node i, Node j) const {
    auto first = adjacency_.begin() + offsets_[i];
    auto last = adjacency_.begin() + offsets_[i + 1];
    auto it = std::lower_bound(first, last, j);
    return (it != last && *it == j) ? static_cast<std::size_t>(it - adjacency_.begin()) : npos;
  }
  std::size_t slot_begin(Node i) const { return offsets_[i]; }
  // For slot (i -> j), the slot (j -> i).
  std::size_t reverse_slot(std::size_t slot) const { return reverse_[slot]; }

  bool has_edge(Node i, Node j) const { return i < node_count() && slot_of(i, j) != npos; }

  // Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Node u = 0; u < node_count(); ++u)
      for (Node v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> out(node_count());
    for (Node i = 0; i < node_count(); ++i) out[i] = degree(i);
    return out;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.offsets_ == b.offsets_ && a.adjacency_ == b.adjacency_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Node> adjacency_;
  std::vector<std::size_t> reverse_;
  std::size_t edge_count_ = 0;
};

inline bool is_connected(const Network& net) {
  const std::size_t n = net.node_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<Node> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Node u = stack.back();
    stack.pop_back();
    for (Node v : net.neighbors(u))
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == n;
}

// --- small deterministic families -------------------------------------------

inline Network make_path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(static_cast<Node>(i), static_cast<Node>(i + 1));
  return Network(n, e);
}

inline Network make_cycle(std::size_t n) {
  if (n < 3) throw ParameterError("cycle needs at least 3 nodes");
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(static_cast<Node>(i), static_cast<Node>((i + 1) % n));
  return Network(n, e);
}

// Node 0 is the center.
inline Network make_star(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(Node{0}, static_cast<Node>(i));
  return Network(n, e);
}

inline Network make_complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(static_cast<Node>(i), static_cast<Node>(j));
  return Network(n, e);
}

// --- Barabasi-Albert ----------------------------------------------------------

inline constexpr std::string_view kBaCoreConvention = "star on m+1 nodes (center 0)";

// Preferential attachment. The core is a star on nodes 0..m; each later node
// draws m distinct targets from the degree-weighted node list, rejecting
// repeats. Total edges: m*(n-m).
inline Network generate_ba(std::size_t n, std::size_t m, RngSeed seed) {
  if (m == 0) throw ParameterError("attachment parameter m must be positive");
  if (m >= n) throw ParameterError("barabasi-albert requires m < n (got n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");

  std::vector<Edge> edges;
  edges.reserve(m * (n - m));
  std::vector<Node> weighted;  // node i appears degree(i) times
  weighted.reserve(2 * m * (n - m));
  for (Node leaf = 1; leaf <= m; ++leaf) {
    edges.emplace_back(Node{0}, leaf);
    weighted.push_back(0);
  }
  for (Node leaf = 1; leaf <= m; ++leaf) weighted.push_back(leaf);

  Rng rng(seed);
  std::vector<Node> targets;
  std::vector<char> taken(n, 0);
  for (std::size_t source = m + 1; source < n; ++source) {
    targets.clear();
    while (targets.size() < m) {
      Node t = weighted[rng.uniform_below(weighted.size())];
      if (!taken[t]) {
        taken[t] = 1;
        targets.push_back(t);
      }
    }
    for (Node t : targets) {
      taken[t] = 0;
      edges.emplace_back(t, static_cast<Node>(source));
      weighted.push_back(t);
    }
    weighted.insert(weighted.end(), m, static_cast<Node>(source));
  }
  return Network(n, edges);
}

// --- edge-list text format ---------------------------------------------------

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_index(std::string_view tok, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("non-integer token '" + std::string(tok) + "'", line);
  if (v < 0) throw ParseError("negative node index " + std::string(tok), line);
  if (v > static_cast<std::int64_t>(UINT32_MAX - 1)) throw ParseError("node index too large", line);
  return v;
}
}  // namespace detail

// Parses "u v" lines. '#' starts a comment; a "# nodes N" comment pins the node
// count (so trailing isolated nodes survive a round trip).
inline Network load_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::size_t declared = 0;
  bool any = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      auto toks = detail::split_ws(line.substr(hash + 1));
      if (toks.size() == 2 && toks[0] == "nodes") declared = static_cast<std::size_t>(detail::parse_index(toks[1], line_no));
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto toks = detail::split_ws(line);
    if (toks.size() != 2) throw ParseError("expected two node indices, got " + std::to_string(toks.size()) + " tokens", line_no);
    auto u = detail::parse_index(toks[0], line_no);
    auto v = detail::parse_index(toks[1], line_no);
    if (u == v) throw ParseError("self-loop at node " + std::to_string(u), line_no);
    edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
    max_index = std::max<std::size_t>(max_index, static_cast<std::size_t>(std::max(u, v)));
    any = true;
    if (end == text.size()) break;
  }
  if (!any && declared == 0) throw ParseError("edge list contains no edges");
  std::size_t n = any ? max_index + 1 : 0;
  if (declared) {
    if (declared < n) throw ParseError("declared node count " + std::to_string(declared) + " smaller than max index + 1");
    n = declared;
  }
  return Network(n, edges);
}

// Canonical form: "# nodes N" header, then one "u v" line per edge, u < v, sorted.
inline std::string save_edge_list(const Network& net, std::string_view comment = {}) {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "# nodes " << net.node_count() << '\n';
  for (auto [u, v] : net.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

}  // namespace netcontagion
