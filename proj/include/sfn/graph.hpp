#pragma once

// Undirected simple graph on node ids 1..N: degree vector, edge list
// (insertion order preserved) and adjacency.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sfn/powerlaw.hpp"

namespace sfn {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class AddEdgeResult { added, duplicate };

inline std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n_nodes) : n_(n_nodes), adjacency_(n_nodes + 1) {
    if (n_nodes > std::numeric_limits<NodeId>::max() - 1) {
      throw std::length_error("Graph: node count exceeds id range");
    }
  }

  [[nodiscard]] std::size_t node_count() const { return n_; }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }

  [[nodiscard]] bool valid(NodeId i) const { return i >= 1 && i <= n_; }

  [[nodiscard]] std::size_t degree(NodeId i) const {
    check(i);
    return adjacency_[i].size();
  }

  [[nodiscard]] std::span<const NodeId> neighbors(NodeId i) const {
    check(i);
    return adjacency_[i];
  }

  [[nodiscard]] std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> out(n_);
    for (NodeId i = 1; i <= n_; ++i) out[i - 1] = adjacency_[i].size();
    return out;
  }

  [[nodiscard]] std::size_t max_degree() const {
    std::size_t best = 0;
    for (NodeId i = 1; i <= n_; ++i) best = std::max(best, adjacency_[i].size());
    return best;
  }

  [[nodiscard]] bool has_edge(NodeId i, NodeId j) const {
    return index_.contains(edge_key(i, j));
  }

  /// Appends (i,j). Self-loops and out-of-range ids throw; an existing edge
  /// is left untouched and reported as a duplicate.
  AddEdgeResult add_edge(NodeId i, NodeId j) {
    check(i);
    check(j);
    if (i == j) throw std::invalid_argument("Graph::add_edge: self-loop at node " + std::to_string(i));
    const auto [it, inserted] = index_.try_emplace(edge_key(i, j), edges_.size());
    if (!inserted) return AddEdgeResult::duplicate;
    edges_.push_back({i, j});
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
    return AddEdgeResult::added;
  }

  /// Removes (i,j) if present. The last edge takes the removed slot.
  bool remove_edge(NodeId i, NodeId j) {
    const auto it = index_.find(edge_key(i, j));
    if (it == index_.end()) return false;
    const std::size_t slot = it->second;
    index_.erase(it);
    if (slot + 1 != edges_.size()) {
      edges_[slot] = edges_.back();
      index_[edge_key(edges_[slot].u, edges_[slot].v)] = slot;
    }
    edges_.pop_back();
    erase_neighbor(i, j);
    erase_neighbor(j, i);
    return true;
  }

 private:
  void check(NodeId i) const {
    if (!valid(i)) {
      throw std::out_of_range("node id " + std::to_string(i) + " outside 1.." + std::to_string(n_));
    }
  }

  void erase_neighbor(NodeId at, NodeId gone) {
    auto& list = adjacency_[at];
    list.erase(std::find(list.begin(), list.end(), gone));
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Core / server partition

struct CorePartition {
  std::size_t threshold = 1;
  std::vector<NodeId> core_ids;
  std::vector<NodeId> server_ids;

  [[nodiscard]] std::size_t core_count() const { return core_ids.size(); }
  [[nodiscard]] bool is_core(NodeId i) const {
    return std::binary_search(core_ids.begin(), core_ids.end(), i);
  }
};

/// Nodes with degree >= threshold are cores. A threshold above the maximum
/// degree yields an empty core set.
inline CorePartition partition(const Graph& g, std::size_t threshold) {
  if (threshold < 1) throw std::invalid_argument("partition: threshold must be >= 1");
  CorePartition part;
  part.threshold = threshold;
  for (NodeId i = 1; i <= g.node_count(); ++i) {
    (g.degree(i) >= threshold ? part.core_ids : part.server_ids).push_back(i);
  }
  return part;
}

// ---------------------------------------------------------------------------
// BFS

inline constexpr std::size_t kDefaultDMax = 10;

/// Hop counts from one source. Nodes farther than d_max (or unreachable) are
/// absent. The source itself is not part of the map.
class HopDistances {
 public:
  HopDistances() = default;
  HopDistances(NodeId source, std::vector<std::int32_t> hops)
      : source_(source), hops_(std::move(hops)) {}

  [[nodiscard]] NodeId source() const { return source_; }

  [[nodiscard]] std::optional<std::uint32_t> find(NodeId i) const {
    if (i == source_ || i >= hops_.size() || hops_[i] < 0) return std::nullopt;
    return static_cast<std::uint32_t>(hops_[i]);
  }

  [[nodiscard]] bool contains(NodeId i) const { return find(i).has_value(); }

  [[nodiscard]] std::uint32_t at(NodeId i) const {
    const auto d = find(i);
    if (!d) throw std::out_of_range("HopDistances: node " + std::to_string(i) + " not reached");
    return *d;
  }

  /// Number of mapped nodes.
  [[nodiscard]] std::size_t size() const {
    std::size_t count = 0;
    for (std::size_t i = 1; i < hops_.size(); ++i) count += (hops_[i] > 0);
    return count;
  }

  /// Raw table indexed by node id; -1 means "not within d_max", source is 0.
  [[nodiscard]] std::span<const std::int32_t> raw() const { return hops_; }

 private:
  NodeId source_ = 0;
  std::vector<std::int32_t> hops_;
};

inline HopDistances bfs_distances(const Graph& g, NodeId source, std::size_t d_max = kDefaultDMax) {
  if (!g.valid(source)) throw std::out_of_range("bfs_distances: invalid source " + std::to_string(source));
  std::vector<std::int32_t> hops(g.node_count() + 1, -1);
  hops[source] = 0;
  std::vector<NodeId> frontier{source};
  std::vector<NodeId> next;
  for (std::size_t depth = 1; depth <= d_max && !frontier.empty(); ++depth) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId w : g.neighbors(u)) {
        if (hops[w] < 0) {
          hops[w] = static_cast<std::int32_t>(depth);
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
  return HopDistances(source, std::move(hops));
}

/// Connected components as sorted node lists, ordered by smallest member.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  std::vector<std::vector<NodeId>> out;
  std::vector<bool> seen(g.node_count() + 1, false);
  for (NodeId s = 1; s <= g.node_count(); ++s) {
    if (seen[s]) continue;
    std::vector<NodeId> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (NodeId w : g.neighbors(comp[head])) {
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// probs[k-1] = |{i : degree(i) = k}| / N. Degree-0 nodes count toward N but
/// are outside the support, so the total is below 1 when any are present.
inline DegreeDistribution empirical_degree_distribution(const Graph& g) {
  if (g.node_count() < 1) throw std::invalid_argument("empirical_degree_distribution: empty graph");
  DegreeDistribution d;
  d.probs.assign(g.max_degree(), 0.0);
  std::vector<std::size_t> counts(g.max_degree() + 1, 0);
  for (NodeId i = 1; i <= g.node_count(); ++i) ++counts[g.degree(i)];
  const auto n = static_cast<double>(g.node_count());
  for (std::size_t k = 1; k < counts.size(); ++k) d.probs[k - 1] = static_cast<double>(counts[k]) / n;
  return d;
}

// ---------------------------------------------------------------------------
// Edge-list file: header "# nodes=N gamma=G seed=S", then one "i,j" per line.

struct EdgeListFile {
  Graph graph;
  double gamma = 2.5;
  std::uint64_t seed = 0;
};

/// Shortest decimal text that parses back to the same double.
inline std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline void write_edge_list(std::ostream& out, const Graph& g, double gamma, std::uint64_t seed) {
  out << "# nodes=" << g.node_count() << " gamma=" << format_real(gamma) << " seed=" << seed << '\n';
  for (const Edge& e : g.edges()) out << e.u << ',' << e.v << '\n';
}

inline void write_edge_list(std::ostream& out, const EdgeListFile& file) {
  write_edge_list(out, file.graph, file.gamma, file.seed);
}

namespace detail {

template <class T>
T parse_number(std::string_view text, std::string_view what, std::size_t line) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::runtime_error("edge list line " + std::to_string(line) + ": bad " + std::string(what) +
                             " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

inline EdgeListFile read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("edge list: missing header");
  if (!line.starts_with("# ")) throw std::runtime_error("edge list: header must start with '# '");

  std::optional<std::size_t> nodes;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw std::runtime_error("edge list: malformed header field '" + field + "'");
    const std::string_view key(field.data(), eq);
    const std::string_view value(field.data() + eq + 1, field.size() - eq - 1);
    if (key == "nodes") nodes = detail::parse_number<std::size_t>(value, "nodes", 1);
    else if (key == "gamma") gamma = detail::parse_number<double>(value, "gamma", 1);
    else if (key == "seed") seed = detail::parse_number<std::uint64_t>(value, "seed", 1);
    else throw std::runtime_error("edge list: unknown header field '" + std::string(key) + "'");
  }
  if (!nodes || !gamma || !seed) throw std::runtime_error("edge list: header needs nodes, gamma and seed");

  EdgeListFile file{Graph(*nodes), *gamma, *seed};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) + ": expected 'i,j'");
    }
    const std::string_view text(line);
    const auto u = detail::parse_number<NodeId>(text.substr(0, comma), "node id", line_no);
    const auto v = detail::parse_number<NodeId>(text.substr(comma + 1), "node id", line_no);
    if (file.graph.add_edge(u, v) == AddEdgeResult::duplicate) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) + ": duplicate edge");
    }
  }
  return file;
}

}  // namespace sfn
