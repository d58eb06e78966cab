#pragma once

// Rewires every edge of an existing graph: two consecutive L-hop biased
// random walks choose the new endpoints c and d, the edge c-d replaces the
// original one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfn/centralized.hpp"
#include "sfn/graph.hpp"
#include "sfn/log.hpp"

namespace sfn {

/// Grouping of the id-ratio exponent 1/(alpha gamma - 1).
///   alpha_times_gamma_minus_1:      1 / (alpha * (gamma - 1))
///   alpha_times_gamma_then_minus_1: 1 / ((alpha * gamma) - 1), the default
enum class ExponentGrouping { alpha_times_gamma_minus_1, alpha_times_gamma_then_minus_1 };

struct RewireWalkConfig {
  std::size_t walk_length = 10;
  double gamma = 2.5;
  /// Defaults to the goh convention 1 / (gamma - 1) when unset (<= 0).
  double alpha = 0.0;
  std::uint64_t seed = 0;
  ExponentGrouping exponent_grouping = ExponentGrouping::alpha_times_gamma_then_minus_1;
  std::size_t second_walk_retries = 16;
};

inline double bias_exponent(const RewireWalkConfig& config) {
  const double alpha = config.alpha > 0.0 ? config.alpha : alpha_for(config.gamma, AlphaConvention::goh);
  const double denom = config.exponent_grouping == ExponentGrouping::alpha_times_gamma_minus_1
                           ? alpha * (config.gamma - 1.0)
                           : alpha * config.gamma - 1.0;
  if (!(denom > 0.0)) {
    throw std::domain_error("bias_exponent: non-positive exponent denominator " + std::to_string(denom));
  }
  return 1.0 / denom;
}

/// h = (d_a / d_b) * (id_a / id_b)^exponent.
inline double bias_ratio(const Graph& g, NodeId a, NodeId b, double exponent) {
  return static_cast<double>(g.degree(a)) / static_cast<double>(g.degree(b)) *
         std::pow(static_cast<double>(a) / static_cast<double>(b), exponent);
}

/// Moves to b when h > kappa, otherwise stays at a.
inline NodeId bias_step(const Graph& g, NodeId a, NodeId b, double exponent, double kappa) {
  return bias_ratio(g, a, b, exponent) > kappa ? b : a;
}

template <class Rng>
NodeId bias_step(const Graph& g, NodeId a, NodeId b, double exponent, Rng& rng) {
  return bias_step(g, a, b, exponent, std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

/// One hop: a uniformly random neighbor b of a is proposed, then bias_step.
template <class Rng>
NodeId walk_hop(const Graph& g, NodeId a, double exponent, Rng& rng) {
  const auto nbrs = g.neighbors(a);
  if (nbrs.empty()) throw std::invalid_argument("walk_hop: node " + std::to_string(a) + " is isolated");
  const double kappa = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const NodeId b = nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
  return bias_step(g, a, b, exponent, kappa);
}

template <class Rng>
NodeId biased_walk(const Graph& g, NodeId start, std::size_t length, double exponent, Rng& rng) {
  NodeId at = start;
  for (std::size_t hop = 0; hop < length; ++hop) at = walk_hop(g, at, exponent, rng);
  return at;
}

enum class EdgeFate { rewired, skipped };

struct EdgeOutcome {
  Edge original;
  EdgeFate fate = EdgeFate::skipped;
  Edge replacement;
};

struct RewireWalkResult {
  Graph graph;
  /// One entry per original edge, in original edge order.
  std::vector<EdgeOutcome> outcomes;
  std::size_t rewired = 0;
  std::size_t skipped = 0;
};

/// Rewires every edge of `initial` exactly once. Edges whose second walk
/// keeps ending at c or at an existing neighbor of c are left in place.
inline RewireWalkResult rewire_all(const Graph& initial, const RewireWalkConfig& config) {
  if (initial.edge_count() == 0) throw std::invalid_argument("rewire_all: graph has no edges");
  if (config.walk_length < 1) throw std::invalid_argument("rewire_all: walk length must be >= 1");
  const double exponent = bias_exponent(config);

  RewireWalkResult result{initial, {}, 0, 0};
  Graph& g = result.graph;
  const std::size_t n = g.node_count();

  const std::vector<Edge> original(initial.edges().begin(), initial.edges().end());
  result.outcomes.reserve(original.size());
  for (const Edge& e : original) result.outcomes.push_back({e, EdgeFate::skipped, {}});

  // Original edges not yet processed, per node, and the nodes that have any.
  std::vector<std::vector<std::size_t>> pending(n + 1);
  for (std::size_t id = 0; id < original.size(); ++id) {
    pending[original[id].u].push_back(id);
    pending[original[id].v].push_back(id);
  }
  std::vector<NodeId> active;
  std::vector<std::size_t> active_pos(n + 1, SIZE_MAX);
  for (NodeId i = 1; i <= n; ++i) {
    if (!pending[i].empty()) {
      active_pos[i] = active.size();
      active.push_back(i);
    }
  }
  auto drop_pending = [&](NodeId node, std::size_t id) {
    auto& list = pending[node];
    list.erase(std::find(list.begin(), list.end(), id));
    if (list.empty()) {
      const std::size_t pos = active_pos[node];
      active[pos] = active.back();
      active_pos[active[pos]] = pos;
      active.pop_back();
      active_pos[node] = SIZE_MAX;
    }
  };

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  while (!active.empty()) {
    const NodeId a = active[std::uniform_int_distribution<std::size_t>(0, active.size() - 1)(rng)];
    const auto& mine = pending[a];
    const std::size_t id = mine[std::uniform_int_distribution<std::size_t>(0, mine.size() - 1)(rng)];
    const Edge e = original[id];
    drop_pending(e.u, id);
    drop_pending(e.v, id);

    const std::size_t du = g.degree(e.u);
    const std::size_t dv = g.degree(e.v);
    const NodeId start = du > dv ? e.u : (dv > du ? e.v : (coin(rng) < 0.5 ? e.u : e.v));

    const NodeId c = biased_walk(g, start, config.walk_length, exponent, rng);
    bool placed = false;
    NodeId d = c;
    for (std::size_t attempt = 0; attempt <= config.second_walk_retries; ++attempt) {
      d = biased_walk(g, c, config.walk_length, exponent, rng);
      if (d != c && !g.has_edge(c, d)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      ++result.skipped;
      logger()->debug("rewire_all: edge ({},{}) left in place, no valid second target from {}", e.u, e.v, c);
      continue;
    }
    g.add_edge(c, d);
    g.remove_edge(e.u, e.v);
    result.outcomes[id].fate = EdgeFate::rewired;
    result.outcomes[id].replacement = {c, d};
    ++result.rewired;
  }
  if (result.skipped > 0) {
    logger()->info("rewire_all: {} of {} edges left in place", result.skipped, original.size());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Starting topologies

/// Uniform simple graph with exactly n_edges edges.
inline Graph random_simple_graph(std::size_t n, std::size_t n_edges, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_simple_graph: need at least 2 nodes");
  if (n_edges > n * (n - 1) / 2) throw std::invalid_argument("random_simple_graph: too many edges");
  Graph g(n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(1, static_cast<NodeId>(n));
  while (g.edge_count() < n_edges) {
    const NodeId i = pick(rng);
    const NodeId j = pick(rng);
    if (i != j) g.add_edge(i, j);
  }
  return g;
}

/// Each node i linked to its m successors around a ring: a 2m-regular graph.
inline Graph ring_lattice(std::size_t n, std::size_t m) {
  if (n < 2 * m + 1) throw std::invalid_argument("ring_lattice: need n > 2m");
  Graph g(n);
  for (NodeId i = 1; i <= n; ++i) {
    for (std::size_t step = 1; step <= m; ++step) {
      g.add_edge(i, static_cast<NodeId>((i - 1 + step) % n + 1));
    }
  }
  return g;
}

struct InitialTopology {
  enum class Kind { random, ring, ring_random };
  Kind kind = Kind::random;
  /// Edges per node (random), or ring half-degree (ring, ring_random).
  std::size_t m = 1;
  /// Extra uniformly random edges on top of the ring (ring_random).
  std::size_t extra_edges = 0;
};

inline Graph make_initial(const InitialTopology& topo, std::size_t n, std::uint64_t seed) {
  switch (topo.kind) {
    case InitialTopology::Kind::random:
      return random_simple_graph(n, topo.m * n, seed);
    case InitialTopology::Kind::ring:
      return ring_lattice(n, topo.m);
    case InitialTopology::Kind::ring_random: {
      Graph g = ring_lattice(n, topo.m);
      if (g.edge_count() + topo.extra_edges > n * (n - 1) / 2) {
        throw std::invalid_argument("make_initial: too many extra edges");
      }
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<NodeId> pick(1, static_cast<NodeId>(n));
      const std::size_t target = g.edge_count() + topo.extra_edges;
      while (g.edge_count() < target) {
        const NodeId i = pick(rng);
        const NodeId j = pick(rng);
        if (i != j) g.add_edge(i, j);
      }
      return g;
    }
  }
  throw std::logic_error("make_initial: unknown topology");
}

}  // namespace sfn
