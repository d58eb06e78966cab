#pragma once

// Centralized construction: probabilistic rewiring toward a power-law degree
// sequence, then assignment of every server to its nearest core.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sfn/graph.hpp"
#include "sfn/log.hpp"
#include "sfn/metrics.hpp"
#include "sfn/powerlaw.hpp"

namespace sfn {

/// How the weight exponent alpha is derived from gamma.
///   goh:        alpha = 1 / (gamma - 1), e.g. 2/3 for gamma = 2.5
///   as_written: alpha = 1 / (1 - gamma), negative for gamma > 1
enum class AlphaConvention { goh, as_written };

inline double alpha_for(double gamma, AlphaConvention convention) {
  if (!(gamma > 1.0)) throw std::domain_error("alpha_for: gamma must exceed 1");
  return convention == AlphaConvention::goh ? 1.0 / (gamma - 1.0) : 1.0 / (1.0 - gamma);
}

/// i^-alpha normalized by the partial sum sum_{m=1}^{i} m^-alpha.
inline double node_weight(NodeId i, double alpha) {
  if (i < 1) throw std::domain_error("node_weight: node id must be >= 1");
  long double partial = 0.0L;
  for (NodeId m = 1; m <= i; ++m) partial += std::pow(static_cast<long double>(m), -static_cast<long double>(alpha));
  return static_cast<double>(std::pow(static_cast<long double>(i), -static_cast<long double>(alpha)) / partial);
}

/// node_weight for every id 1..n in one pass; entry 0 is unused.
inline std::vector<double> node_weights(std::size_t n, double alpha) {
  std::vector<double> w(n + 1, 0.0);
  long double partial = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) {
    const long double term = std::pow(static_cast<long double>(i), -static_cast<long double>(alpha));
    partial += term;
    w[i] = static_cast<double>(term / partial);
  }
  return w;
}

struct FixedIterations {
  std::uint64_t count = 0;
};

struct EpsilonStop {
  double epsilon = 0.05;
  /// 0 selects N/10.
  std::uint64_t check_interval = 0;
};

using StopRule = std::variant<FixedIterations, EpsilonStop>;

/// What one rewiring iteration is. `links` counts recorded edges; `attempts`
/// counts every (i, j) draw.
enum class IterationUnit { links, attempts };

struct RewireConfig {
  double gamma = 2.5;
  std::size_t n_nodes = 1000;
  StopRule stop = FixedIterations{1400};
  std::uint64_t seed = 0;
  AlphaConvention alpha_convention = AlphaConvention::goh;
  IterationUnit iteration_unit = IterationUnit::links;
  /// Hard cap in iterations (same unit as the stopping rule); 0 selects 100 * N.
  std::uint64_t iteration_cap = 0;
  /// Iteration counts at which the trace distance is sampled.
  std::vector<std::uint64_t> checkpoints;
};

/// Budget expressed as a multiple of N, rounded to the nearest integer.
inline std::uint64_t iterations_for(double multiple_of_n, std::size_t n_nodes) {
  return static_cast<std::uint64_t>(std::llround(multiple_of_n * static_cast<double>(n_nodes)));
}

struct DistanceSample {
  std::uint64_t iteration = 0;
  double trace_distance = 0.0;
};

struct RewireResult {
  Graph graph;
  std::uint64_t iterations = 0;
  std::uint64_t attempts = 0;
  double trace_distance = 0.0;
  std::vector<DistanceSample> trajectory;
};

class RewireTimeout : public std::runtime_error {
 public:
  RewireTimeout(std::uint64_t iterations, double best_distance)
      : std::runtime_error("rewire: stopping rule not met after " + std::to_string(iterations) +
                           " iterations (best trace distance " + std::to_string(best_distance) + ")"),
        iterations_(iterations),
        best_distance_(best_distance) {}

  [[nodiscard]] std::uint64_t iterations() const { return iterations_; }
  [[nodiscard]] double best_distance() const { return best_distance_; }

 private:
  std::uint64_t iterations_;
  double best_distance_;
};

inline double trace_distance_to(const Graph& g, const PowerLaw& law) {
  return compare_to_power_law(empirical_degree_distribution(g), law).trace_distance;
}

/// Builds a graph from scratch: draw i and j uniformly (i == j redrawn),
/// weigh them with node_weight and record the link when
/// 1 - exp(-2 N p_i p_j) exceeds a uniform kappa. Duplicates are not
/// recorded. Deterministic for a fixed seed.
inline RewireResult rewire(const RewireConfig& config) {
  const std::size_t n = config.n_nodes;
  if (n < 2) throw std::invalid_argument("rewire: need at least 2 nodes");
  if (const auto* fixed = std::get_if<FixedIterations>(&config.stop); fixed && fixed->count == 0) {
    throw std::invalid_argument("rewire: fixed iteration budget must be positive");
  }

  const PowerLaw law(PowerLawParams{.gamma = config.gamma});
  const double alpha = alpha_for(config.gamma, config.alpha_convention);
  const std::vector<double> weight = node_weights(n, alpha);
  const std::uint64_t cap = config.iteration_cap != 0 ? config.iteration_cap : 100 * static_cast<std::uint64_t>(n);
  const std::uint64_t complete = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const auto* eps = std::get_if<EpsilonStop>(&config.stop);
  const std::uint64_t check_every =
      eps == nullptr ? 0 : (eps->check_interval != 0 ? eps->check_interval : std::max<std::uint64_t>(1, n / 10));

  RewireResult result{Graph(n), 0, 0, 0.0, {}};
  Graph& g = result.graph;
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<NodeId> pick(1, static_cast<NodeId>(n));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::uint64_t links = 0;
  std::uint64_t next_check = check_every;
  std::size_t next_checkpoint = 0;
  double best = std::numeric_limits<double>::infinity();
  const double two_n = 2.0 * static_cast<double>(n);

  auto iteration = [&] { return config.iteration_unit == IterationUnit::links ? links : result.attempts; };

  for (;;) {
    const std::uint64_t it = iteration();
    while (next_checkpoint < config.checkpoints.size() && config.checkpoints[next_checkpoint] <= it) {
      result.trajectory.push_back({config.checkpoints[next_checkpoint], trace_distance_to(g, law)});
      ++next_checkpoint;
    }
    if (const auto* fixed = std::get_if<FixedIterations>(&config.stop)) {
      if (it >= fixed->count) break;
    } else if (it >= next_check) {
      next_check += check_every;
      const double d = trace_distance_to(g, law);
      best = std::min(best, d);
      if (d < eps->epsilon) break;
    }
    if (links == complete) {
      logger()->info("rewire: graph complete after {} links", links);
      break;
    }
    if (it >= cap) {
      if (!std::isfinite(best)) best = trace_distance_to(g, law);
      throw RewireTimeout(it, best);
    }

    NodeId i = pick(rng);
    NodeId j = pick(rng);
    while (j == i) j = pick(rng);
    ++result.attempts;
    const double kappa = unit(rng);
    if (1.0 - std::exp(-two_n * weight[i] * weight[j]) > kappa) {
      if (g.add_edge(i, j) == AddEdgeResult::added) ++links;
    }
  }

  result.iterations = iteration();
  result.trace_distance = trace_distance_to(g, law);
  return result;
}

// ---------------------------------------------------------------------------
// Nearest-core assignment

enum class TieBreak { random, lowest_id };

struct Assignment {
  NodeId core = 0;
  std::uint32_t hops = 0;
  /// Intermediate nodes from the core side to the server, both ends excluded.
  std::vector<NodeId> path;
};

struct ClusterAssignment {
  std::map<NodeId, Assignment> assignments;
  /// Every core appears, possibly with no members.
  std::map<NodeId, std::vector<NodeId>> members;
  /// Servers with no core within d_max.
  std::vector<NodeId> unassigned;

  [[nodiscard]] std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(members.size());
    for (const auto& [core, list] : members) sizes.push_back(list.size());
    return sizes;
  }
};

namespace detail {

inline std::vector<NodeId> bfs_parents(const Graph& g, NodeId source, std::size_t d_max) {
  std::vector<NodeId> parent(g.node_count() + 1, 0);
  std::vector<std::int32_t> depth(g.node_count() + 1, -1);
  depth[source] = 0;
  std::vector<NodeId> queue{source};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    if (static_cast<std::size_t>(depth[u]) == d_max) continue;
    for (NodeId w : g.neighbors(u)) {
      if (depth[w] < 0) {
        depth[w] = depth[u] + 1;
        parent[w] = u;
        queue.push_back(w);
      }
    }
  }
  return parent;
}

}  // namespace detail

/// Maps each server to a core at minimum BFS hop count (within d_max). Ties
/// go to a uniformly random minimal core, or to the lowest core id.
inline ClusterAssignment assign_clusters(const Graph& g, const CorePartition& part,
                                         std::size_t d_max = kDefaultDMax,
                                         TieBreak tie_break = TieBreak::random, std::uint64_t seed = 0) {
  if (part.core_ids.empty()) {
    throw std::invalid_argument("assign_clusters: no core nodes at threshold T=" + std::to_string(part.threshold) +
                                " (max degree " + std::to_string(g.max_degree()) + ")");
  }
  constexpr std::int32_t kFar = std::numeric_limits<std::int32_t>::max();
  std::vector<std::int32_t> best(g.node_count() + 1, kFar);
  std::vector<std::vector<NodeId>> ties(g.node_count() + 1);

  for (NodeId core : part.core_ids) {
    const HopDistances dist = bfs_distances(g, core, d_max);
    const auto hops = dist.raw();
    for (NodeId s : part.server_ids) {
      const std::int32_t h = hops[s];
      if (h <= 0) continue;
      if (h < best[s]) {
        best[s] = h;
        ties[s].assign(1, core);
      } else if (h == best[s]) {
        ties[s].push_back(core);
      }
    }
  }

  ClusterAssignment out;
  for (NodeId core : part.core_ids) out.members[core];
  std::mt19937_64 rng(seed);
  for (NodeId s : part.server_ids) {
    if (best[s] == kFar) {
      out.unassigned.push_back(s);
      continue;
    }
    const auto& candidates = ties[s];
    NodeId chosen = candidates.front();
    if (tie_break == TieBreak::random && candidates.size() > 1) {
      chosen = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    }
    out.assignments[s] = Assignment{chosen, static_cast<std::uint32_t>(best[s]), {}};
    out.members[chosen].push_back(s);
  }

  for (const auto& [core, servers] : out.members) {
    if (servers.empty()) continue;
    const std::vector<NodeId> parent = detail::bfs_parents(g, core, d_max);
    for (NodeId s : servers) {
      auto& path = out.assignments[s].path;
      for (NodeId at = parent[s]; at != core; at = parent[at]) path.push_back(at);
      std::reverse(path.begin(), path.end());
    }
  }
  return out;
}

}  // namespace sfn
