#pragma once

// Shared scenario graphs for the protocol tests and the acceptance run.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sfn/graph.hpp"

namespace fixture {

/// Three cores around service node S4, whose only neighbours are S3, S5
/// and S10. Ids: C1=1, C2=2, C3=3, S1..S11 = 4..14, then three leaves per
/// core so that each core has degree 4 while no service node exceeds 3.
///   C1 - S1 - S2 - S3 - S4             d(S4, C1) = 4
///   C3 - S6 - S5 - S4                  d(S4, C3) = 3
///   C2 - S7 - S8 - S9 - S11 - S10 - S4 d(S4, C2) = 6
/// Tests assert the BFS distances of this graph rather than assuming them.
struct ThreeCores {
  static constexpr sfn::NodeId C1 = 1, C2 = 2, C3 = 3;
  static constexpr sfn::NodeId S(int i) { return static_cast<sfn::NodeId>(3 + i); }
  static constexpr std::size_t kThreshold = 4;
  sfn::Graph graph{23};

  ThreeCores() {
    auto chain = [&](std::vector<sfn::NodeId> nodes) {
      for (std::size_t i = 1; i < nodes.size(); ++i) graph.add_edge(nodes[i - 1], nodes[i]);
    };
    chain({C1, S(1), S(2), S(3), S(4)});
    chain({C3, S(6), S(5), S(4)});
    chain({C2, S(7), S(8), S(9), S(11), S(10), S(4)});
    sfn::NodeId leaf = 15;
    for (sfn::NodeId core : {C1, C2, C3}) {
      for (int k = 0; k < 3; ++k) graph.add_edge(core, leaf++);
    }
  }
};

/// A random connected graph with N in [20, 200] and a threshold chosen so
/// that at least two nodes are cores.
struct RandomScenario {
  sfn::Graph graph;
  std::size_t threshold = 0;
};

inline RandomScenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(20, 200)(rng);
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, n / 2)(rng);
  RandomScenario s{oracle::random_connected(n, extra, seed * 7919 + 1), 0};
  std::vector<std::size_t> deg = s.graph.degrees();
  std::sort(deg.rbegin(), deg.rend());
  // The k-th largest degree as threshold yields at least k cores.
  const std::size_t k = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(8, n / 4))(rng);
  s.threshold = std::max<std::size_t>(1, deg[k - 1]);
  return s;
}

}  // namespace fixture
