#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sfn/graph.hpp"

namespace {

using sfn::AddEdgeResult;
using sfn::Graph;

TEST(Graph, AddAndQueryEdges) {
  Graph g(4);
  EXPECT_EQ(g.add_edge(1, 2), AddEdgeResult::added);
  EXPECT_EQ(g.add_edge(2, 1), AddEdgeResult::duplicate);
  EXPECT_EQ(g.add_edge(2, 3), AddEdgeResult::added);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge(3, 2));
  EXPECT_FALSE(g.has_edge(1, 3));
  EXPECT_EQ(g.degree(2), 2u);
  EXPECT_EQ(g.degree(4), 0u);
  EXPECT_EQ(g.max_degree(), 2u);
}

TEST(Graph, RejectsSelfLoopsAndBadIds) {
  Graph g(3);
  EXPECT_THROW(g.add_edge(2, 2), std::invalid_argument);
  EXPECT_THROW(g.add_edge(0, 1), std::out_of_range);
  EXPECT_THROW(g.add_edge(1, 4), std::out_of_range);
}

TEST(Graph, RemoveKeepsIndexConsistent) {
  Graph g = oracle::star_graph(6);
  EXPECT_TRUE(g.remove_edge(3, 1));
  EXPECT_FALSE(g.remove_edge(3, 1));
  EXPECT_EQ(g.edge_count(), 4u);
  for (const sfn::Edge& e : g.edges()) EXPECT_TRUE(g.has_edge(e.u, e.v));
  EXPECT_EQ(g.degree(1), 4u);
  EXPECT_EQ(g.degree(3), 0u);
}

TEST(Graph, DegreeSumIsTwiceEdges) {
  const Graph g = oracle::random_connected(80, 60, 3);
  std::size_t sum = 0;
  for (std::size_t d : g.degrees()) sum += d;
  EXPECT_EQ(sum, 2 * g.edge_count());
}

TEST(Partition, SplitsByThreshold) {
  const Graph g = oracle::star_graph(5);
  const auto part = sfn::partition(g, 2);
  ASSERT_EQ(part.core_ids.size(), 1u);
  EXPECT_EQ(part.core_ids[0], 1u);
  EXPECT_EQ(part.server_ids.size(), 4u);
  EXPECT_TRUE(part.is_core(1));
  EXPECT_FALSE(part.is_core(2));
  EXPECT_TRUE(sfn::partition(g, 5).core_ids.empty());
  EXPECT_THROW(sfn::partition(g, 0), std::invalid_argument);
}

TEST(Bfs, MatchesFloydWarshall) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = oracle::random_connected(40, 15, seed);
    const auto d = oracle::all_pairs(g);
    for (sfn::NodeId s = 1; s <= g.node_count(); ++s) {
      const auto hops = sfn::bfs_distances(g, s, 100);
      EXPECT_FALSE(hops.contains(s));
      for (sfn::NodeId t = 1; t <= g.node_count(); ++t) {
        if (t == s) continue;
        ASSERT_EQ(int(hops.at(t)), d[s][t]);
      }
    }
  }
}

TEST(Bfs, RespectsDepthLimit) {
  const Graph g = oracle::path_graph(8);
  const auto hops = sfn::bfs_distances(g, 1, 3);
  EXPECT_EQ(hops.at(4), 3u);
  EXPECT_FALSE(hops.contains(5));
  EXPECT_THROW((void)hops.at(5), std::out_of_range);
}

TEST(Components, CountsPieces) {
  Graph g(6);
  g.add_edge(1, 2);
  g.add_edge(3, 4);
  EXPECT_EQ(sfn::connected_components(g).size(), 4u);
}

TEST(EmpiricalDistribution, CountsDegreeZeroInDenominator) {
  Graph g(4);
  g.add_edge(1, 2);
  const auto d = sfn::empirical_degree_distribution(g);
  ASSERT_EQ(d.support_max(), 1u);
  EXPECT_DOUBLE_EQ(d.at(1), 0.5);
}

TEST(EdgeList, RoundTrips) {
  const Graph g = oracle::random_connected(30, 10, 9);
  std::stringstream buf;
  sfn::write_edge_list(buf, g, 2.5, 42);
  const auto file = sfn::read_edge_list(buf);
  EXPECT_EQ(file.gamma, 2.5);
  EXPECT_EQ(file.seed, 42u);
  ASSERT_EQ(file.graph.node_count(), 30u);
  ASSERT_EQ(file.graph.edge_count(), g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    EXPECT_EQ(file.graph.edges()[i].u, g.edges()[i].u);
    EXPECT_EQ(file.graph.edges()[i].v, g.edges()[i].v);
  }
}

TEST(EdgeList, HeaderFormat) {
  Graph g(2);
  g.add_edge(1, 2);
  std::stringstream buf;
  sfn::write_edge_list(buf, g, 2.5, 7);
  EXPECT_EQ(buf.str(), "# nodes=2 gamma=2.5 seed=7\n1,2\n");
}

TEST(EdgeList, RejectsMalformedInput) {
  std::stringstream dup("# nodes=3 gamma=2.5 seed=1\n1,2\n2,1\n");
  EXPECT_THROW(sfn::read_edge_list(dup), std::runtime_error);
  std::stringstream bad("# nodes=3 gamma=2.5 seed=1\n1;2\n");
  EXPECT_THROW(sfn::read_edge_list(bad), std::runtime_error);
  std::stringstream no_header("1,2\n");
  EXPECT_THROW(sfn::read_edge_list(no_header), std::runtime_error);
}

}  // namespace
