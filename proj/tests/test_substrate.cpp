#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "tagwalk/substrate.hpp"

using namespace tagwalk;

namespace {

void expect_simple_symmetric(const SubstrateGraph& g) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto nb = g.neighbors(u);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    EXPECT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end());
    for (NodeId v : nb) {
      EXPECT_NE(u, v);
      EXPECT_LT(v, g.node_count());
      EXPECT_TRUE(g.has_edge(v, u));
    }
  }
}

std::size_t component_size(const SubstrateGraph& g, NodeId origin) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{origin};
  seen[origin] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    ++count;
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return count;
}

std::string dump(const SubstrateGraph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

}  // namespace

TEST(FromEdges, RejectsSelfLoopsDuplicatesAndRange) {
  std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(SubstrateGraph::from_edges(3, loop), ParameterError);
  std::vector<Edge> dup{{0, 1}, {1, 0}};
  EXPECT_THROW(SubstrateGraph::from_edges(3, dup), ParameterError);
  std::vector<Edge> range{{0, 3}};
  EXPECT_THROW(SubstrateGraph::from_edges(3, range), ParameterError);
}

TEST(WattsStrogatz, UnrewiredLatticeHasDegreeK) {
  auto g = generate_watts_strogatz(10, 4, 0.0, 1);
  EXPECT_EQ(g.edge_count(), 20u);
  for (NodeId u = 0; u < 10; ++u) EXPECT_EQ(g.degree(u), 4u);
  EXPECT_TRUE(g.has_edge(0, 9));
  EXPECT_TRUE(g.has_edge(0, 8));
  expect_simple_symmetric(g);
}

TEST(WattsStrogatz, FullRewiringKeepsEdgeCount) {
  auto g = generate_watts_strogatz(10, 4, 1.0, 3);
  EXPECT_EQ(g.edge_count(), 20u);
  expect_simple_symmetric(g);
}

TEST(WattsStrogatz, EdgeCountExactForAllRewiringLevels) {
  for (double p : {0.0, 0.1, 0.5, 1.0}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto g = generate_watts_strogatz(300, 6, p, seed);
      EXPECT_EQ(g.edge_count(), 300u * 6 / 2) << "p=" << p << " seed=" << seed;
      expect_simple_symmetric(g);
    }
  }
}

TEST(WattsStrogatz, DeterministicPerSeed) {
  auto a = generate_watts_strogatz(50'000, 8, 0.1, 42);
  auto b = generate_watts_strogatz(50'000, 8, 0.1, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(dump(a), dump(b));
  auto c = generate_watts_strogatz(50'000, 8, 0.1, 43);
  EXPECT_NE(dump(a), dump(c));
}

TEST(WattsStrogatz, RejectsBadParameters) {
  EXPECT_THROW(generate_watts_strogatz(10, 3, 0.1, 0), ParameterError);
  EXPECT_THROW(generate_watts_strogatz(10, 0, 0.1, 0), ParameterError);
  EXPECT_THROW(generate_watts_strogatz(4, 4, 0.1, 0), ParameterError);
  EXPECT_THROW(generate_watts_strogatz(10, 4, 1.5, 0), ParameterError);
  EXPECT_THROW(generate_watts_strogatz(10, 4, -0.1, 0), ParameterError);
}

TEST(WattsStrogatz, DenseRewiringTerminates) {
  // k = n - 2 leaves exactly one free target per node.
  auto g = generate_watts_strogatz(8, 6, 1.0, 5);
  EXPECT_EQ(g.edge_count(), 24u);
  expect_simple_symmetric(g);
}

TEST(RegularTree, SmallShapes) {
  auto t = generate_regular_tree(2, 2);
  EXPECT_EQ(t.node_count(), 10u);
  EXPECT_EQ(t.edge_count(), 9u);
  EXPECT_EQ(t.degree(0), 3u);
  for (NodeId v = 1; v <= 3; ++v) EXPECT_EQ(t.degree(v), 3u);
  for (NodeId v = 4; v < 10; ++v) EXPECT_EQ(t.degree(v), 1u);

  auto star = generate_regular_tree(3, 1);
  EXPECT_EQ(star.node_count(), 5u);
  EXPECT_EQ(star.degree(0), 4u);

  auto single = generate_regular_tree(2, 0);
  EXPECT_EQ(single.node_count(), 1u);
  EXPECT_EQ(single.edge_count(), 0u);
  EXPECT_THROW(generate_regular_tree(0, 3), ParameterError);
}

TEST(ErdosRenyi, Extremes) {
  auto empty = generate_erdos_renyi(100, 0.0, 1);
  EXPECT_EQ(empty.node_count(), 100u);
  EXPECT_EQ(empty.edge_count(), 0u);
  auto triangle = generate_erdos_renyi(3, 2.0, 1);
  EXPECT_EQ(triangle.edge_count(), 3u);
  EXPECT_THROW(generate_erdos_renyi(3, 2.5, 1), ParameterError);
  EXPECT_THROW(generate_erdos_renyi(10, -1.0, 1), ParameterError);
}

TEST(ErdosRenyi, MeanDegreeWithinFivePercent) {
  auto g = generate_erdos_renyi(10'000, 8.0, 11);
  std::size_t degree_sum = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) degree_sum += g.degree(u);
  const double mean = static_cast<double>(degree_sum) / 10'000.0;
  EXPECT_NEAR(mean, 8.0, 0.4);
  expect_simple_symmetric(g);
}

TEST(ErdosRenyi, PairInclusionIsUniform) {
  // Every pair of a 6-node graph should appear with probability p = 0.4.
  constexpr int trials = 20'000;
  std::map<Edge, int> hits;
  for (int s = 0; s < trials; ++s) {
    for (const auto& e : generate_erdos_renyi(6, 2.0, s).edges()) ++hits[e];
  }
  EXPECT_EQ(hits.size(), 15u);
  const double sigma = std::sqrt(trials * 0.4 * 0.6);
  for (const auto& [e, h] : hits) EXPECT_NEAR(h, trials * 0.4, 4 * sigma);
}

TEST(BfsRings, KnownProfiles) {
  EXPECT_EQ(bfs_rings(generate_regular_tree(2, 2), 0).sizes, (std::vector<std::size_t>{1, 3, 6}));
  std::vector<Edge> cycle{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}};
  auto c6 = SubstrateGraph::from_edges(6, cycle);
  for (NodeId v = 0; v < 6; ++v) {
    EXPECT_EQ(bfs_rings(c6, v).sizes, (std::vector<std::size_t>{1, 2, 2, 1}));
  }
  std::vector<Edge> one{{1, 2}};
  EXPECT_EQ(bfs_rings(SubstrateGraph::from_edges(3, one), 0).sizes, std::vector<std::size_t>{1});
  EXPECT_THROW(bfs_rings(c6, 6), ParameterError);
}

TEST(BfsRings, SumsToComponentSize) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = generate_erdos_renyi(200, 1.5, seed);
    const NodeId origin = static_cast<NodeId>(seed % 200);
    auto profile = bfs_rings(g, origin);
    EXPECT_EQ(profile.sizes.front(), 1u);
    EXPECT_EQ(profile.reachable(), component_size(g, origin));
    for (auto s : profile.sizes) EXPECT_GE(s, 1u);
  }
}

TEST(EdgeList, RoundTripAndErrors) {
  auto g = generate_watts_strogatz(100, 4, 0.3, 9);
  std::istringstream in(dump(g));
  EXPECT_EQ(read_edge_list(in), g);

  std::istringstream isolated("# nodes=5\n0\t1\n");
  auto h = read_edge_list(isolated);
  EXPECT_EQ(h.node_count(), 5u);
  EXPECT_EQ(h.edge_count(), 1u);

  std::istringstream no_header("0\t1\n");
  EXPECT_THROW(read_edge_list(no_header), ParseError);
  std::istringstream bad_row("# nodes=3\n0 x\n");
  EXPECT_THROW(read_edge_list(bad_row), ParseError);
  std::istringstream loop("# nodes=3\n1\t1\n");
  EXPECT_THROW(read_edge_list(loop), ParseError);
}

TEST(GraphSpec, ExpectedNodeCountMatchesGenerators) {
  EXPECT_EQ(expected_node_count({RegularTreeSpec{2, 6}, 0}), generate_regular_tree(2, 6).node_count());
  EXPECT_EQ(expected_node_count({WattsStrogatzSpec{100, 4, 0.1}, 0}), 100u);
  EXPECT_EQ(generate({ErdosRenyiSpec{50, 3.0}, 4}), generate_erdos_renyi(50, 3.0, 4));
  EXPECT_THROW(expected_node_count({WattsStrogatzSpec{10, 5, 0.1}, 0}), ParameterError);
}
