#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "tagwalk/cooc.hpp"

using namespace tagwalk;

namespace {

WalkTrace trace(std::vector<NodeId> nodes) {
  WalkTrace t;
  t.length = nodes.size() - 1;
  t.nodes = std::move(nodes);
  return t;
}

Post post(std::vector<std::string> tags) {
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return Post{"u", "r", 0, std::move(tags)};
}

std::vector<WalkTrace> random_ensemble(std::uint64_t seed) {
  Engine rng = make_engine(seed);
  std::uniform_int_distribution<std::size_t> nodes(20, 200), walks(1, 1000);
  const auto n = nodes(rng);
  auto g = generate_watts_strogatz(n, 4, 0.2, seed);
  WalkConfig cfg;
  cfg.n_rw = walks(rng);
  cfg.seed = seed;
  cfg.origin = static_cast<NodeId>(seed % n);
  cfg.lengths = PowerLawLength{2.5, 1, 60};
  return generate_traces(g, cfg);
}

}  // namespace

TEST(BuildFromTraces, Examples) {
  std::vector<WalkTrace> one{trace({0, 1, 2})};
  auto g = build_from_traces(one);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.weight(0, 1), 1u);
  EXPECT_EQ(g.weight(0, 2), 1u);
  EXPECT_EQ(g.weight(1, 2), 1u);

  std::vector<WalkTrace> back{trace({0, 1, 0})};
  auto h = build_from_traces(back);
  EXPECT_EQ(h.edge_count(), 1u);
  EXPECT_EQ(h.weight(0, 1), 1u);
  EXPECT_EQ(h.weight(0, 0), 0u);

  std::vector<WalkTrace> two{trace({0, 1, 2}), trace({0, 1, 3})};
  auto k = build_from_traces(two);
  EXPECT_EQ(k.weight(0, 1), 2u);
  EXPECT_EQ(k.weight(0, 2), 1u);
  EXPECT_EQ(k.weight(1, 2), 1u);
  EXPECT_EQ(k.weight(0, 3), 1u);
  EXPECT_EQ(k.weight(1, 3), 1u);
  EXPECT_EQ(k.weight(2, 3), 0u);
  EXPECT_EQ(k.edge_count(), 5u);
}

TEST(BuildFromTraces, OriginExclusion) {
  std::vector<WalkTrace> t{trace({0, 1, 0, 2}), trace({0})};
  auto g = build_from_traces(t, false);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.weight(1, 2), 1u);
  EXPECT_FALSE(g.contains(0));
  auto h = build_from_traces(t, true);
  EXPECT_TRUE(h.contains(0));
  EXPECT_EQ(h.node_count(), 3u);
}

TEST(BuildFromTraces, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto traces = random_ensemble(seed);
    for (bool count_origin : {true, false}) {
      const auto g = build_from_traces(traces, count_origin);
      ASSERT_EQ(oracle::weights_of(g), oracle::cooc(traces, count_origin)) << "seed " << seed;
    }
  }
}

TEST(BuildFromTraces, WeightAccountingIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto traces = random_ensemble(seed);
    const auto g = build_from_traces(traces);
    std::uint64_t expected = 0;
    for (const auto& t : traces) {
      const std::uint64_t m = distinct_nodes(t).size();
      expected += m * (m - 1) / 2;
    }
    EXPECT_EQ(g.total_weight(), expected);
  }
}

TEST(BuildFromTraces, ThreadCountDoesNotMatter) {
  const auto traces = random_ensemble(17);
  const auto one = build_from_traces(traces, true, 1);
  for (unsigned threads : {2u, 5u, 8u}) {
    EXPECT_EQ(one, build_from_traces(traces, true, threads));
  }
}

TEST(Merge, IdentityCommutativityAndSplit) {
  const auto traces = random_ensemble(3);
  const auto whole = build_from_traces(traces);
  const CoocGraph empty;
  EXPECT_EQ(merge(whole, empty), whole);
  EXPECT_EQ(merge(empty, whole), whole);

  const auto half = traces.size() / 2;
  const std::span<const WalkTrace> all(traces);
  const auto a = build_from_traces(all.subspan(0, half));
  const auto b = build_from_traces(all.subspan(half));
  EXPECT_EQ(merge(a, b), whole);
  EXPECT_EQ(merge(a, b).edges(), merge(b, a).edges());

  const auto third = traces.size() / 3;
  const auto x = build_from_traces(all.subspan(0, third));
  const auto y = build_from_traces(all.subspan(third, half - third));
  EXPECT_EQ(merge(merge(x, y), b), merge(x, merge(y, b)));
}

TEST(BuildFromPosts, Examples) {
  std::vector<Post> posts{post({"t", "a", "b"}), post({"t", "a", "c"})};
  auto g = build_from_posts(posts, "t");
  const auto& labels = g.labels();
  ASSERT_EQ(labels, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(g.weight(0, 1), 1u);
  EXPECT_EQ(g.weight(0, 2), 1u);
  EXPECT_EQ(g.weight(1, 2), 0u);

  std::vector<Post> single{post({"t", "a"})};
  auto s = build_from_posts(single, "t");
  EXPECT_EQ(s.node_count(), 1u);
  EXPECT_EQ(s.edge_count(), 0u);

  std::vector<Post> dup{post({"t", "a", "a", "b"})};
  EXPECT_EQ(build_from_posts(dup, "t").weight(0, 1), 1u);

  std::vector<Post> missing{post({"a", "b"})};
  EXPECT_THROW(build_from_posts(missing, "t"), ContractError);
}

TEST(BuildFromPosts, RepeatedPostsCountTwice) {
  std::vector<Post> posts{post({"t", "a", "b"}), post({"t", "a", "b"})};
  EXPECT_EQ(build_from_posts(posts, "t").weight(0, 1), 2u);
}

TEST(CoocGraph, AddWeightAndLabelsMerge) {
  CoocGraph g;
  EXPECT_THROW(g.add_weight(1, 1, 1), ContractError);
  g.add_weight(2, 1, 3);
  EXPECT_EQ(g.weight(1, 2), 3u);
  CoocGraph a, b;
  a.set_labels({"x"});
  a.add_node(0);
  b.set_labels({"y"});
  b.add_node(0);
  EXPECT_THROW(a.absorb(b), ContractError);
}

TEST(WeightedEdgeList, FormatAndRoundTrip) {
  std::vector<WalkTrace> two{trace({0, 1, 2}), trace({0, 1, 3})};
  auto g = build_from_traces(two);
  std::ostringstream out;
  write_weighted_edge_list(out, g);
  EXPECT_EQ(out.str(),
            "# nodes=4 edges=5 total_weight=6\n0\t1\t2\n0\t2\t1\n0\t3\t1\n1\t2\t1\n1\t3\t1\n");
  std::istringstream in(out.str());
  EXPECT_EQ(read_weighted_edge_list(in).edges(), g.edges());
  std::istringstream bad("1\t0\t1\n");
  EXPECT_THROW(read_weighted_edge_list(bad), ParseError);
  std::istringstream zero("0\t1\t0\n");
  EXPECT_THROW(read_weighted_edge_list(zero), ParseError);
}
