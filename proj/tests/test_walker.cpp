#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "tagwalk/observables.hpp"
#include "tagwalk/walker.hpp"

using namespace tagwalk;

namespace {

SubstrateGraph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return SubstrateGraph::from_edges(n, edges);
}

}  // namespace

TEST(LengthSampler, FixedAndDegenerate) {
  Engine rng = make_engine(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_length(FixedLength{5}, rng), 5u);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_length(PowerLawLength{3.0, 1, 1}, rng), 1u);
}

TEST(LengthSampler, TwoPointPowerLaw) {
  LengthSampler s(PowerLawLength{3.0, 1, 2});
  EXPECT_NEAR(s.probability(1), 8.0 / 9.0, 1e-15);
  EXPECT_NEAR(s.probability(2), 1.0 / 9.0, 1e-15);
  Engine rng = make_engine(7);
  constexpr int n = 1'000'000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += s(rng) == 1 ? 1 : 0;
  const double p = 8.0 / 9.0;
  EXPECT_NEAR(ones, n * p, 3.0 * std::sqrt(n * p * (1 - p)));
}

TEST(LengthSampler, EveryLengthWithinThreeSigma) {
  LengthSampler s(PowerLawLength{2.5, 2, 8});
  Engine rng = make_engine(3);
  constexpr int n = 400'000;
  std::vector<int> counts(9, 0);
  for (int i = 0; i < n; ++i) ++counts[s(rng)];
  EXPECT_EQ(counts[0] + counts[1], 0);
  for (std::size_t l = 2; l <= 8; ++l) {
    const double p = s.probability(l);
    EXPECT_NEAR(counts[l], n * p, 3.5 * std::sqrt(n * p * (1 - p))) << "l=" << l;
  }
}

TEST(LengthSampler, TailProbabilities) {
  LengthSampler s(PowerLawLength{3.0, 2, 5});
  auto tail = s.tail_probabilities();
  ASSERT_EQ(tail.size(), 6u);
  EXPECT_EQ(tail[0], 1.0);
  EXPECT_EQ(tail[2], 1.0);
  EXPECT_NEAR(tail[3], s.probability(3) + s.probability(4) + s.probability(5), 1e-15);
  EXPECT_NEAR(tail[5], s.probability(5), 1e-15);
}

TEST(LengthSampler, RejectsBadSpecs) {
  EXPECT_THROW(LengthSampler(FixedLength{0}), ParameterError);
  EXPECT_THROW(LengthSampler(PowerLawLength{1.0, 1, 10}), ParameterError);
  EXPECT_THROW(LengthSampler(PowerLawLength{3.0, 0, 10}), ParameterError);
  EXPECT_THROW(LengthSampler(PowerLawLength{3.0, 5, 4}), ParameterError);
}

TEST(RunWalk, SmallGraphs) {
  auto k3 = complete(3);
  Engine rng = make_engine(5);
  int to_one = 0;
  constexpr int n = 20'000;
  for (int i = 0; i < n; ++i) {
    auto t = run_walk(k3, 0, 1, rng);
    ASSERT_EQ(t.nodes.size(), 2u);
    ASSERT_NE(t.nodes[1], 0u);
    to_one += t.nodes[1] == 1 ? 1 : 0;
  }
  EXPECT_NEAR(to_one, n / 2, 3.0 * std::sqrt(n * 0.25));

  std::vector<Edge> path{{0, 1}};
  auto p2 = SubstrateGraph::from_edges(2, path);
  EXPECT_EQ(run_walk(p2, 0, 2, rng).nodes, (std::vector<NodeId>{0, 1, 0}));
  EXPECT_EQ(run_walk(k3, 2, 0, rng).nodes, std::vector<NodeId>{2});
}

TEST(RunWalk, IsolatedOriginIsTruncated) {
  auto g = SubstrateGraph::from_edges(3, std::vector<Edge>{{1, 2}});
  Engine rng = make_engine(1);
  auto t = run_walk(g, 0, 4, rng);
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(t.nodes, std::vector<NodeId>{0});
  EXPECT_EQ(t.length, 4u);
}

TEST(RunWalk, NonBacktrackingNeverReturnsImmediately) {
  auto g = generate_watts_strogatz(200, 4, 0.2, 2);
  Engine rng = make_engine(9);
  for (int i = 0; i < 200; ++i) {
    auto t = run_walk(g, 0, 30, rng, WalkMode::non_backtracking);
    for (std::size_t s = 2; s < t.nodes.size(); ++s) {
      if (g.degree(t.nodes[s - 1]) > 1) {
        EXPECT_NE(t.nodes[s], t.nodes[s - 2]);
      }
    }
  }
}

TEST(Ensemble, TinyCases) {
  auto k2 = complete(2);
  WalkConfig cfg;
  cfg.n_rw = 1;
  cfg.lengths = FixedLength{1};
  auto r = run_ensemble(k2, cfg);
  ASSERT_EQ(r.heaps.points.size(), 1u);
  EXPECT_EQ(r.heaps.points[0], (HeapsPoint{1, 2}));

  cfg.n_rw = 0;
  auto empty = run_ensemble(k2, cfg);
  EXPECT_TRUE(empty.heaps.points.empty());
  EXPECT_EQ(empty.frequencies.counts, (std::vector<std::uint64_t>{0, 0}));
}

TEST(Ensemble, TracesAreWalksAndCurveIsConsistent) {
  auto g = generate_watts_strogatz(2000, 6, 0.1, 4);
  WalkConfig cfg;
  cfg.n_rw = 3000;
  cfg.seed = 77;
  cfg.lengths = PowerLawLength{2.5, 1, 200};
  auto r = run_ensemble(g, cfg);
  std::set<NodeId> union_nodes;
  std::size_t budget = 0;
  for (const auto& t : r.traces) {
    EXPECT_EQ(t.nodes.front(), 0u);
    EXPECT_EQ(t.nodes.size(), t.length + 1);
    for (std::size_t s = 1; s < t.nodes.size(); ++s) {
      ASSERT_TRUE(g.has_edge(t.nodes[s - 1], t.nodes[s]));
    }
    union_nodes.insert(t.nodes.begin(), t.nodes.end());
    budget += t.length + 1;
  }
  for (std::size_t i = 1; i < r.heaps.points.size(); ++i) {
    EXPECT_LE(r.heaps.points[i - 1].distinct, r.heaps.points[i].distinct);
    EXPECT_LT(r.heaps.points[i - 1].walks, r.heaps.points[i].walks);
  }
  EXPECT_EQ(r.heaps.points.back().walks, cfg.n_rw);
  EXPECT_EQ(r.heaps.points.back().distinct, union_nodes.size());
  EXPECT_LE(union_nodes.size(), budget);
  EXPECT_EQ(r.frequencies.counts[0], cfg.n_rw);
  for (auto c : r.frequencies.counts) EXPECT_LE(c, cfg.n_rw);
}

TEST(Ensemble, CountOriginFalseDropsOrigin) {
  auto g = generate_watts_strogatz(500, 4, 0.1, 4);
  WalkConfig cfg;
  cfg.n_rw = 500;
  cfg.seed = 5;
  auto with = run_ensemble(g, cfg);
  cfg.count_origin = false;
  auto without = run_ensemble(g, cfg);
  EXPECT_EQ(without.frequencies.counts[0], 0u);
  ASSERT_EQ(with.heaps.points.size(), without.heaps.points.size());
  for (std::size_t i = 0; i < with.heaps.points.size(); ++i) {
    EXPECT_EQ(with.heaps.points[i].distinct, without.heaps.points[i].distinct + 1);
  }
}

TEST(Ensemble, IndependentOfThreadCount) {
  auto g = generate_watts_strogatz(5000, 8, 0.1, 1);
  WalkConfig cfg;
  cfg.n_rw = 4000;
  cfg.seed = 123;
  auto one = run_ensemble(g, cfg, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    auto many = run_ensemble(g, cfg, threads);
    EXPECT_EQ(one.traces, many.traces);
    EXPECT_EQ(one.heaps, many.heaps);
    EXPECT_EQ(one.frequencies, many.frequencies);
  }
}

TEST(Ensemble, FixedLengthSaturates) {
  auto tree = generate_regular_tree(2, 6);
  WalkConfig cfg;
  cfg.n_rw = 20'000;
  cfg.lengths = FixedLength{3};
  cfg.seed = 8;
  auto r = run_ensemble(tree, cfg);
  EXPECT_EQ(r.heaps.points.back().distinct, 22u);
}

TEST(HeapsCheckpoints, Schedule) {
  EXPECT_TRUE(heaps_checkpoints(0).empty());
  auto small = heaps_checkpoints(7);
  EXPECT_EQ(small, (std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7}));
  auto big = heaps_checkpoints(50'000);
  EXPECT_EQ(big[999], 1000u);
  EXPECT_EQ(big.back(), 50'000u);
  EXPECT_TRUE(std::is_sorted(big.begin(), big.end()));
  EXPECT_EQ(std::adjacent_find(big.begin(), big.end()), big.end());
  EXPECT_GE(big.size(), 1000u + 30u);
}

TEST(TraceLengths, Histogram) {
  EXPECT_TRUE(trace_lengths_histogram({}).empty());
  auto g = generate_watts_strogatz(100, 4, 0.1, 1);
  WalkConfig cfg;
  cfg.n_rw = 50;
  cfg.lengths = FixedLength{5};
  auto hist = trace_lengths_histogram(generate_traces(g, cfg));
  EXPECT_EQ(hist, (std::map<std::size_t, std::size_t>{{5, 50}}));
}

TEST(TraceLengths, PowerLawSlope) {
  LengthSampler s(PowerLawLength{3.0, 1, 1000});
  std::map<std::size_t, std::size_t> hist;
  for (std::uint64_t i = 0; i < 1'000'000; ++i) {
    Engine rng = make_engine(derive_seed(31, Stream::walks, i));
    ++hist[s(rng)];
  }
  std::vector<Point> pts;
  for (std::size_t l = 1; l <= 100; ++l) {
    pts.push_back({static_cast<double>(l), static_cast<double>(hist[l])});
  }
  auto binned = log_bin(pts, 1.5);
  auto fit = fit_power_law(binned, {1.0, 100.0});
  EXPECT_NEAR(fit.exponent, -3.0, 0.1);
}

TEST(Traces, RoundTrip) {
  auto g = generate_watts_strogatz(100, 4, 0.1, 1);
  WalkConfig cfg;
  cfg.n_rw = 40;
  cfg.lengths = PowerLawLength{2.0, 1, 20};
  auto traces = generate_traces(g, cfg);
  std::ostringstream out;
  write_traces(out, traces);
  std::istringstream in(out.str());
  EXPECT_EQ(read_traces(in), traces);
  std::istringstream bad("0 1 x\n");
  EXPECT_THROW(read_traces(bad), ParseError);
}

TEST(HeapsCsv, Header) {
  HeapsCurve c{{{1, 2}, {2, 3}}};
  std::ostringstream out;
  write_heaps_csv(out, c);
  EXPECT_EQ(out.str(), "n_rw,n_distinct\n1,2\n2,3\n");
}
