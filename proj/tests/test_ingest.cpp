#include <gtest/gtest.h>

#include <sstream>

#include "tagwalk/ingest.hpp"
#include "tagwalk/walker.hpp"

using namespace tagwalk;

namespace {

const ValidityWindow window{978'307'200, 2'000'000'000};

ParseResult parse(const std::string& text, bool strict = false) {
  std::istringstream in(text);
  return parse_posts(in, window, strict);
}

Post post(std::vector<std::string> tags, std::int64_t ts = 1'000'000'000) {
  std::sort(tags.begin(), tags.end());
  return Post{"u", "r", ts, std::move(tags)};
}

}  // namespace

TEST(ParsePosts, CaseFoldingMergesTags) {
  auto r = parse(R"({"user":"a","resource":"x","ts":1100000000,"tags":["Web","web","AJAX"]})" "\n");
  ASSERT_EQ(r.corpus.posts.size(), 1u);
  EXPECT_EQ(r.corpus.posts[0].tags, (std::vector<std::string>{"ajax", "web"}));
}

TEST(ParsePosts, RejectionReasons) {
  const std::string text =
      R"({"user":"a","resource":"x","ts":1100000000,"tags":[]})" "\n"
      R"({"user":"a","resource":"x","ts":5,"tags":["a"]})" "\n"
      R"({"user":"a","resource":"x","ts":2100000000,"tags":["a"]})" "\n"
      "not json\n"
      R"({"user":"a","resource":"x","ts":"soon","tags":["a"]})" "\n"
      R"({"user":"a","resource":"x","ts":1100000000,"tags":[3]})" "\n"
      R"({"user":"a","ts":1100000000,"tags":["a"]})" "\n"
      R"({"user":"a","resource":"x","ts":1100000000,"tags":["",""]})" "\n"
      R"({"user":"a","resource":"x","ts":1100000000,"tags":["ok"]})" "\n";
  auto r = parse(text);
  EXPECT_EQ(r.report.input_lines, 9u);
  EXPECT_EQ(r.report.accepted, 1u);
  EXPECT_EQ(r.report.rejected.at("no_tags"), 2u);
  EXPECT_EQ(r.report.rejected.at("bad_timestamp"), 2u);
  EXPECT_EQ(r.report.rejected.at("malformed"), 4u);
  EXPECT_EQ(r.report.accepted + r.report.rejected_total(), r.report.input_lines);
  EXPECT_THROW(parse(text, true), ParseError);

  std::ostringstream csv;
  write_rejections_csv(csv, r.report);
  EXPECT_EQ(csv.str(), "reason,count\nbad_timestamp,2\nmalformed,4\nno_tags,2\n");
}

TEST(ParsePosts, OrdersByTimestampStably) {
  auto r = parse(R"({"user":"b","resource":"x","ts":1100000002,"tags":["a"]})" "\n"
                 R"({"user":"c","resource":"x","ts":1100000001,"tags":["a"]})" "\n"
                 R"({"user":"d","resource":"x","ts":1100000002,"tags":["a"]})" "\n");
  ASSERT_EQ(r.corpus.posts.size(), 3u);
  EXPECT_EQ(r.corpus.posts[0].user, "c");
  EXPECT_EQ(r.corpus.posts[1].user, "b");
  EXPECT_EQ(r.corpus.posts[2].user, "d");
}

TEST(ParsePosts, CountsAlwaysAddUp) {
  Engine rng = make_engine(3);
  std::uniform_int_distribution<int> kind(0, 4);
  for (int t = 0; t < 20; ++t) {
    std::ostringstream text;
    const int lines = 50 + t;
    for (int i = 0; i < lines; ++i) {
      switch (kind(rng)) {
        case 0: text << "{\n"; break;
        case 1: text << R"({"user":"u","resource":"r","ts":1200000000,"tags":[]})" << '\n'; break;
        case 2: text << R"({"user":"u","resource":"r","ts":1,"tags":["x"]})" << '\n'; break;
        default: text << R"({"user":"u","resource":"r","ts":1200000000,"tags":["X","y"]})" << '\n';
      }
    }
    auto r = parse(text.str());
    EXPECT_EQ(r.report.input_lines, static_cast<std::size_t>(lines));
    EXPECT_EQ(r.report.accepted + r.report.rejected_total(), r.report.input_lines);
    EXPECT_EQ(r.corpus.posts.size(), r.report.accepted);
  }
}

TEST(ParsePosts, SerializeRoundTrip) {
  auto first = parse(R"({"user":"ü","resource":"http://x/\"q\"","ts":1100000000,"tags":["B","a","b"]})" "\n"
                     R"({"user":"v","resource":"y","ts":1000000000,"tags":["z"]})" "\n");
  std::ostringstream out;
  serialize_posts(out, first.corpus.posts);
  auto second = parse(out.str());
  EXPECT_EQ(first.corpus.posts, second.corpus.posts);
  std::ostringstream again;
  serialize_posts(again, second.corpus.posts);
  EXPECT_EQ(out.str(), again.str());
}

TEST(FilterByTag, KeepsOrderAndMatchesFoldedTags) {
  auto r = parse(R"({"user":"1","resource":"x","ts":1100000001,"tags":["Python","web"]})" "\n"
                 R"({"user":"2","resource":"x","ts":1100000002,"tags":["java"]})" "\n"
                 R"({"user":"3","resource":"x","ts":1100000003,"tags":["PYTHON"]})" "\n");
  auto s = filter_by_tag(r.corpus, "python");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].user, "1");
  EXPECT_EQ(s[1].user, "3");
  EXPECT_TRUE(filter_by_tag(r.corpus, "rust").empty());
}

TEST(VocabularyGrowth, Examples) {
  std::vector<Post> s{post({"t", "a", "b"}), post({"t", "a", "c"})};
  EXPECT_EQ(vocabulary_growth(s, "t"), (HeapsCurve{{{1, 2}, {2, 3}}}));
  std::vector<Post> alone{post({"t"}), post({"t"}), post({"t"})};
  EXPECT_EQ(vocabulary_growth(alone, "t"), (HeapsCurve{{{1, 0}, {2, 0}, {3, 0}}}));
  std::vector<Post> missing{post({"a"})};
  EXPECT_THROW(vocabulary_growth(missing, "t"), ContractError);
}

TEST(EmpiricalCooc, Examples) {
  std::vector<Post> one{post({"t", "a", "b", "c"})};
  auto g = empirical_cooc(one, "t");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.total_weight(), 3u);

  std::vector<Post> twice{post({"t", "a", "b"}, 1), post({"t", "a", "b"}, 2)};
  EXPECT_EQ(empirical_cooc(twice, "t").weight(0, 1), 2u);

  const auto f = tag_frequencies(twice, "t");
  EXPECT_EQ(f, (std::vector<std::uint64_t>{2, 2}));
}

TEST(EmpiricalCooc, FinalVocabularyEqualsNodeCount) {
  Engine rng = make_engine(8);
  std::uniform_int_distribution<int> tag(0, 60), size(0, 5);
  std::vector<Post> stream;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> tags{"focus"};
    for (int k = size(rng); k > 0; --k) tags.push_back("t" + std::to_string(tag(rng)));
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
    stream.push_back(Post{"u", "r", i, tags});
  }
  const auto curve = vocabulary_growth(stream, "focus");
  EXPECT_EQ(curve.points.back().distinct, empirical_cooc(stream, "focus").node_count());
  EXPECT_EQ(tag_frequencies(stream, "focus").size(), curve.points.back().distinct);
}

TEST(RoundTrip, WalkerTracesThroughPosts) {
  const auto g = generate_watts_strogatz(5000, 8, 0.1, 2);
  WalkConfig cfg;
  cfg.n_rw = 5000;
  cfg.seed = 12;
  cfg.count_origin = false;
  cfg.lengths = PowerLawLength{3.0, 1, 1000};
  const auto walked = run_ensemble(g, cfg);

  // Origin becomes the focus tag; every other node its own label.
  std::vector<Post> posts;
  for (std::size_t i = 0; i < walked.traces.size(); ++i) {
    std::vector<std::string> tags{"t*"};
    for (NodeId v : walked.traces[i].nodes) {
      if (v != cfg.origin) tags.push_back("n" + std::to_string(v));
    }
    posts.push_back(post(tags, 1'100'000'000 + static_cast<std::int64_t>(i)));
    auto& t = posts.back().tags;
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  std::ostringstream serialized;
  serialize_posts(serialized, posts);
  const auto corpus = parse(serialized.str()).corpus;
  const auto stream = filter_by_tag(corpus, "t*");
  ASSERT_EQ(stream.size(), posts.size());
  const auto curve = vocabulary_growth(stream, "t*");

  for (const auto& p : walked.heaps.points) {
    EXPECT_EQ(curve.points[p.walks - 1].distinct, p.distinct) << "walks=" << p.walks;
  }
  cfg.count_origin = true;
  const auto with_origin = run_ensemble(g, cfg);
  for (const auto& p : with_origin.heaps.points) {
    EXPECT_EQ(curve.points[p.walks - 1].distinct + 1, p.distinct);
  }
}
