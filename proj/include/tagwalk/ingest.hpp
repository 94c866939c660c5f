#pragma once

// Annotation logs in JSON Lines form: one post per line,
//   {"user": "...", "resource": "...", "ts": <epoch seconds>, "tags": ["...", ...]}
// Cleaning folds tags to lowercase (ASCII), drops empty tag strings and
// duplicates, rejects posts left without tags and posts whose timestamp
// falls outside the validity window, and orders posts by timestamp (stable).

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "tagwalk/cooc.hpp"
#include "tagwalk/error.hpp"
#include "tagwalk/post.hpp"
#include "tagwalk/walker.hpp"

namespace tagwalk {

/// Accepted timestamps lie in [start, end]. The default start is
/// 2001-01-01T00:00:00Z; the default end is the time of the call.
struct ValidityWindow {
  std::int64_t start = 978'307'200;
  std::int64_t end = 0;

  static ValidityWindow until_now() {
    ValidityWindow w;
    w.end = std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
    return w;
  }
};

struct Corpus {
  std::vector<Post> posts;
  std::string source;
};

namespace reject {
inline constexpr std::string_view malformed = "malformed";
inline constexpr std::string_view no_tags = "no_tags";
inline constexpr std::string_view bad_timestamp = "bad_timestamp";
}  // namespace reject

struct RejectionReport {
  std::size_t input_lines = 0;
  std::size_t accepted = 0;
  std::map<std::string, std::size_t, std::less<>> rejected{{std::string(reject::bad_timestamp), 0},
                                                           {std::string(reject::malformed), 0},
                                                           {std::string(reject::no_tags), 0}};

  std::size_t rejected_total() const {
    std::size_t n = 0;
    for (const auto& [reason, c] : rejected) n += c;
    return n;
  }
};

struct ParseResult {
  Corpus corpus;
  RejectionReport report;
};

inline std::string fold_case(std::string_view tag) {
  std::string out(tag);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

/// Parses and cleans a JSON Lines post log. Malformed lines are counted and
/// skipped, or abort with ParseError when `strict`.
inline ParseResult parse_posts(std::istream& in, const ValidityWindow& window, bool strict = false,
                               std::string source = {}) {
  ParseResult result;
  result.corpus.source = std::move(source);
  auto& report = result.report;
  std::string line;
  while (std::getline(in, line)) {
    ++report.input_lines;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    Post post;
    bool ok = j.is_object() && j.contains("user") && j["user"].is_string() &&
              j.contains("resource") && j["resource"].is_string() && j.contains("ts") &&
              j["ts"].is_number_integer() && j.contains("tags") && j["tags"].is_array();
    if (ok && j["ts"].is_number_unsigned()) {
      ok = j["ts"].get<std::uint64_t>() <= static_cast<std::uint64_t>(INT64_MAX);
    }
    if (ok) {
      for (const auto& t : j["tags"]) {
        if (!t.is_string()) {
          ok = false;
          break;
        }
        auto folded = fold_case(t.get<std::string>());
        if (!folded.empty()) post.tags.push_back(std::move(folded));
      }
    }
    if (!ok) {
      if (strict) throw ParseError("malformed post on line " + std::to_string(report.input_lines));
      ++report.rejected[std::string(reject::malformed)];
      continue;
    }
    post.user = j["user"].get<std::string>();
    post.resource = j["resource"].get<std::string>();
    post.timestamp = j["ts"].get<std::int64_t>();
    std::sort(post.tags.begin(), post.tags.end());
    post.tags.erase(std::unique(post.tags.begin(), post.tags.end()), post.tags.end());
    if (post.tags.empty()) {
      ++report.rejected[std::string(reject::no_tags)];
      continue;
    }
    if (post.timestamp < window.start || post.timestamp > window.end) {
      ++report.rejected[std::string(reject::bad_timestamp)];
      continue;
    }
    result.corpus.posts.push_back(std::move(post));
    ++report.accepted;
  }
  std::stable_sort(result.corpus.posts.begin(), result.corpus.posts.end(),
                   [](const Post& a, const Post& b) { return a.timestamp < b.timestamp; });
  return result;
}

inline void serialize_posts(std::ostream& out, std::span<const Post> posts) {
  for (const auto& p : posts) {
    nlohmann::json j{{"user", p.user}, {"resource", p.resource}, {"ts", p.timestamp},
                     {"tags", p.tags}};
    out << j.dump() << '\n';
  }
}

inline void write_rejections_csv(std::ostream& out, const RejectionReport& report) {
  out << "reason,count\n";
  for (const auto& [reason, count] : report.rejected) out << reason << ',' << count << '\n';
}

/// Posts containing the (lowercase) focus tag, in corpus order.
inline std::vector<Post> filter_by_tag(const Corpus& corpus, std::string_view focus) {
  std::vector<Post> out;
  for (const auto& p : corpus.posts) {
    if (p.has_tag(focus)) out.push_back(p);
  }
  return out;
}

inline void require_focus(const Post& post, std::string_view focus) {
  if (!post.has_tag(focus)) {
    throw ContractError("post does not contain focus tag '" + std::string(focus) + "'");
  }
}

/// Vocabulary size (distinct co-occurring tags, focus excluded) after each
/// post of the stream.
inline HeapsCurve vocabulary_growth(std::span<const Post> stream, std::string_view focus) {
  HeapsCurve curve;
  std::unordered_set<std::string> vocabulary;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    require_focus(stream[i], focus);
    for (const auto& t : stream[i].tags) {
      if (t != focus) vocabulary.insert(t);
    }
    curve.points.push_back({i + 1, vocabulary.size()});
  }
  return curve;
}

inline CoocGraph empirical_cooc(std::span<const Post> stream, std::string_view focus) {
  return build_from_posts(stream, focus);
}

/// Number of posts in which each co-occurring tag appears, indexed like the
/// node ids of empirical_cooc (first appearance order).
inline std::vector<std::uint64_t> tag_frequencies(std::span<const Post> stream,
                                                  std::string_view focus) {
  TagDictionary dict;
  std::vector<std::uint64_t> counts;
  for (const auto& post : stream) {
    require_focus(post, focus);
    for (const auto& t : post.tags) {
      if (t == focus) continue;
      auto id = dict.intern(t);
      if (id >= counts.size()) counts.resize(id + 1, 0);
      ++counts[id];
    }
  }
  return counts;
}

}  // namespace tagwalk
