#pragma once

// Weighted co-occurrence networks built by clique projection of walk traces
// or annotation posts. An edge weight is the number of distinct walks (or
// posts) in which both endpoints appear.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tagwalk/error.hpp"
#include "tagwalk/parallel.hpp"
#include "tagwalk/post.hpp"
#include "tagwalk/substrate.hpp"
#include "tagwalk/walker.hpp"

namespace tagwalk {

struct WeightedEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::uint64_t w = 0;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
  friend auto operator<=>(const WeightedEdge&, const WeightedEdge&) = default;
};

class CoocGraph {
 public:
  void add_node(NodeId v) { nodes_.insert(v); }

  /// Adds one co-membership to every unordered pair of the given node set.
  /// Repeated ids are collapsed first.
  void add_clique(std::span<const NodeId> members) {
    std::vector<NodeId> set(members.begin(), members.end());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (NodeId v : set) nodes_.insert(v);
    for (std::size_t a = 0; a < set.size(); ++a) {
      for (std::size_t b = a + 1; b < set.size(); ++b) ++weights_[key(set[a], set[b])];
    }
  }

  void add_weight(NodeId u, NodeId v, std::uint64_t w) {
    if (u == v) throw ContractError("co-occurrence graphs have no self-loops");
    if (w == 0) return;
    nodes_.insert(u);
    nodes_.insert(v);
    weights_[key(u, v)] += w;
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return weights_.size(); }
  bool contains(NodeId v) const { return nodes_.count(v) != 0; }

  std::uint64_t weight(NodeId u, NodeId v) const {
    if (u == v) return 0;
    auto it = weights_.find(key(u, v));
    return it == weights_.end() ? 0 : it->second;
  }

  std::uint64_t total_weight() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [k, w] : weights_) total += w;
    return total;
  }

  std::vector<NodeId> nodes() const {
    std::vector<NodeId> out(nodes_.begin(), nodes_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Edges with u < v in lexicographic order.
  std::vector<WeightedEdge> edges() const {
    std::vector<WeightedEdge> out;
    out.reserve(weights_.size());
    for (const auto& [k, w] : weights_) {
      out.push_back({static_cast<NodeId>(k >> 32), static_cast<NodeId>(k & 0xffffffffULL), w});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Optional node labels (tag strings), indexed by node id.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }

  /// Adds every node and edge weight of `other` into this graph.
  void absorb(const CoocGraph& other) {
    if (!other.labels_.empty()) {
      if (labels_.empty() && nodes_.empty()) {
        labels_ = other.labels_;
      } else if (labels_ != other.labels_) {
        throw ContractError("cannot merge co-occurrence graphs with different label tables");
      }
    }
    nodes_.insert(other.nodes_.begin(), other.nodes_.end());
    for (const auto& [k, w] : other.weights_) weights_[k] += w;
  }

  friend bool operator==(const CoocGraph& a, const CoocGraph& b) {
    return a.nodes_ == b.nodes_ && a.weights_ == b.weights_ && a.labels_ == b.labels_;
  }

 private:
  static std::uint64_t key(NodeId u, NodeId v) noexcept {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  std::unordered_set<NodeId> nodes_;
  std::unordered_map<std::uint64_t, std::uint64_t> weights_;
  std::vector<std::string> labels_;
};

inline CoocGraph merge(const CoocGraph& a, const CoocGraph& b) {
  CoocGraph out = a;
  out.absorb(b);
  return out;
}

/// Clique projection of walk traces. Each trace contributes one clique over
/// its distinct visited nodes (the origin included only when count_origin).
/// With threads > 1, contiguous trace blocks are projected into private
/// graphs and merged in block order.
inline CoocGraph build_from_traces(std::span<const WalkTrace> traces, bool count_origin = true,
                                   unsigned threads = 1) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, traces.size()));
  std::vector<CoocGraph> partial(chunks);
  parallel_chunks(traces.size(), static_cast<unsigned>(chunks),
                  [&](std::size_t begin, std::size_t end, std::size_t c) {
                    for (std::size_t i = begin; i < end; ++i) {
                      partial[c].add_clique(distinct_nodes(traces[i], count_origin));
                    }
                  });
  CoocGraph out = std::move(partial[0]);
  for (std::size_t c = 1; c < chunks; ++c) out.absorb(partial[c]);
  return out;
}

/// Interns tag strings to dense ids in order of first appearance.
class TagDictionary {
 public:
  NodeId intern(const std::string& tag) {
    auto [it, inserted] = ids_.try_emplace(tag, static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.push_back(tag);
    return it->second;
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> labels_;
};

/// Clique projection of posts around a focus tag. Every post must contain
/// the focus tag; the focus tag itself is not a node of the result.
inline CoocGraph build_from_posts(std::span<const Post> posts, std::string_view focus) {
  TagDictionary dict;
  CoocGraph g;
  std::vector<NodeId> members;
  for (const auto& post : posts) {
    if (!post.has_tag(focus)) {
      throw ContractError("post by '" + post.user + "' does not contain focus tag '" +
                          std::string(focus) + "'");
    }
    members.clear();
    for (const auto& tag : post.tags) {
      if (tag != focus) members.push_back(dict.intern(tag));
    }
    g.add_clique(members);
  }
  g.set_labels(dict.labels());
  return g;
}

/// "# nodes=<n> edges=<m> total_weight=<W>" then "i<TAB>j<TAB>w" lines,
/// i < j, sorted.
inline void write_weighted_edge_list(std::ostream& out, const CoocGraph& g) {
  const auto edges = g.edges();
  std::uint64_t total = 0;
  for (const auto& e : edges) total += e.w;
  out << "# nodes=" << g.node_count() << " edges=" << edges.size() << " total_weight=" << total
      << '\n';
  for (const auto& e : edges) out << e.u << '\t' << e.v << '\t' << e.w << '\n';
}

/// Node list, one id per line; needed alongside the edge list to keep
/// isolated co-occurrence nodes (single-tag posts, single-node walks).
inline void write_node_list(std::ostream& out, const CoocGraph& g) {
  for (NodeId v : g.nodes()) out << v << '\n';
}

inline CoocGraph read_weighted_edge_list(std::istream& in) {
  CoocGraph g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    unsigned long long u = 0, v = 0, w = 0;
    std::string rest;
    if (!(fields >> u >> v >> w) || (fields >> rest) || u >= v || u > 0xffffffffULL ||
        v > 0xffffffffULL || w == 0) {
      throw ParseError("malformed weighted edge on line " + std::to_string(lineno));
    }
    g.add_weight(static_cast<NodeId>(u), static_cast<NodeId>(v), w);
  }
  return g;
}

}  // namespace tagwalk
