#pragma once

// Substrate ("semantic space") graphs: generators, ring profiles and the
// plain-text edge-list format.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "tagwalk/error.hpp"
#include "tagwalk/rng.hpp"

namespace tagwalk {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are sorted, symmetric, free of self-loops and duplicates.
/// Once built the graph is never mutated, so concurrent readers are safe.
class SubstrateGraph {
 public:
  SubstrateGraph() : offsets_(1, 0) {}

  /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
  /// (in either orientation) and ids >= node_count.
  static SubstrateGraph from_edges(std::size_t node_count, std::span<const Edge> edges) {
    if (node_count > std::numeric_limits<NodeId>::max()) {
      throw ParameterError("node count exceeds 32-bit id space");
    }
    std::vector<std::size_t> degree(node_count, 0);
    for (const auto& [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw ParameterError("edge endpoint out of range: " + std::to_string(u) + "-" +
                             std::to_string(v));
      }
      if (u == v) throw ParameterError("self-loop on node " + std::to_string(u));
      ++degree[u];
      ++degree[v];
    }
    SubstrateGraph g;
    g.offsets_.assign(node_count + 1, 0);
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
    g.adjacency_.resize(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
      g.adjacency_[cursor[u]++] = v;
      g.adjacency_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
      auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
      auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last) {
        throw ParameterError("duplicate edge at node " + std::to_string(i));
      }
    }
    return g;
  }

  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    if (u >= node_count() || v >= node_count()) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const SubstrateGraph&, const SubstrateGraph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
};

struct WattsStrogatzSpec {
  std::size_t n = 0;
  std::size_t k = 0;  // even mean degree
  double p_rewire = 0.0;
};

struct RegularTreeSpec {
  std::size_t z = 1;  // branching; every node has z+1 neighbors
  std::size_t depth = 0;
};

struct ErdosRenyiSpec {
  std::size_t n = 0;
  double mean_degree = 0.0;
};

struct GraphSpec {
  std::variant<WattsStrogatzSpec, RegularTreeSpec, ErdosRenyiSpec> variant;
  std::uint64_t seed = 0;
};

/// Node count a spec will produce; validates the spec's parameters.
inline std::size_t expected_node_count(const GraphSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        constexpr std::size_t limit = std::numeric_limits<NodeId>::max();
        if constexpr (std::is_same_v<T, WattsStrogatzSpec>) {
          if (s.k % 2 != 0 || s.k < 2 || s.k >= s.n) {
            throw ParameterError("watts_strogatz requires even k with 2 <= k < n");
          }
          if (!(s.p_rewire >= 0.0 && s.p_rewire <= 1.0)) {
            throw ParameterError("watts_strogatz rewiring probability must lie in [0, 1]");
          }
          if (s.n > limit) throw ParameterError("n exceeds 32-bit id space");
          return s.n;
        } else if constexpr (std::is_same_v<T, RegularTreeSpec>) {
          if (s.z < 1) throw ParameterError("regular_tree requires z >= 1");
          std::size_t total = 1, ring = 1;
          for (std::size_t l = 1; l <= s.depth; ++l) {
            const std::size_t fan = (l == 1) ? s.z + 1 : s.z;
            if (ring > limit / fan) throw ParameterError("regular_tree too large");
            ring *= fan;
            total += ring;
            if (total > limit) throw ParameterError("regular_tree too large");
          }
          return total;
        } else {
          if (s.n == 0) throw ParameterError("erdos_renyi requires n >= 1");
          if (s.n > limit) throw ParameterError("n exceeds 32-bit id space");
          if (!(s.mean_degree >= 0.0) || s.mean_degree > static_cast<double>(s.n - 1)) {
            throw ParameterError("erdos_renyi mean degree must lie in [0, n - 1]");
          }
          return s.n;
        }
      },
      spec.variant);
}

/// Classic small-world rewiring: start from a ring lattice where each node
/// links to its k/2 nearest neighbors on either side, then for every lattice
/// edge (u, u+j) replace the far endpoint with probability p by a uniform
/// target that is neither u nor already adjacent to u. Edge count is
/// preserved exactly.
inline SubstrateGraph generate_watts_strogatz(std::size_t n, std::size_t k, double p_rewire,
                                              std::uint64_t seed) {
  expected_node_count({WattsStrogatzSpec{n, k, p_rewire}, seed});

  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= k / 2; ++j) {
      auto v = static_cast<NodeId>((u + j) % n);
      adj[u].push_back(v);
      adj[v].push_back(static_cast<NodeId>(u));
    }
  }
  auto contains = [](const std::vector<NodeId>& list, NodeId x) {
    return std::find(list.begin(), list.end(), x) != list.end();
  };
  auto erase_one = [](std::vector<NodeId>& list, NodeId x) {
    list.erase(std::find(list.begin(), list.end(), x));
  };

  Engine rng = make_engine(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      if (coin(rng) >= p_rewire) continue;
      auto v = static_cast<NodeId>((u + j) % n);
      auto uid = static_cast<NodeId>(u);
      // The lattice edge may already have been moved away by an earlier rewire.
      if (!contains(adj[u], v)) continue;
      if (adj[u].size() >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(pick(rng));
      } while (w == uid || contains(adj[u], w));
      erase_one(adj[u], v);
      erase_one(adj[v], uid);
      adj[u].push_back(w);
      adj[w].push_back(uid);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n * k / 2);
  for (std::size_t u = 0; u < n; ++u) {
    for (NodeId v : adj[u]) {
      if (u < v) edges.emplace_back(static_cast<NodeId>(u), v);
    }
  }
  std::sort(edges.begin(), edges.end());
  return SubstrateGraph::from_edges(n, edges);
}

/// Rooted tree in which every node has z+1 neighbors: the root (node 0) has
/// z+1 children, every other internal node has z. Nodes are numbered in
/// breadth-first order. The seed is accepted for interface uniformity; the
/// construction is deterministic.
inline SubstrateGraph generate_regular_tree(std::size_t z, std::size_t depth,
                                            std::uint64_t /*seed*/ = 0) {
  const std::size_t total = expected_node_count({RegularTreeSpec{z, depth}, 0});
  std::vector<Edge> edges;
  edges.reserve(total - 1);
  NodeId next = 1;
  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (std::size_t l = 1; l <= depth; ++l) {
    std::size_t fan = (l == 1) ? z + 1 : z;
    for (std::size_t parent = level_begin; parent < level_end; ++parent) {
      for (std::size_t c = 0; c < fan; ++c) edges.emplace_back(static_cast<NodeId>(parent), next++);
    }
    level_begin = level_end;
    level_end = next;
  }
  return SubstrateGraph::from_edges(total, edges);
}

/// G(n, p) with p = mean_degree / (n - 1), using geometric skipping over the
/// lexicographically ordered pair list.
inline SubstrateGraph generate_erdos_renyi(std::size_t n, double mean_degree, std::uint64_t seed) {
  expected_node_count({ErdosRenyiSpec{n, mean_degree}, seed});
  const double max_degree = static_cast<double>(n - 1);
  std::vector<Edge> edges;
  if (n < 2 || mean_degree == 0.0) return SubstrateGraph::from_edges(n, edges);
  const double p = mean_degree / max_degree;
  if (p >= 1.0) {
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return SubstrateGraph::from_edges(n, edges);
  }
  Engine rng = make_engine(seed);
  std::geometric_distribution<std::uint64_t> skip(p);
  // Walk the strictly-upper-triangular pairs (v, w) with w < v.
  std::uint64_t v = 1;
  std::uint64_t w = 0;
  w += skip(rng);
  while (v < n) {
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) {
      edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
      w += 1 + skip(rng);
    }
  }
  std::sort(edges.begin(), edges.end());
  return SubstrateGraph::from_edges(n, edges);
}

inline SubstrateGraph generate(const GraphSpec& spec) {
  return std::visit(
      [&](const auto& s) -> SubstrateGraph {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WattsStrogatzSpec>) {
          return generate_watts_strogatz(s.n, s.k, s.p_rewire, spec.seed);
        } else if constexpr (std::is_same_v<T, RegularTreeSpec>) {
          return generate_regular_tree(s.z, s.depth, spec.seed);
        } else {
          return generate_erdos_renyi(s.n, s.mean_degree, spec.seed);
        }
      },
      spec.variant);
}

/// Number of nodes at each shortest-path distance from an origin.
struct RingProfile {
  NodeId origin = 0;
  std::vector<std::size_t> sizes;

  std::size_t reachable() const noexcept {
    std::size_t total = 0;
    for (auto s : sizes) total += s;
    return total;
  }
  std::size_t max_distance() const noexcept { return sizes.empty() ? 0 : sizes.size() - 1; }
};

inline RingProfile bfs_rings(const SubstrateGraph& g, NodeId origin) {
  if (origin >= g.node_count()) throw ParameterError("bfs origin out of range");
  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.node_count(), unseen);
  RingProfile profile{origin, {}};
  std::vector<NodeId> frontier{origin};
  dist[origin] = 0;
  std::size_t level = 0;
  while (!frontier.empty()) {
    profile.sizes.push_back(frontier.size());
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] == unseen) {
          dist[v] = level + 1;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
    ++level;
  }
  return profile;
}

/// Writes "# nodes=<n>" followed by one "i<TAB>j" line per edge, i < j, sorted.
inline void write_edge_list(std::ostream& out, const SubstrateGraph& g) {
  out << "# nodes=" << g.node_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << '\t' << v << '\n';
}

inline SubstrateGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# nodes=", 0) != 0) {
    throw ParseError("edge list must start with '# nodes=<n>'");
  }
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoull(line.substr(8), &used);
    if (used != line.size() - 8) throw ParseError("bad node count");
  } catch (const std::logic_error&) {
    throw ParseError("bad node count in edge list header");
  }
  std::vector<Edge> edges;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    unsigned long long u = 0, v = 0;
    std::string rest;
    if (!(fields >> u >> v) || (fields >> rest)) {
      throw ParseError("malformed edge on line " + std::to_string(lineno));
    }
    if (u >= n || v >= n) throw ParseError("edge id out of range on line " + std::to_string(lineno));
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  try {
    return SubstrateGraph::from_edges(n, edges);
  } catch (const ParameterError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace tagwalk
