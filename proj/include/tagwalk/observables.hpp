#pragma once

// Statistical observables of weighted co-occurrence networks, plus log
// binning and log-log least-squares fitting.
//
// Weighted nearest-neighbor degree and weighted clustering use the
// strength-normalized definitions:
//   k^w_nn,i = (1/s_i) sum_j w_ij k_j
//   c^w_i    = 1/(s_i (k_i - 1)) sum_{j,h} (w_ij + w_ih)/2 a_ij a_ih a_jh
// Both reduce to the unweighted quantities when all weights are equal.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tagwalk/cooc.hpp"
#include "tagwalk/error.hpp"
#include "tagwalk/rng.hpp"

namespace tagwalk {

/// Read-only compressed snapshot of a CoocGraph. Nodes are addressed by a
/// dense index in ascending id order; neighbor lists are sorted by index.
class WeightedNetwork {
 public:
  explicit WeightedNetwork(const CoocGraph& g) : ids_(g.nodes()) {
    std::unordered_map<NodeId, std::size_t> index;
    index.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) index.emplace(ids_[i], i);
    const auto edges = g.edges();
    std::vector<std::size_t> degree(ids_.size(), 0);
    for (const auto& e : edges) {
      ++degree[index.at(e.u)];
      ++degree[index.at(e.v)];
    }
    offsets_.assign(ids_.size() + 1, 0);
    for (std::size_t i = 0; i < ids_.size(); ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    neighbors_.resize(offsets_.back());
    weights_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Edges arrive sorted by (u, v), so each neighbor list fills in index order.
    std::vector<std::pair<std::size_t, std::uint64_t>> scratch;
    for (const auto& e : edges) {
      std::size_t a = index.at(e.u), b = index.at(e.v);
      neighbors_[cursor[a]] = b;
      weights_[cursor[a]++] = e.w;
      neighbors_[cursor[b]] = a;
      weights_[cursor[b]++] = e.w;
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      auto b = offsets_[i], e = offsets_[i + 1];
      if (std::is_sorted(neighbors_.begin() + b, neighbors_.begin() + e)) continue;
      scratch.clear();
      for (auto p = b; p < e; ++p) scratch.emplace_back(neighbors_[p], weights_[p]);
      std::sort(scratch.begin(), scratch.end());
      for (auto p = b; p < e; ++p) std::tie(neighbors_[p], weights_[p]) = scratch[p - b];
    }
    strength_.assign(ids_.size(), 0);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      for (auto w : weights(i)) strength_[i] += w;
    }
  }

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  NodeId id(std::size_t i) const noexcept { return ids_[i]; }
  std::span<const NodeId> ids() const noexcept { return ids_; }

  std::span<const std::size_t> neighbors(std::size_t i) const noexcept {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const std::uint64_t> weights(std::size_t i) const noexcept {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  std::uint64_t strength(std::size_t i) const noexcept { return strength_[i]; }

 private:
  std::vector<NodeId> ids_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> neighbors_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::uint64_t> strength_;
};

/// Checks sum_i s_i == 2 sum_edges w and sum_i k_i == 2 |E|.
inline bool accounting_holds(const WeightedNetwork& net) {
  std::uint64_t strength_sum = 0, degree_sum = 0, weight_sum = 0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    strength_sum += net.strength(i);
    degree_sum += net.degree(i);
    auto nb = net.neighbors(i);
    auto ws = net.weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (nb[p] > i) weight_sum += ws[p];
    }
  }
  return strength_sum == 2 * weight_sum && degree_sum == 2 * net.edge_count();
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct SeriesPoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t count = 0;
  bool low_sample = false;  // fewer than 3 samples behind this point
};

struct BinnedSeries {
  std::vector<SeriesPoint> points;

  std::vector<Point> as_points() const {
    std::vector<Point> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p.x, p.y});
    return out;
  }
};

inline constexpr std::size_t low_sample_threshold = 3;

namespace detail {

// Lower edges x_min * ratio^m of the bins needed to cover [x_min, x_max];
// the last bin is closed on the right.
inline std::vector<double> log_bin_edges(double x_min, double x_max, double ratio) {
  std::vector<double> edges{x_min};
  double hi = x_min * ratio;
  while (hi < x_max) {
    edges.push_back(hi);
    hi *= ratio;
  }
  return edges;
}

inline std::size_t bin_of(const std::vector<double>& edges, double x) {
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

}  // namespace detail

/// Groups points into logarithmic bins [x_min r^m, x_min r^(m+1)), averages
/// y per bin and reports x at the geometric bin center. Empty bins are
/// omitted.
inline BinnedSeries log_bin(std::span<const Point> points, double ratio = 2.0) {
  if (!(ratio > 1.0)) throw ParameterError("log_bin ratio must be > 1");
  BinnedSeries out;
  if (points.empty()) return out;
  double x_min = points.front().x, x_max = points.front().x;
  for (const auto& p : points) {
    if (!(p.x > 0.0)) throw ParameterError("log_bin requires positive x");
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
  }
  const auto edges = detail::log_bin_edges(x_min, x_max, ratio);
  std::vector<double> sum(edges.size(), 0.0);
  std::vector<std::size_t> count(edges.size(), 0);
  for (const auto& p : points) {
    auto m = detail::bin_of(edges, p.x);
    sum[m] += p.y;
    ++count[m];
  }
  for (std::size_t m = 0; m < edges.size(); ++m) {
    if (count[m] == 0) continue;
    out.points.push_back({edges[m] * std::sqrt(ratio), sum[m] / static_cast<double>(count[m]),
                          count[m], count[m] < low_sample_threshold});
  }
  return out;
}

/// Histogram of a positive integer-valued quantity: exact counts plus a
/// log-binned density (bin mass / (sample size * bin width)).
struct Distribution {
  std::map<std::uint64_t, std::size_t> raw;
  BinnedSeries binned;
  std::size_t sample_size = 0;
};

inline Distribution make_distribution(std::map<std::uint64_t, std::size_t> raw, double ratio = 2.0) {
  Distribution d;
  d.raw = std::move(raw);
  for (const auto& [v, c] : d.raw) d.sample_size += c;
  std::map<std::uint64_t, std::size_t> positive;
  for (const auto& [v, c] : d.raw) {
    if (v > 0) positive.emplace(v, c);
  }
  if (positive.empty()) return d;
  const double x_min = static_cast<double>(positive.begin()->first);
  const double x_max = static_cast<double>(positive.rbegin()->first);
  const auto edges = detail::log_bin_edges(x_min, x_max, ratio);
  std::vector<std::size_t> mass(edges.size(), 0);
  for (const auto& [v, c] : positive) mass[detail::bin_of(edges, static_cast<double>(v))] += c;
  for (std::size_t m = 0; m < edges.size(); ++m) {
    if (mass[m] == 0) continue;
    const double width = edges[m] * (ratio - 1.0);
    d.binned.points.push_back({edges[m] * std::sqrt(ratio),
                               static_cast<double>(mass[m]) /
                                   (static_cast<double>(d.sample_size) * width),
                               mass[m], mass[m] < low_sample_threshold});
  }
  return d;
}

struct NetworkDistributions {
  Distribution degree;
  Distribution strength;
  Distribution weight;
};

inline NetworkDistributions degree_strength_weight_distributions(const WeightedNetwork& net) {
  std::map<std::uint64_t, std::size_t> k, s, w;
  for (std::size_t i = 0; i < net.size(); ++i) {
    ++k[net.degree(i)];
    ++s[net.strength(i)];
    auto nb = net.neighbors(i);
    auto ws = net.weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (nb[p] > i) ++w[ws[p]];
    }
  }
  return {make_distribution(std::move(k)), make_distribution(std::move(s)),
          make_distribution(std::move(w))};
}

/// Averages per-node values over degree classes. Nodes below `min_degree`
/// are skipped.
inline BinnedSeries average_by_degree(const WeightedNetwork& net, std::span<const double> values,
                                      std::size_t min_degree) {
  std::map<std::size_t, std::pair<double, std::size_t>> classes;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.degree(i) < min_degree) continue;
    auto& [sum, n] = classes[net.degree(i)];
    sum += values[i];
    ++n;
  }
  BinnedSeries out;
  for (const auto& [k, acc] : classes) {
    out.points.push_back({static_cast<double>(k), acc.first / static_cast<double>(acc.second),
                          acc.second, acc.second < low_sample_threshold});
  }
  return out;
}

/// s(k): mean strength of nodes with degree k, for k >= 1.
inline BinnedSeries s_of_k(const WeightedNetwork& net) {
  std::vector<double> s(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) s[i] = static_cast<double>(net.strength(i));
  return average_by_degree(net, s, 1);
}

inline std::vector<double> node_knn(const WeightedNetwork& net, bool weighted) {
  std::vector<double> out(net.size(), 0.0);
  for (std::size_t i = 0; i < net.size(); ++i) {
    auto nb = net.neighbors(i);
    if (nb.empty()) continue;
    auto ws = net.weights(i);
    double acc = 0.0;
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const double kj = static_cast<double>(net.degree(nb[p]));
      acc += weighted ? static_cast<double>(ws[p]) * kj : kj;
    }
    out[i] = acc / (weighted ? static_cast<double>(net.strength(i))
                             : static_cast<double>(nb.size()));
  }
  return out;
}

/// k_nn(k), or k^w_nn(k) when weighted, over nodes with k >= 1.
inline BinnedSeries knn_of_k(const WeightedNetwork& net, bool weighted) {
  return average_by_degree(net, node_knn(net, weighted), 1);
}

/// Per-node local clustering. Triangles are listed once each by orienting
/// edges from lower to higher (degree, index) rank.
inline std::vector<double> node_clustering(const WeightedNetwork& net, bool weighted) {
  const std::size_t n = net.size();
  std::vector<std::size_t> rank(n);
  {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(net.degree(a), a) < std::pair(net.degree(b), b);
    });
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;
  }
  std::vector<std::uint64_t> triangles(n, 0);
  std::vector<double> weighted_sum(n, 0.0);  // sum over triangles of (w_ij + w_ih)
  std::vector<std::uint64_t> mark(n, 0);     // weight of the edge from the current node
  std::vector<std::size_t> stamp(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    auto nu = net.neighbors(u);
    auto wu = net.weights(u);
    for (std::size_t p = 0; p < nu.size(); ++p) {
      if (rank[nu[p]] > rank[u]) {
        stamp[nu[p]] = u + 1;
        mark[nu[p]] = wu[p];
      }
    }
    for (std::size_t p = 0; p < nu.size(); ++p) {
      const std::size_t v = nu[p];
      if (rank[v] < rank[u]) continue;
      const auto w_uv = static_cast<double>(wu[p]);
      auto nv = net.neighbors(v);
      auto wv = net.weights(v);
      for (std::size_t q = 0; q < nv.size(); ++q) {
        const std::size_t x = nv[q];
        if (rank[x] <= rank[v] || stamp[x] != u + 1) continue;
        const auto w_ux = static_cast<double>(mark[x]);
        const auto w_vx = static_cast<double>(wv[q]);
        ++triangles[u];
        ++triangles[v];
        ++triangles[x];
        weighted_sum[u] += w_uv + w_ux;
        weighted_sum[v] += w_uv + w_vx;
        weighted_sum[x] += w_ux + w_vx;
      }
    }
  }
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<double>(net.degree(i));
    if (net.degree(i) < 2) continue;
    c[i] = weighted ? weighted_sum[i] / (static_cast<double>(net.strength(i)) * (k - 1.0))
                    : 2.0 * static_cast<double>(triangles[i]) / (k * (k - 1.0));
  }
  return c;
}

/// C(k), or C^w(k) when weighted, over nodes with k >= 2.
inline BinnedSeries clustering_of_k(const WeightedNetwork& net, bool weighted) {
  return average_by_degree(net, node_clustering(net, weighted), 2);
}

struct WeightDegreeCorrelation {
  std::vector<Point> scatter;  // (k_i k_j, w_ij) per edge
  BinnedSeries binned;         // log-binned mean weight
};

inline WeightDegreeCorrelation weight_vs_kikj(const WeightedNetwork& net, double ratio = 2.0) {
  WeightDegreeCorrelation out;
  out.scatter.reserve(net.edge_count());
  for (std::size_t i = 0; i < net.size(); ++i) {
    auto nb = net.neighbors(i);
    auto ws = net.weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (nb[p] <= i) continue;
      out.scatter.push_back({static_cast<double>(net.degree(i)) *
                                 static_cast<double>(net.degree(nb[p])),
                             static_cast<double>(ws[p])});
    }
  }
  out.binned = log_bin(out.scatter, ratio);
  return out;
}

/// Cosine similarity of the weight vectors of nodes a and b (dense indices).
/// Returns 0 when either node has no incident weight.
inline double cosine_similarity(const WeightedNetwork& net, std::size_t a, std::size_t b) {
  auto na = net.neighbors(a), nb = net.neighbors(b);
  auto wa = net.weights(a), wb = net.weights(b);
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (auto w : wa) norm_a += static_cast<double>(w) * static_cast<double>(w);
  for (auto w : wb) norm_b += static_cast<double>(w) * static_cast<double>(w);
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  std::size_t p = 0, q = 0;
  while (p < na.size() && q < nb.size()) {
    if (na[p] < nb[q]) {
      ++p;
    } else if (nb[q] < na[p]) {
      ++q;
    } else {
      dot += static_cast<double>(wa[p]) * static_cast<double>(wb[q]);
      ++p;
      ++q;
    }
  }
  return dot / std::sqrt(norm_a * norm_b);
}

struct SimilarityHistogram {
  double bin_width = 0.05;
  std::vector<std::uint64_t> counts = std::vector<std::uint64_t>(20, 0);
  std::uint64_t pairs = 0;
  bool sampled = false;

  void add(double sim) {
    auto bin = static_cast<std::size_t>(std::max(0.0, sim) / bin_width);
    ++counts[std::min(bin, counts.size() - 1)];
    ++pairs;
  }
  /// Lowest bin holding the maximum count.
  std::size_t mode_bin() const {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) -
                                    counts.begin());
  }
};

inline constexpr std::size_t exact_similarity_node_limit = 2000;

namespace detail {

// Maps a linear index in [0, n(n-1)/2) to the pair (i, j), i < j, in
// row-major upper-triangular order.
inline std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t k, std::uint64_t n) {
  auto row_start = [n](std::uint64_t i) { return i * (2 * n - i - 1) / 2; };
  const double nd = static_cast<double>(n);
  double guess = nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * static_cast<double>(k));
  auto i = static_cast<std::uint64_t>(std::max(0.0, std::floor(guess)));
  if (i > n - 2) i = n - 2;
  while (i > 0 && row_start(i) > k) --i;
  while (i + 1 <= n - 2 && row_start(i + 1) <= k) ++i;
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(k - row_start(i) + i + 1)};
}

}  // namespace detail

/// Histogram (bin width 0.05) of pairwise cosine similarities over nodes with
/// positive strength. All pairs are used when there are at most 2000 such
/// nodes; otherwise `pair_budget` distinct pairs are drawn uniformly.
inline SimilarityHistogram cosine_similarity_distribution(const WeightedNetwork& net,
                                                          std::uint64_t pair_budget = 1'000'000,
                                                          std::uint64_t seed = 0) {
  if (pair_budget < 1) throw ParameterError("similarity pair budget must be >= 1");
  SimilarityHistogram hist;
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.strength(i) > 0) eligible.push_back(i);
  }
  const std::uint64_t m = eligible.size();
  if (m < 2) return hist;
  const std::uint64_t total_pairs = m * (m - 1) / 2;

  if (m <= exact_similarity_node_limit) {
    std::vector<double> norm(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      for (auto w : net.weights(eligible[a])) norm[a] += static_cast<double>(w) * static_cast<double>(w);
    }
    std::vector<double> dense(net.size(), 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      auto na = net.neighbors(eligible[a]);
      auto wa = net.weights(eligible[a]);
      for (std::size_t p = 0; p < na.size(); ++p) dense[na[p]] = static_cast<double>(wa[p]);
      for (std::size_t b = a + 1; b < m; ++b) {
        auto nb = net.neighbors(eligible[b]);
        auto wb = net.weights(eligible[b]);
        double dot = 0.0;
        for (std::size_t q = 0; q < nb.size(); ++q) dot += dense[nb[q]] * static_cast<double>(wb[q]);
        hist.add(dot / std::sqrt(norm[a] * norm[b]));
      }
      for (std::size_t p = 0; p < na.size(); ++p) dense[na[p]] = 0.0;
    }
    return hist;
  }

  // Floyd's algorithm: exactly `budget` distinct pair indices.
  const std::uint64_t budget = std::min(pair_budget, total_pairs);
  hist.sampled = budget < total_pairs;
  Engine rng = make_engine(derive_seed(seed, Stream::similarity));
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(budget * 2);
  for (std::uint64_t j = total_pairs - budget; j < total_pairs; ++j) {
    std::uniform_int_distribution<std::uint64_t> draw(0, j);
    const std::uint64_t t = draw(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> order(chosen.begin(), chosen.end());
  std::sort(order.begin(), order.end());
  for (auto k : order) {
    auto [a, b] = detail::pair_from_index(k, m);
    hist.add(cosine_similarity(net, eligible[a], eligible[b]));
  }
  return hist;
}

struct RankPoint {
  std::size_t rank = 0;
  std::uint64_t count = 0;
  std::size_t id = 0;
};

/// Positive counts sorted descending and paired with ranks 1..N; ties keep
/// ascending id order. Zero counts are not ranked.
inline std::vector<RankPoint> frequency_rank(std::span<const std::uint64_t> counts) {
  std::vector<RankPoint> out;
  for (std::size_t id = 0; id < counts.size(); ++id) {
    if (counts[id] > 0) out.push_back({0, counts[id], id});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankPoint& a, const RankPoint& b) { return a.count > b.count; });
  for (std::size_t r = 0; r < out.size(); ++r) out[r].rank = r + 1;
  return out;
}

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitResult {
  double exponent = 0.0;
  double std_error = 0.0;
  double prefactor = 0.0;  // y ~ prefactor * x^exponent
  FitWindow window;        // x-range of the points actually used
  std::size_t points = 0;
};

inline constexpr std::size_t min_fit_points = 5;

/// Ordinary least squares of log y on log x over points with
/// window.lo <= x <= window.hi and positive x, y.
inline FitResult fit_power_law(std::span<const Point> series, FitWindow window) {
  std::vector<double> lx, ly;
  FitResult fit;
  fit.window = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : series) {
    if (p.x < window.lo || p.x > window.hi || !(p.x > 0.0) || !(p.y > 0.0)) continue;
    lx.push_back(std::log(p.x));
    ly.push_back(std::log(p.y));
    fit.window.lo = std::min(fit.window.lo, p.x);
    fit.window.hi = std::max(fit.window.hi, p.x);
  }
  const std::size_t n = lx.size();
  if (n < min_fit_points) {
    throw FitError("power-law fit needs >= " + std::to_string(min_fit_points) +
                   " positive points in window, got " + std::to_string(n));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw FitError("power-law fit needs at least two distinct x values");
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - intercept - fit.exponent * lx[i];
    ssr += r * r;
  }
  fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  fit.prefactor = std::exp(intercept);
  fit.points = n;
  return fit;
}

inline FitResult fit_power_law(const BinnedSeries& series, FitWindow window) {
  const auto pts = series.as_points();
  return fit_power_law(pts, window);
}

}  // namespace tagwalk
