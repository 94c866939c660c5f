#pragma once

// Random-walk ensembles from a fixed origin: length sampling, single walks,
// and the ordered reduction into vocabulary-growth curves and visit counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "tagwalk/error.hpp"
#include "tagwalk/parallel.hpp"
#include "tagwalk/rng.hpp"
#include "tagwalk/substrate.hpp"

namespace tagwalk {

struct FixedLength {
  std::size_t steps = 1;
};

/// P(l) proportional to l^-exponent on [l_min, l_max].
struct PowerLawLength {
  double exponent = 3.0;
  std::size_t l_min = 1;
  std::size_t l_max = 1000;
};

using LengthSpec = std::variant<FixedLength, PowerLawLength>;

inline void validate(const LengthSpec& spec) {
  if (const auto* fixed = std::get_if<FixedLength>(&spec)) {
    if (fixed->steps < 1) throw ParameterError("fixed walk length must be >= 1");
    return;
  }
  const auto& pl = std::get<PowerLawLength>(spec);
  if (!(pl.exponent > 1.0)) throw ParameterError("power-law length exponent must be > 1");
  if (pl.l_min < 1) throw ParameterError("power-law l_min must be >= 1");
  if (pl.l_max < pl.l_min) throw ParameterError("power-law l_max must be >= l_min");
  if (pl.l_max > 100'000'000) throw ParameterError("power-law l_max too large");
}

/// Normalized length distribution with an inverse-CDF sampler over its
/// finite support.
class LengthSampler {
 public:
  explicit LengthSampler(const LengthSpec& spec) {
    validate(spec);
    if (const auto* fixed = std::get_if<FixedLength>(&spec)) {
      l_min_ = fixed->steps;
      pmf_ = {1.0};
    } else {
      const auto& pl = std::get<PowerLawLength>(spec);
      l_min_ = pl.l_min;
      pmf_.resize(pl.l_max - pl.l_min + 1);
      for (std::size_t i = 0; i < pmf_.size(); ++i) {
        pmf_[i] = std::pow(static_cast<double>(pl.l_min + i), -pl.exponent);
      }
      // Sum smallest terms first.
      double total = 0.0;
      for (auto it = pmf_.rbegin(); it != pmf_.rend(); ++it) total += *it;
      for (auto& p : pmf_) p /= total;
    }
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
      acc += pmf_[i];
      cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
  }

  std::size_t l_min() const noexcept { return l_min_; }
  std::size_t l_max() const noexcept { return l_min_ + pmf_.size() - 1; }

  double probability(std::size_t l) const noexcept {
    if (l < l_min() || l > l_max()) return 0.0;
    return pmf_[l - l_min_];
  }

  /// P_>(l) = sum over l' >= l of P(l'), accumulated from the tail.
  std::vector<double> tail_probabilities() const {
    std::vector<double> tail(l_max() + 1, 0.0);
    double acc = 0.0;
    for (std::size_t l = l_max() + 1; l-- > 0;) {
      acc += probability(l);
      tail[l] = acc;
    }
    for (std::size_t l = 0; l <= l_min(); ++l) tail[l] = 1.0;
    return tail;
  }

  template <class URBG>
  std::size_t operator()(URBG& rng) const {
    if (pmf_.size() == 1) return l_min_;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return l_min_ + static_cast<std::size_t>(it - cdf_.begin());
  }

 private:
  std::size_t l_min_ = 1;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

template <class URBG>
std::size_t sample_length(const LengthSpec& spec, URBG& rng) {
  return LengthSampler(spec)(rng);
}

/// Node sequence of one walk. `length` is the requested number of steps;
/// nodes.size() == length + 1 unless the walk was truncated at an isolated
/// origin.
struct WalkTrace {
  std::vector<NodeId> nodes;
  std::size_t length = 0;
  bool truncated = false;

  NodeId origin() const noexcept { return nodes.front(); }
  friend bool operator==(const WalkTrace&, const WalkTrace&) = default;
};

enum class WalkMode { plain, non_backtracking };

/// Unbiased walk: each step moves to a uniformly chosen neighbor. In
/// non-backtracking mode the previous node is excluded unless it is the only
/// neighbor.
template <class URBG>
WalkTrace run_walk(const SubstrateGraph& g, NodeId origin, std::size_t steps, URBG& rng,
                   WalkMode mode = WalkMode::plain) {
  if (origin >= g.node_count()) throw ParameterError("walk origin out of range");
  WalkTrace trace;
  trace.length = steps;
  trace.nodes.reserve(steps + 1);
  trace.nodes.push_back(origin);
  if (steps > 0 && g.degree(origin) == 0) {
    trace.truncated = true;
    return trace;
  }
  NodeId current = origin;
  NodeId previous = origin;
  for (std::size_t s = 0; s < steps; ++s) {
    auto nb = g.neighbors(current);
    NodeId next;
    if (mode == WalkMode::non_backtracking && s > 0 && nb.size() > 1) {
      // Uniform over the deg-1 neighbors other than `previous`.
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 2);
      std::size_t idx = pick(rng);
      auto prev_pos = static_cast<std::size_t>(
          std::lower_bound(nb.begin(), nb.end(), previous) - nb.begin());
      if (idx >= prev_pos) ++idx;
      next = nb[idx];
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      next = nb[pick(rng)];
    }
    previous = current;
    current = next;
    trace.nodes.push_back(current);
  }
  return trace;
}

struct WalkConfig {
  NodeId origin = 0;
  std::size_t n_rw = 0;
  LengthSpec lengths = PowerLawLength{};
  std::uint64_t seed = 0;
  bool count_origin = true;
  bool non_backtracking = false;
};

struct HeapsPoint {
  std::size_t walks = 0;
  std::size_t distinct = 0;
  friend bool operator==(const HeapsPoint&, const HeapsPoint&) = default;
};

struct HeapsCurve {
  std::vector<HeapsPoint> points;
  friend bool operator==(const HeapsCurve&, const HeapsCurve&) = default;
};

/// Per-node number of walks that visited the node at least once.
struct VisitFrequencies {
  std::vector<std::uint64_t> counts;
  friend bool operator==(const VisitFrequencies&, const VisitFrequencies&) = default;
};

struct EnsembleResult {
  std::vector<WalkTrace> traces;
  HeapsCurve heaps;
  VisitFrequencies frequencies;
};

/// Distinct nodes of a trace in order of first visit. When count_origin is
/// false the origin is dropped, including any later revisit of it.
inline std::vector<NodeId> distinct_nodes(const WalkTrace& trace, bool count_origin = true) {
  std::vector<NodeId> out;
  out.reserve(trace.nodes.size());
  const NodeId origin = trace.origin();
  for (NodeId v : trace.nodes) {
    if (!count_origin && v == origin) continue;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

/// Curve checkpoints: every walk up to 1000, then 20 log-spaced points per
/// decade, always ending at n_rw.
inline std::vector<std::size_t> heaps_checkpoints(std::size_t n_rw) {
  std::vector<std::size_t> marks;
  for (std::size_t n = 1; n <= std::min<std::size_t>(n_rw, 1000); ++n) marks.push_back(n);
  if (n_rw <= 1000) return marks;
  for (int step = 1;; ++step) {
    double x = 1000.0 * std::pow(10.0, step / 20.0);
    auto n = static_cast<std::size_t>(std::llround(x));
    if (n >= n_rw) break;
    if (n > marks.back()) marks.push_back(n);
  }
  if (n_rw > 0 && marks.back() != n_rw) marks.push_back(n_rw);
  return marks;
}

/// Walk i draws its length and steps from the stream derive_seed(seed, walks, i),
/// so the ensemble does not depend on how walks are distributed over threads.
inline std::vector<WalkTrace> generate_traces(const SubstrateGraph& g, const WalkConfig& config,
                                              unsigned threads = 1) {
  validate(config.lengths);
  if (config.origin >= g.node_count()) throw ParameterError("walk origin out of range");
  const LengthSampler sampler(config.lengths);
  const WalkMode mode = config.non_backtracking ? WalkMode::non_backtracking : WalkMode::plain;
  std::vector<WalkTrace> traces(config.n_rw);
  parallel_chunks(config.n_rw, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      Engine rng = make_engine(derive_seed(config.seed, Stream::walks, i));
      std::size_t steps = sampler(rng);
      traces[i] = run_walk(g, config.origin, steps, rng, mode);
    }
  });
  return traces;
}

/// Ordered reduction of traces into the vocabulary-growth curve and visit
/// frequencies. `node_count` sizes the frequency table.
inline std::pair<HeapsCurve, VisitFrequencies> reduce_traces(std::span<const WalkTrace> traces,
                                                             std::size_t node_count,
                                                             bool count_origin = true) {
  HeapsCurve heaps;
  VisitFrequencies freq{std::vector<std::uint64_t>(node_count, 0)};
  std::vector<std::size_t> last_walk(node_count, 0);  // 1-based walk index of last visit
  std::vector<char> seen(node_count, 0);
  std::size_t distinct = 0;
  const auto marks = heaps_checkpoints(traces.size());
  std::size_t next_mark = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& trace = traces[i];
    const NodeId origin = trace.origin();
    for (NodeId v : trace.nodes) {
      if (v >= node_count) throw ParameterError("trace node outside substrate");
      if (!count_origin && v == origin) continue;
      if (last_walk[v] == i + 1) continue;
      last_walk[v] = i + 1;
      ++freq.counts[v];
      if (!seen[v]) {
        seen[v] = 1;
        ++distinct;
      }
    }
    if (next_mark < marks.size() && marks[next_mark] == i + 1) {
      heaps.points.push_back({i + 1, distinct});
      ++next_mark;
    }
  }
  return {std::move(heaps), std::move(freq)};
}

inline EnsembleResult run_ensemble(const SubstrateGraph& g, const WalkConfig& config,
                                   unsigned threads = 1) {
  EnsembleResult result;
  result.traces = generate_traces(g, config, threads);
  auto [heaps, freq] = reduce_traces(result.traces, g.node_count(), config.count_origin);
  result.heaps = std::move(heaps);
  result.frequencies = std::move(freq);
  return result;
}

/// Histogram of requested walk lengths.
inline std::map<std::size_t, std::size_t> trace_lengths_histogram(std::span<const WalkTrace> traces) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& t : traces) ++hist[t.length];
  return hist;
}

inline void write_heaps_csv(std::ostream& out, const HeapsCurve& curve) {
  out << "n_rw,n_distinct\n";
  for (const auto& p : curve.points) out << p.walks << ',' << p.distinct << '\n';
}

/// One walk per line, space-separated node ids.
inline void write_traces(std::ostream& out, std::span<const WalkTrace> traces) {
  for (const auto& t : traces) {
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      if (i) out << ' ';
      out << t.nodes[i];
    }
    out << '\n';
  }
}

/// Reads the trace dump format. The requested length of each trace is taken
/// to be its observed step count.
inline std::vector<WalkTrace> read_traces(std::istream& in) {
  std::vector<WalkTrace> traces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    WalkTrace t;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && line[pos] == ' ') ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] >= '0' && line[end] <= '9') ++end;
      if (end == pos || (end < line.size() && line[end] != ' ')) {
        throw ParseError("malformed trace on line " + std::to_string(lineno));
      }
      t.nodes.push_back(static_cast<NodeId>(std::stoul(line.substr(pos, end - pos))));
      pos = end;
    }
    if (t.nodes.empty()) continue;
    t.length = t.nodes.size() - 1;
    traces.push_back(std::move(t));
  }
  return traces;
}

}  // namespace tagwalk
