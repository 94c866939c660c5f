#pragma once

// Expected vocabulary size N_distinct(n_rw) for ensembles of independent
// walks from one origin: the exact visit-probability sum, the ring-model
// sums for fixed and random walk lengths, and their asymptotic shapes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "tagwalk/error.hpp"
#include "tagwalk/parallel.hpp"
#include "tagwalk/rng.hpp"
#include "tagwalk/substrate.hpp"
#include "tagwalk/walker.hpp"

namespace tagwalk {

/// Probability that a single walk visits each node, with binomial standard
/// errors when estimated by sampling (zero when exact).
struct VisitProbabilities {
  std::vector<double> p;
  std::vector<double> std_error;
  std::size_t samples = 0;
};

/// sum_i 1 - (1 - p_i)^n_rw
inline double n_distinct_exact(std::span<const double> p, double n_rw) {
  double total = 0.0;
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw ParameterError("visit probability outside [0, 1]");
    if (pi == 0.0 || n_rw <= 0.0) continue;
    total += (pi == 1.0) ? 1.0 : -std::expm1(n_rw * std::log1p(-pi));
  }
  return total;
}

inline double n_distinct_exact(const VisitProbabilities& probs, double n_rw) {
  return n_distinct_exact(probs.p, n_rw);
}

/// Monte Carlo estimate of per-node visit probabilities from n_samples
/// independent walks. Walk i uses derive_seed(seed, visit_probs, i).
inline VisitProbabilities estimate_visit_probs(const SubstrateGraph& g, NodeId origin,
                                               const LengthSpec& lengths, std::size_t n_samples,
                                               std::uint64_t seed, bool count_origin = true,
                                               unsigned threads = 1) {
  if (n_samples < 1) throw ParameterError("estimate_visit_probs needs n_samples >= 1");
  if (origin >= g.node_count()) throw ParameterError("origin out of range");
  const LengthSampler sampler(lengths);
  const std::size_t n = g.node_count();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n_samples));
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(n, 0));
  parallel_chunks(n_samples, static_cast<unsigned>(chunks),
                  [&](std::size_t begin, std::size_t end, std::size_t c) {
                    auto& counts = partial[c];
                    std::vector<std::size_t> last(n, 0);
                    for (std::size_t i = begin; i < end; ++i) {
                      Engine rng = make_engine(derive_seed(seed, Stream::visit_probs, i));
                      const auto trace = run_walk(g, origin, sampler(rng), rng);
                      for (NodeId v : trace.nodes) {
                        if (!count_origin && v == origin) continue;
                        if (last[v] == i + 1) continue;
                        last[v] = i + 1;
                        ++counts[v];
                      }
                    }
                  });
  VisitProbabilities out;
  out.samples = n_samples;
  out.p.assign(n, 0.0);
  out.std_error.assign(n, 0.0);
  const auto ns = static_cast<double>(n_samples);
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t c = 0;
    for (const auto& part : partial) c += part[v];
    const double p = static_cast<double>(c) / ns;
    out.p[v] = p;
    out.std_error[v] = std::sqrt(p * (1.0 - p) / ns);
  }
  return out;
}

/// N_l = max(1, round(prefactor * l^a))
struct PowerLawRings {
  double a = 1.0;
  double prefactor = 1.0;
};

/// N_l = max(1, round(prefactor * z^l))
struct ExponentialRings {
  double z = 2.0;
  double prefactor = 1.0;
};

using RingModel = std::variant<PowerLawRings, ExponentialRings, RingProfile>;

struct RingModelSpec {
  RingModel rings;
  LengthSpec lengths;
};

inline void validate(const RingModel& rings) {
  if (const auto* pl = std::get_if<PowerLawRings>(&rings)) {
    if (!(pl->a > 0.0) || !(pl->prefactor > 0.0)) {
      throw ParameterError("power-law rings need a > 0 and prefactor > 0");
    }
  } else if (const auto* ex = std::get_if<ExponentialRings>(&rings)) {
    if (!(ex->z > 1.0) || !(ex->prefactor > 0.0)) {
      throw ParameterError("exponential rings need z > 1 and prefactor > 0");
    }
  } else {
    const auto& profile = std::get<RingProfile>(rings);
    if (profile.sizes.empty() || profile.sizes.front() != 1) {
      throw ParameterError("ring profile must start with N_0 = 1");
    }
    for (auto s : profile.sizes) {
      if (s < 1) throw ParameterError("ring profile sizes must be >= 1");
    }
  }
}

/// Size of ring l, or nullopt past the end of an empirical profile.
inline std::optional<double> ring_size(const RingModel& rings, std::size_t l) {
  return std::visit(
      [l](const auto& r) -> std::optional<double> {
        using T = std::decay_t<decltype(r)>;
        const auto ld = static_cast<double>(l);
        if constexpr (std::is_same_v<T, PowerLawRings>) {
          return std::max(1.0, std::round(r.prefactor * std::pow(ld, r.a)));
        } else if constexpr (std::is_same_v<T, ExponentialRings>) {
          return std::max(1.0, std::round(r.prefactor * std::pow(r.z, ld)));
        } else {
          if (l >= r.sizes.size()) return std::nullopt;
          return static_cast<double>(r.sizes[l]);
        }
      },
      rings);
}

/// N (1 - (1 - 1/N)^visits): expected number of distinct nodes hit in a ring
/// of N equally likely nodes after `visits` uniform visits.
inline double ring_term(double ring_nodes, double visits) {
  if (!(visits > 0.0)) return 0.0;
  if (ring_nodes == 1.0) return 1.0;
  if (!std::isfinite(ring_nodes)) return visits;
  return -ring_nodes * std::expm1(visits * std::log1p(-1.0 / ring_nodes));
}

/// Fixed-length ring model: sum_{l=0}^{l_max} N_l (1 - (1 - 1/N_l)^n_rw).
inline double n_distinct_fixed_length(const RingModel& rings, std::size_t l_max, double n_rw) {
  validate(rings);
  double total = 0.0;
  for (std::size_t l = 0; l <= l_max; ++l) {
    auto nl = ring_size(rings, l);
    if (!nl) throw ParameterError("ring profile shorter than l_max = " + std::to_string(l_max));
    total += ring_term(*nl, n_rw);
  }
  return total;
}

struct SeriesOptions {
  double term_threshold = 1e-12;
  std::size_t max_length = 100'000;  // largest ring index evaluated
};

/// Random-length ring model, sum_l N_l (1 - (1 - 1/N_l)^(n_rw P_>(l))).
///
/// Ring sizes and the exact tail probabilities P_>(l) of the (finite-support)
/// length distribution are tabulated once; each evaluation stops at the end
/// of the support, at the end of an empirical profile, or once terms have
/// started decreasing and dropped below the threshold.
class RandomLengthModel {
 public:
  explicit RandomLengthModel(const RingModelSpec& spec, SeriesOptions options = {})
      : options_(options) {
    validate(spec.rings);
    tail_ = LengthSampler(spec.lengths).tail_probabilities();
    for (std::size_t l = 0; l < tail_.size(); ++l) {
      if (l > options_.max_length) {
        capped_ = true;
        break;
      }
      auto nl = ring_size(spec.rings, l);
      if (!nl) break;
      rings_.push_back(*nl);
    }
  }

  double operator()(double n_rw) const {
    double total = 0.0;
    double previous = 0.0;
    for (std::size_t l = 0; l < rings_.size(); ++l) {
      const double term = ring_term(rings_[l], n_rw * tail_[l]);
      total += term;
      if (term < options_.term_threshold && term < previous) return total;
      previous = term;
    }
    if (capped_ && previous >= options_.term_threshold) {
      throw EvaluationError("ring series did not decay within " +
                            std::to_string(options_.max_length) + " terms");
    }
    return total;
  }

 private:
  SeriesOptions options_;
  std::vector<double> tail_;
  std::vector<double> rings_;
  bool capped_ = false;
};

inline double n_distinct_random_length(const RingModelSpec& spec, double n_rw,
                                       SeriesOptions options = {}) {
  return RandomLengthModel(spec, options)(n_rw);
}

/// Growth exponent (a + 1) / (a + b - 1) for N_l ~ l^a and P(l) ~ l^-b.
inline double asymptotic_exponent(double a, double b) {
  if (!(a > 0.0) || !(b > 1.0)) throw ParameterError("asymptotic_exponent needs a > 0, b > 1");
  return (a + 1.0) / (a + b - 1.0);
}

/// n_rw / (ln n_rw)^(b - 1): shape of the exponential-ring regime, up to an
/// undetermined constant.
inline double asymptotic_log_corrected(double b, double n_rw) {
  if (!(n_rw >= 3.0) || !(b >= 1.0)) {
    throw ParameterError("asymptotic_log_corrected needs n_rw >= 3, b >= 1");
  }
  return n_rw / std::pow(std::log(n_rw), b - 1.0);
}

/// n points log-spaced over [lo, hi], inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw ParameterError("bad log grid");
  std::vector<double> out;
  if (n == 1) return {lo};
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo * std::exp(step * static_cast<double>(i)));
  out.back() = hi;
  return out;
}

inline void write_prediction_csv(std::ostream& out,
                                 std::span<const std::pair<double, double>> curve) {
  out << "n_rw,prediction\n";
  for (const auto& [n, y] : curve) out << n << ',' << y << '\n';
}

struct ComparisonRow {
  double n_rw = 0.0;
  double simulated = 0.0;
  double predicted = 0.0;
};

inline void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << "n_rw,simulated,predicted,ratio\n";
  for (const auto& r : rows) {
    out << r.n_rw << ',' << r.simulated << ',' << r.predicted << ','
        << (r.predicted > 0.0 ? r.simulated / r.predicted : 0.0) << '\n';
  }
}

}  // namespace tagwalk
