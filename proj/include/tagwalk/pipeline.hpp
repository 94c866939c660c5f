#pragma once

// Artifact-producing pipelines behind the command-line subcommands. Every
// artifact directory ends with manifest.json: the resolved config, its hash,
// the master seed and a hash of each file written. Thread counts and wall
// clock times are deliberately absent so that reruns are byte-identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tagwalk/config.hpp"
#include "tagwalk/cooc.hpp"
#include "tagwalk/error.hpp"
#include "tagwalk/ingest.hpp"
#include "tagwalk/observables.hpp"
#include "tagwalk/substrate.hpp"
#include "tagwalk/theory.hpp"
#include "tagwalk/walker.hpp"

namespace tagwalk {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Output stream with the numeric formatting shared by all CSV artifacts.
inline std::ostringstream csv_stream() {
  std::ostringstream out;
  out << std::setprecision(12);
  return out;
}

/// Writes files into one directory and remembers their hashes.
class ArtifactDir {
 public:
  explicit ArtifactDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
    hashes_[name] = hex64(fnv1a(content));
  }

  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  /// Writes manifest.json; `extra` entries are merged into the top level.
  void write_manifest(const std::string& command, const Json& config, Json extra = Json::object()) {
    Json m = std::move(extra);
    m["format_version"] = config_format_version;
    m["command"] = command;
    m["config"] = config;
    m["config_hash"] = hex64(fnv1a(config.dump()));
    m["files"] = hashes_;
    write_json("manifest.json", m);
  }

  const std::filesystem::path& path() const noexcept { return dir_; }
  const std::map<std::string, std::string>& hashes() const noexcept { return hashes_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> hashes_;
};

/// Everything the observable stage needs, from either a synthetic ensemble
/// or an empirical focus-tag stream.
struct AnalysisInput {
  const CoocGraph* cooc = nullptr;
  const HeapsCurve* heaps = nullptr;                      // optional
  const std::vector<std::uint64_t>* frequencies = nullptr;  // optional, indexed by node id
  std::uint64_t similarity_seed = 0;
};

namespace pipeline_detail {

inline const char* flag(bool b) { return b ? "true" : "false"; }

inline void write_series(ArtifactDir& dir, const std::string& name, const std::string& preamble,
                         const std::string& x, const std::string& y, const BinnedSeries& s) {
  auto out = csv_stream();
  out << preamble << x << ',' << y << ",count,low_sample\n";
  for (const auto& p : s.points) {
    out << p.x << ',' << p.y << ',' << p.count << ',' << (p.low_sample ? 1 : 0) << '\n';
  }
  dir.write(name, out.str());
}

inline void write_distribution(ArtifactDir& dir, const std::string& stem, const std::string& var,
                               const Distribution& d, double ratio) {
  auto raw = csv_stream();
  raw << "# observable=" << stem << "\n# sample_size=" << d.sample_size << '\n'
      << var << ",count\n";
  for (const auto& [v, c] : d.raw) raw << v << ',' << c << '\n';
  dir.write(stem + ".csv", raw.str());
  std::ostringstream pre;
  pre << std::setprecision(12) << "# observable=" << stem << "_binned\n# log_bin_ratio=" << ratio
      << "\n# sample_size=" << d.sample_size << '\n';
  write_series(dir, stem + "_binned.csv", pre.str(), var, "density", d.binned);
}

inline Json fit_json(const FitResult& f, FitWindow requested) {
  return {{"exponent", f.exponent},
          {"std_error", f.std_error},
          {"prefactor", f.prefactor},
          {"points", f.points},
          {"window", {f.window.lo, f.window.hi}},
          {"requested_window", {requested.lo, requested.hi}}};
}

template <class Fn>
Json try_fit(Fn&& fn) {
  try {
    return fn();
  } catch (const FitError& e) {
    return {{"error", e.what()}};
  }
}

inline FitWindow resolve(const WindowSetting& w, double auto_lo, double auto_hi) {
  return {w.lo.value_or(auto_lo), w.hi.value_or(auto_hi)};
}

inline std::string window_comment(FitWindow w) {
  std::ostringstream out;
  out << std::setprecision(12) << "# fit_window=" << w.lo << ',' << w.hi << '\n';
  return out.str();
}

}  // namespace pipeline_detail

/// Heaps-curve points with n >= 1 and positive vocabulary, log-binned.
inline BinnedSeries heaps_fit_series(const HeapsCurve& curve, double bin_ratio) {
  std::vector<Point> pts;
  for (const auto& p : curve.points) {
    if (p.walks >= 1 && p.distinct > 0) {
      pts.push_back({static_cast<double>(p.walks), static_cast<double>(p.distinct)});
    }
  }
  return log_bin(pts, bin_ratio);
}

inline BinnedSeries rank_fit_series(std::span<const RankPoint> ranked, double bin_ratio) {
  std::vector<Point> pts;
  pts.reserve(ranked.size());
  for (const auto& r : ranked) {
    pts.push_back({static_cast<double>(r.rank), static_cast<double>(r.count)});
  }
  return log_bin(pts, bin_ratio);
}

/// Mean weight of the edges whose degree product is at or below the 10th
/// percentile of all products.
struct PlateauSummary {
  double product_cutoff = 0.0;
  double mean_weight = 0.0;
  std::size_t edges = 0;
};

inline std::optional<PlateauSummary> lowest_decile_weight(std::span<const Point> scatter) {
  if (scatter.empty()) return std::nullopt;
  std::vector<double> products;
  products.reserve(scatter.size());
  for (const auto& p : scatter) products.push_back(p.x);
  const std::size_t q = (products.size() - 1) / 10;
  std::nth_element(products.begin(), products.begin() + static_cast<std::ptrdiff_t>(q),
                   products.end());
  PlateauSummary s;
  s.product_cutoff = products[q];
  double total = 0.0;
  for (const auto& p : scatter) {
    if (p.x <= s.product_cutoff) {
      total += p.y;
      ++s.edges;
    }
  }
  s.mean_weight = total / static_cast<double>(s.edges);
  return s;
}

/// Writes the selected observable CSVs and returns the fit summary.
/// Throws ContractError if the strength/degree accounting identities fail.
inline Json write_analysis(ArtifactDir& dir, const AnalysisInput& in, const ExperimentConfig& cfg) {
  using namespace pipeline_detail;
  const auto& flags = cfg.observables;
  const auto& fits = cfg.fits;
  const double ratio = flags.log_bin_ratio;
  const WeightedNetwork net(*in.cooc);
  if (!accounting_holds(net)) throw ContractError("strength/degree accounting identity violated");

  Json summary = Json::object();
  summary["network"] = {{"nodes", net.size()},
                        {"edges", net.edge_count()},
                        {"total_weight", in.cooc->total_weight()}};

  if (in.heaps) {
    const double n_max = in.heaps->points.empty()
                             ? 0.0
                             : static_cast<double>(in.heaps->points.back().walks);
    const FitWindow window = resolve(fits.heaps, 100.0, n_max);
    summary["heaps"] = try_fit([&] {
      return fit_json(fit_power_law(heaps_fit_series(*in.heaps, fits.bin_ratio), window), window);
    });
  }

  if (flags.frequency_rank && in.frequencies) {
    const auto ranked = frequency_rank(*in.frequencies);
    double last_repeat = 0.0;
    for (const auto& r : ranked) {
      if (r.count >= 2) last_repeat = static_cast<double>(r.rank);
    }
    const FitWindow window = resolve(fits.frequency_rank, 10.0, last_repeat);
    auto out = csv_stream();
    out << "# observable=frequency_rank\n# ties=ascending node id\n" << window_comment(window)
        << "rank,count,node\n";
    for (const auto& r : ranked) out << r.rank << ',' << r.count << ',' << r.id << '\n';
    dir.write("frequency_rank.csv", out.str());
    summary["frequency_rank"] = try_fit([&] {
      return fit_json(fit_power_law(rank_fit_series(ranked, fits.bin_ratio), window), window);
    });
  }

  if (summary.contains("heaps") && summary.contains("frequency_rank") &&
      summary["heaps"].contains("exponent") && summary["frequency_rank"].contains("exponent")) {
    summary["zipf_heaps_product"] = std::abs(summary["frequency_rank"]["exponent"].get<double>()) *
                                    summary["heaps"]["exponent"].get<double>();
  }

  if (flags.distributions) {
    const auto d = degree_strength_weight_distributions(net);
    write_distribution(dir, "degree_distribution", "k", d.degree, ratio);
    write_distribution(dir, "strength_distribution", "s", d.strength, ratio);
    write_distribution(dir, "weight_distribution", "w", d.weight, ratio);
  }

  if (flags.s_of_k) {
    const auto s = s_of_k(net);
    double k_max = 0.0;
    for (const auto& p : s.points) k_max = std::max(k_max, p.x);
    const FitWindow window =
        resolve(fits.s_of_k_tail, k_max / std::pow(10.0, fits.tail_decades), k_max);
    write_series(dir, "s_of_k.csv",
                 "# observable=s_of_k\n# min_degree=1\n" + window_comment(window), "k", "s", s);
    summary["s_of_k_tail"] = try_fit([&] {
      return fit_json(fit_power_law(log_bin(s.as_points(), fits.bin_ratio), window), window);
    });
  }

  auto write_pair = [&](const std::string& name, const std::string& preamble, const std::string& y,
                        const BinnedSeries& plain, const BinnedSeries& weighted) {
    auto out = csv_stream();
    out << preamble << "k," << y << ',' << y << "_w,count,low_sample\n";
    for (std::size_t i = 0; i < plain.points.size(); ++i) {
      const auto& p = plain.points[i];
      out << p.x << ',' << p.y << ',' << weighted.points[i].y << ',' << p.count << ','
          << (p.low_sample ? 1 : 0) << '\n';
    }
    dir.write(name, out.str());
  };

  if (flags.knn) {
    write_pair("knn_of_k.csv", "# observable=knn_of_k\n# min_degree=1\n# weighted=strength\n", "knn",
               knn_of_k(net, false), knn_of_k(net, true));
  }
  if (flags.clustering) {
    write_pair("clustering_of_k.csv", "# observable=clustering_of_k\n# min_degree=2\n# weighted=strength\n",
               "c", clustering_of_k(net, false), clustering_of_k(net, true));
  }

  if (flags.weight_vs_kikj) {
    const auto wk = weight_vs_kikj(net, ratio);
    double x_max = 0.0;
    for (const auto& p : wk.scatter) x_max = std::max(x_max, p.x);
    const FitWindow window =
        resolve(fits.weight_tail, x_max / std::pow(10.0, fits.tail_decades), x_max);
    std::ostringstream pre;
    pre << std::setprecision(12) << "# observable=weight_vs_kikj\n# log_bin_ratio=" << ratio
        << '\n' << window_comment(window);
    write_series(dir, "weight_vs_kikj.csv", pre.str(), "kikj", "mean_w", wk.binned);
    if (cfg.output.weight_scatter) {
      auto out = csv_stream();
      out << "# observable=weight_vs_kikj_scatter\nkikj,w\n";
      for (const auto& p : wk.scatter) out << p.x << ',' << p.y << '\n';
      dir.write("weight_vs_kikj_scatter.csv", out.str());
    }
    summary["weight_tail"] =
        try_fit([&] { return fit_json(fit_power_law(wk.binned, window), window); });
    if (auto plateau = lowest_decile_weight(wk.scatter)) {
      summary["weight_plateau"] = {{"product_cutoff", plateau->product_cutoff},
                                   {"mean_weight", plateau->mean_weight},
                                   {"edges", plateau->edges}};
    }
  }

  if (flags.similarity) {
    const auto h = cosine_similarity_distribution(net, flags.similarity_pair_budget,
                                                  in.similarity_seed);
    auto out = csv_stream();
    out << "# observable=similarity\n# bin_width=" << h.bin_width << "\n# pairs=" << h.pairs
        << "\n# sampled=" << flag(h.sampled) << "\n# pair_budget=" << flags.similarity_pair_budget
        << "\nbin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << h.bin_width * static_cast<double>(b) << ',' << h.bin_width * static_cast<double>(b + 1)
          << ',' << h.counts[b] << '\n';
    }
    dir.write("similarity.csv", out.str());
    if (h.pairs > 0) {
      summary["similarity"] = {{"mode_bin_lo", h.bin_width * static_cast<double>(h.mode_bin())},
                               {"pairs", h.pairs}};
    }
  }
  return summary;
}

inline void write_heaps(ArtifactDir& dir, const HeapsCurve& curve, bool origin_in_vocabulary,
                        FitWindow window) {
  auto out = csv_stream();
  out << "# observable=heaps\n# origin_in_vocabulary=" << pipeline_detail::flag(origin_in_vocabulary)
      << '\n' << pipeline_detail::window_comment(window);
  write_heaps_csv(out, curve);
  dir.write("heaps.csv", out.str());
}

inline void write_frequencies(ArtifactDir& dir, std::span<const std::uint64_t> counts) {
  auto out = csv_stream();
  out << "node,count\n";
  for (std::size_t v = 0; v < counts.size(); ++v) out << v << ',' << counts[v] << '\n';
  dir.write("frequencies.csv", out.str());
}

inline std::vector<std::uint64_t> read_frequencies(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::uint64_t> counts;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line == "node,count") continue;
    std::istringstream fields(line);
    unsigned long long v = 0, c = 0;
    char comma = 0;
    if (!(fields >> v >> comma >> c) || comma != ',') {
      throw ParseError("malformed frequency row on line " + std::to_string(lineno));
    }
    if (v >= counts.size()) counts.resize(v + 1, 0);
    counts[v] = c;
  }
  return counts;
}

inline HeapsCurve read_heaps(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  HeapsCurve curve;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line == "n_rw,n_distinct") continue;
    std::istringstream fields(line);
    unsigned long long n = 0, d = 0;
    char comma = 0;
    if (!(fields >> n >> comma >> d) || comma != ',') {
      throw ParseError("malformed heaps row on line " + std::to_string(lineno));
    }
    curve.points.push_back({n, d});
  }
  return curve;
}

inline std::vector<ComparisonRow> ring_comparison(const SubstrateGraph& g, const WalkConfig& walk,
                                                  const HeapsCurve& heaps,
                                                  const SeriesOptions& options) {
  const RandomLengthModel model({bfs_rings(g, walk.origin), walk.lengths}, options);
  const double offset = walk.count_origin ? 0.0 : 1.0;
  std::vector<ComparisonRow> rows;
  rows.reserve(heaps.points.size());
  for (const auto& p : heaps.points) {
    const auto n = static_cast<double>(p.walks);
    rows.push_back({n, static_cast<double>(p.distinct), model(n) - offset});
  }
  return rows;
}

/// Substrate generation only.
inline SubstrateGraph build_substrate(const ExperimentConfig& cfg) {
  GraphSpec spec = cfg.graph;
  spec.seed = derive_seed(cfg.master_seed(), Stream::graph);
  return generate(spec);
}

inline WalkConfig resolved_walk(const ExperimentConfig& cfg) {
  WalkConfig walk = cfg.walk;
  walk.seed = cfg.master_seed();
  return walk;
}

inline void run_generate(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  const auto seed = cfg.master_seed();
  const auto g = build_substrate(cfg);
  ArtifactDir dir(out);
  std::ostringstream edges;
  write_edge_list(edges, g);
  dir.write("substrate.tsv", edges.str());
  dir.write_manifest("generate", to_json(cfg), {{"seed", seed}});
}

/// The end-to-end synthetic pipeline.
inline Json run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out,
                           unsigned threads = 1) {
  validate(cfg);
  const auto seed = cfg.master_seed();
  const auto g = build_substrate(cfg);
  const WalkConfig walk = resolved_walk(cfg);
  const auto ensemble = run_ensemble(g, walk, threads);
  const auto cooc = build_from_traces(ensemble.traces, walk.count_origin, threads);

  ArtifactDir dir(out);
  {
    std::ostringstream s;
    write_edge_list(s, g);
    dir.write("substrate.tsv", s.str());
  }
  if (cfg.output.traces) {
    std::ostringstream s;
    write_traces(s, ensemble.traces);
    dir.write("traces.txt", s.str());
  }
  const double n_max =
      ensemble.heaps.points.empty() ? 0.0 : static_cast<double>(ensemble.heaps.points.back().walks);
  write_heaps(dir, ensemble.heaps, walk.count_origin,
              pipeline_detail::resolve(cfg.fits.heaps, 100.0, n_max));
  write_frequencies(dir, ensemble.frequencies.counts);
  {
    std::ostringstream s;
    write_weighted_edge_list(s, cooc);
    dir.write("cooc.tsv", s.str());
    std::ostringstream n;
    write_node_list(n, cooc);
    dir.write("cooc_nodes.txt", n.str());
  }

  AnalysisInput in;
  in.cooc = &cooc;
  in.heaps = &ensemble.heaps;
  in.frequencies = &ensemble.frequencies.counts;
  in.similarity_seed = seed;
  Json fits = write_analysis(dir, in, cfg);

  if (cfg.theory.ring_prediction) {
    const auto rows = ring_comparison(g, walk, ensemble.heaps, cfg.theory.series);
    auto s = csv_stream();
    s << "# observable=theory_comparison\n# rings=substrate bfs profile\n# origin_in_vocabulary="
      << pipeline_detail::flag(walk.count_origin) << '\n';
    write_comparison_csv(s, rows);
    dir.write("theory_comparison.csv", s.str());
  }
  dir.write_json("fits.json", fits);
  dir.write_manifest("run", to_json(cfg),
                     {{"seed", seed}, {"kind", "synthetic"},
                      {"origin_in_vocabulary", walk.count_origin}});
  return fits;
}

/// Walk stage: traces, Heaps curve and visit frequencies. Uses `graph` when
/// given, otherwise generates the configured substrate.
inline void run_walk(const ExperimentConfig& cfg, const std::optional<SubstrateGraph>& graph,
                     const std::filesystem::path& out, unsigned threads = 1) {
  const auto seed = cfg.master_seed();
  const SubstrateGraph g = graph ? *graph : build_substrate(cfg);
  WalkConfig walk = resolved_walk(cfg);
  if (walk.origin >= g.node_count()) throw ConfigError("walk.origin is not a node of the graph");
  const auto ensemble = run_ensemble(g, walk, threads);
  ArtifactDir dir(out);
  std::ostringstream s;
  write_traces(s, ensemble.traces);
  dir.write("traces.txt", s.str());
  const double n_max =
      ensemble.heaps.points.empty() ? 0.0 : static_cast<double>(ensemble.heaps.points.back().walks);
  write_heaps(dir, ensemble.heaps, walk.count_origin,
              pipeline_detail::resolve(cfg.fits.heaps, 100.0, n_max));
  write_frequencies(dir, ensemble.frequencies.counts);
  dir.write_manifest("walk", to_json(cfg),
                     {{"seed", seed}, {"kind", "synthetic"},
                      {"origin_in_vocabulary", walk.count_origin},
                      {"substrate", graph ? "file" : "generated"}});
}

inline void run_cooc(const std::vector<WalkTrace>& traces, bool count_origin,
                     const std::filesystem::path& out, unsigned threads = 1) {
  const auto cooc = build_from_traces(traces, count_origin, threads);
  ArtifactDir dir(out);
  std::ostringstream s;
  write_weighted_edge_list(s, cooc);
  dir.write("cooc.tsv", s.str());
  std::ostringstream n;
  write_node_list(n, cooc);
  dir.write("cooc_nodes.txt", n.str());
  dir.write_manifest("cooc", Json{{"count_origin", count_origin}});
}

/// Observables of an existing co-occurrence network.
inline Json run_stats(const ExperimentConfig& cfg, const CoocGraph& cooc,
                      const std::optional<std::vector<std::uint64_t>>& frequencies,
                      const std::filesystem::path& out) {
  ArtifactDir dir(out);
  AnalysisInput in;
  in.cooc = &cooc;
  in.frequencies = frequencies ? &*frequencies : nullptr;
  in.similarity_seed = cfg.seed.value_or(0);
  Json fits = write_analysis(dir, in, cfg);
  dir.write_json("fits.json", fits);
  dir.write_manifest("stats", to_json(cfg), {{"seed", cfg.seed.value_or(0)}, {"kind", "stats"}});
  return fits;
}

/// Ring-model predictions over the configured n_rw grid.
inline Json run_theory(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  const auto& t = cfg.theory;
  const LengthSpec lengths = t.lengths.value_or(cfg.walk.lengths);
  RingModel rings;
  if (t.rings) {
    rings = *t.rings;
  } else {
    rings = bfs_rings(build_substrate(cfg), cfg.walk.origin);
  }
  const RandomLengthModel model({rings, lengths}, t.series);
  const auto grid = log_grid(t.grid_lo, t.grid_hi, t.grid_points);
  std::vector<std::pair<double, double>> curve;
  std::vector<Point> pts;
  for (double n : grid) {
    const double y = model(n);
    curve.emplace_back(n, y);
    pts.push_back({n, y});
  }
  ArtifactDir dir(out);
  auto s = csv_stream();
  s << "# observable=theory_prediction\n";
  write_prediction_csv(s, curve);
  dir.write("prediction.csv", s.str());

  Json summary = {{"rings", rings_to_json(t.rings)}, {"lengths", lengths_to_json(lengths)}};
  const FitWindow window{t.grid_lo, t.grid_hi};
  summary["slope"] = pipeline_detail::try_fit(
      [&] { return pipeline_detail::fit_json(fit_power_law(pts, window), window); });
  const auto* pl_rings = std::get_if<PowerLawRings>(&rings);
  const auto* pl_lengths = std::get_if<PowerLawLength>(&lengths);
  if (pl_rings && pl_lengths) {
    summary["asymptotic_exponent"] = asymptotic_exponent(pl_rings->a, pl_lengths->exponent);
  }
  if (std::holds_alternative<ExponentialRings>(rings) && pl_lengths && t.grid_lo >= 3.0) {
    auto r = csv_stream();
    r << "# observable=log_corrected_ratio\nn_rw,prediction,shape,ratio\n";
    for (const auto& [n, y] : curve) {
      const double shape = asymptotic_log_corrected(pl_lengths->exponent, n);
      r << n << ',' << y << ',' << shape << ',' << y / shape << '\n';
    }
    dir.write("log_corrected.csv", r.str());
  }
  dir.write_json("theory.json", summary);
  dir.write_manifest("theory", to_json(cfg), {{"seed", cfg.seed ? Json(*cfg.seed) : Json(nullptr)}});
  return summary;
}

/// Empirical pipeline for one focus tag of a JSON Lines post log.
inline Json run_ingest(const ExperimentConfig& cfg, const std::filesystem::path& input,
                       const std::string& focus_tag, bool strict,
                       const std::filesystem::path& out) {
  ValidityWindow window = ValidityWindow::until_now();
  window.start = cfg.ingest.window_start;
  if (cfg.ingest.window_end) window.end = *cfg.ingest.window_end;
  const std::string raw = read_file(input);
  std::istringstream in(raw);
  const auto parsed = parse_posts(in, window, strict, input.string());
  const std::string focus = fold_case(focus_tag);
  const auto stream = filter_by_tag(parsed.corpus, focus);

  const auto full = vocabulary_growth(stream, focus);
  HeapsCurve heaps;
  for (auto mark : heaps_checkpoints(full.points.size())) heaps.points.push_back(full.points[mark - 1]);
  const auto cooc = empirical_cooc(stream, focus);
  const auto freq = tag_frequencies(stream, focus);

  ArtifactDir dir(out);
  {
    auto s = csv_stream();
    write_rejections_csv(s, parsed.report);
    dir.write("rejections.csv", s.str());
  }
  const double n_max = heaps.points.empty() ? 0.0 : static_cast<double>(heaps.points.back().walks);
  write_heaps(dir, heaps, false, pipeline_detail::resolve(cfg.fits.heaps, 100.0, n_max));
  write_frequencies(dir, freq);
  {
    std::ostringstream s;
    write_weighted_edge_list(s, cooc);
    dir.write("cooc.tsv", s.str());
    std::ostringstream n;
    write_node_list(n, cooc);
    dir.write("cooc_nodes.txt", n.str());
    std::ostringstream t;
    for (std::size_t i = 0; i < cooc.labels().size(); ++i) t << i << '\t' << cooc.labels()[i] << '\n';
    dir.write("tags.tsv", t.str());
  }
  AnalysisInput a;
  a.cooc = &cooc;
  a.heaps = &heaps;
  a.frequencies = &freq;
  a.similarity_seed = cfg.seed.value_or(0);
  Json fits = write_analysis(dir, a, cfg);
  dir.write_json("fits.json", fits);
  Json resolved = to_json(cfg);
  resolved["ingest"]["window_end"] = window.end;
  dir.write_manifest("ingest", resolved,
                     {{"seed", cfg.seed.value_or(0)},
                      {"kind", "empirical"},
                      {"origin_in_vocabulary", false},
                      {"focus_tag", focus},
                      {"input_hash", hex64(fnv1a(raw))},
                      {"posts_accepted", parsed.report.accepted},
                      {"posts_in_stream", stream.size()}});
  return fits;
}

/// Outcome of comparing two artifact directories.
struct CompareReport {
  std::vector<std::string> compared;
  std::vector<std::string> warnings;
  Json fits = Json::object();
};

namespace pipeline_detail {

inline const std::vector<std::string>& observable_files() {
  static const std::vector<std::string> files{
      "heaps.csv",
      "frequency_rank.csv",
      "degree_distribution.csv",
      "degree_distribution_binned.csv",
      "strength_distribution.csv",
      "strength_distribution_binned.csv",
      "weight_distribution.csv",
      "weight_distribution_binned.csv",
      "s_of_k.csv",
      "knn_of_k.csv",
      "clustering_of_k.csv",
      "weight_vs_kikj.csv",
      "similarity.csv",
  };
  return files;
}

// Header line and data rows of a CSV artifact, comment lines dropped.
inline std::pair<std::string, std::vector<std::string>> csv_body(const std::string& text) {
  std::istringstream in(text);
  std::string line, header;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = line;
    } else {
      rows.push_back(line);
    }
  }
  return {header, rows};
}

inline std::optional<Json> read_json_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON in " + path.string());
  return j;
}

}  // namespace pipeline_detail

/// Side-by-side CSVs for every observable present on both sides, fitted
/// exponents from both fit summaries, and a Heaps refit with vocabularies
/// aligned to exclude the walk origin. Missing inputs produce warnings.
inline CompareReport compare(const std::filesystem::path& empirical,
                             const std::filesystem::path& synthetic,
                             const std::filesystem::path& out) {
  using namespace pipeline_detail;
  CompareReport report;
  ArtifactDir dir(out);
  for (const auto& name : observable_files()) {
    const bool in_e = std::filesystem::exists(empirical / name);
    const bool in_s = std::filesystem::exists(synthetic / name);
    if (!in_e && !in_s) continue;
    if (in_e != in_s) {
      report.warnings.push_back(name + " missing from " +
                                (in_e ? std::string("synthetic") : std::string("empirical")));
      continue;
    }
    const auto [he, re] = csv_body(read_file(empirical / name));
    const auto [hs, rs] = csv_body(read_file(synthetic / name));
    if (he != hs) {
      report.warnings.push_back(name + " has different columns on the two sides");
      continue;
    }
    auto s = csv_stream();
    s << "source," << he << '\n';
    for (const auto& r : re) s << "empirical," << r << '\n';
    for (const auto& r : rs) s << "synthetic," << r << '\n';
    dir.write("compare_" + name, s.str());
    report.compared.push_back(name);
  }

  const auto fe = read_json_file(empirical / "fits.json");
  const auto fs = read_json_file(synthetic / "fits.json");
  const auto me = read_json_file(empirical / "manifest.json");
  const auto ms = read_json_file(synthetic / "manifest.json");
  if (!fe) report.warnings.push_back("fits.json missing from empirical");
  if (!fs) report.warnings.push_back("fits.json missing from synthetic");

  auto s = csv_stream();
  s << "fit,empirical,empirical_std_error,synthetic,synthetic_std_error,difference\n";
  auto add_row = [&](const std::string& name, const Json& a, const Json& b) {
    s << name << ',' << a["exponent"].get<double>() << ',' << a["std_error"].get<double>() << ','
      << b["exponent"].get<double>() << ',' << b["std_error"].get<double>() << ','
      << b["exponent"].get<double>() - a["exponent"].get<double>() << '\n';
    report.fits[name] = {{"empirical", a}, {"synthetic", b}};
  };
  if (fe && fs) {
    for (const auto& name : {"heaps", "frequency_rank", "s_of_k_tail", "weight_tail"}) {
      const bool ok_e = fe->contains(name) && (*fe)[name].contains("exponent");
      const bool ok_s = fs->contains(name) && (*fs)[name].contains("exponent");
      if (ok_e && ok_s) {
        add_row(name, (*fe)[name], (*fs)[name]);
      } else if (ok_e || ok_s) {
        report.warnings.push_back(std::string(name) + " fit missing from " +
                                  (ok_e ? "synthetic" : "empirical"));
      }
    }
  }

  // Heaps refit with the origin removed from vocabularies that include it.
  if (std::filesystem::exists(empirical / "heaps.csv") &&
      std::filesystem::exists(synthetic / "heaps.csv")) {
    auto aligned_fit = [&](const std::filesystem::path& side,
                           const std::optional<Json>& manifest,
                           const std::optional<Json>& fits) -> Json {
      auto curve = read_heaps(read_file(side / "heaps.csv"));
      const bool includes_origin = manifest && manifest->value("origin_in_vocabulary", false);
      if (includes_origin) {
        for (auto& p : curve.points) p.distinct = p.distinct > 0 ? p.distinct - 1 : 0;
      }
      double bin_ratio = FitSettings{}.bin_ratio;
      if (manifest && manifest->contains("config")) {
        bin_ratio = (*manifest)["config"]["fits"].value("bin_ratio", bin_ratio);
      }
      FitWindow window{100.0, curve.points.empty() ? 0.0 : static_cast<double>(curve.points.back().walks)};
      if (fits && fits->contains("heaps") && (*fits)["heaps"].contains("requested_window")) {
        const auto& w = (*fits)["heaps"]["requested_window"];
        window = {w[0].get<double>(), w[1].get<double>()};
      }
      return try_fit([&] {
        return fit_json(fit_power_law(heaps_fit_series(curve, bin_ratio), window), window);
      });
    };
    const Json a = aligned_fit(empirical, me, fe);
    const Json b = aligned_fit(synthetic, ms, fs);
    if (a.contains("exponent") && b.contains("exponent")) {
      add_row("heaps_aligned", a, b);
    } else {
      report.warnings.push_back("aligned heaps refit failed on one side");
    }
  }
  dir.write("compare_fits.csv", s.str());
  dir.write_json("compare_report.json", {{"compared", report.compared},
                                         {"warnings", report.warnings},
                                         {"fits", report.fits}});
  return report;
}

}  // namespace tagwalk
