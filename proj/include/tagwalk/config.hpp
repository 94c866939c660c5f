#pragma once

// Experiment configuration: one JSON document with every module default
// overridable and unknown keys rejected.
//
//   {
//     "format_version": 1,
//     "seed": 1,
//     "graph": {"type": "watts_strogatz", "n": 50000, "k": 8, "p_rewire": 0.1},
//     "walk": {"origin": 0, "n_rw": 50000,
//              "lengths": {"type": "power_law", "exponent": 3, "l_min": 1, "l_max": 1000},
//              "count_origin": true, "non_backtracking": false},
//     "observables": {"distributions": true, ..., "log_bin_ratio": 2,
//                     "similarity_pair_budget": 1000000},
//     "fits": {"bin_ratio": 1.2589, "heaps": {"lo": 100, "hi": null}, ...},
//     "theory": {"ring_prediction": true, "rings": {...}, "lengths": {...},
//                "grid": {"lo": 1, "hi": 1e7, "points": 71}},
//     "ingest": {"window_start": 978307200, "window_end": null},
//     "output": {"traces": false, "weight_scatter": false}
//   }
//
// A null fit bound selects the automatic bound documented on FitSettings.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "json.hpp"
#include "tagwalk/error.hpp"
#include "tagwalk/ingest.hpp"
#include "tagwalk/substrate.hpp"
#include "tagwalk/theory.hpp"
#include "tagwalk/walker.hpp"

namespace tagwalk {

using Json = nlohmann::json;

inline constexpr std::int64_t config_format_version = 1;

struct ObservableFlags {
  bool distributions = true;
  bool s_of_k = true;
  bool knn = true;
  bool clustering = true;
  bool weight_vs_kikj = true;
  bool similarity = true;
  bool frequency_rank = true;
  double log_bin_ratio = 2.0;
  std::uint64_t similarity_pair_budget = 1'000'000;
};

struct WindowSetting {
  std::optional<double> lo;
  std::optional<double> hi;
};

/// Automatic bounds: heaps hi = last checkpoint; frequency_rank hi = last
/// rank with count >= 2; weight_tail and s_of_k_tail cover the top two
/// decades of their x range.
struct FitSettings {
  double bin_ratio = 1.2589254117941673;  // 10 bins per decade
  WindowSetting heaps{100.0, std::nullopt};
  WindowSetting frequency_rank{10.0, std::nullopt};
  WindowSetting weight_tail{};
  WindowSetting s_of_k_tail{};
  double tail_decades = 2.0;
};

struct TheorySettings {
  bool ring_prediction = true;
  std::optional<RingModel> rings;       // nullopt: ring profile of the substrate
  std::optional<LengthSpec> lengths;    // nullopt: the walk's length model
  double grid_lo = 1.0;
  double grid_hi = 1e7;
  std::size_t grid_points = 71;
  SeriesOptions series;
};

struct IngestSettings {
  std::int64_t window_start = ValidityWindow{}.start;
  std::optional<std::int64_t> window_end;  // nullopt: time of the run
};

struct OutputSettings {
  bool traces = false;
  bool weight_scatter = false;
};

struct ExperimentConfig {
  std::int64_t format_version = config_format_version;
  std::optional<std::uint64_t> seed;
  GraphSpec graph{WattsStrogatzSpec{50'000, 8, 0.1}, 0};
  WalkConfig walk{0, 50'000, PowerLawLength{3.0, 1, 1000}, 0, true, false};
  ObservableFlags observables;
  FitSettings fits;
  TheorySettings theory;
  IngestSettings ingest;
  OutputSettings output;

  std::uint64_t master_seed() const {
    if (!seed) throw ConfigError("a master seed is required (config \"seed\" or --seed)");
    return *seed;
  }
};

namespace config_detail {

inline void allow_keys(const Json& obj, const std::string& where,
                       std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError("unknown config key '" + where + "." + it.key() + "'");
  }
}

inline const Json* find(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline std::string path(const std::string& where, std::string_view key) {
  return where + "." + std::string(key);
}

inline void read(const Json& obj, const std::string& where, std::string_view key, bool& out) {
  if (const auto* v = find(obj, key)) {
    if (!v->is_boolean()) throw ConfigError(path(where, key) + " must be a boolean");
    out = v->get<bool>();
  }
}

inline void read(const Json& obj, const std::string& where, std::string_view key,
                 std::uint64_t& out) {
  if (const auto* v = find(obj, key)) {
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
    } else if (v->is_number_float() && v->get<double>() >= 0.0 &&
               v->get<double>() < 1.8446744073709552e19 &&
               std::floor(v->get<double>()) == v->get<double>()) {
      out = static_cast<std::uint64_t>(v->get<double>());  // allows 5e4
    } else {
      throw ConfigError(path(where, key) + " must be a non-negative integer");
    }
  }
}

inline void read(const Json& obj, const std::string& where, std::string_view key,
                 std::uint32_t& out) {
  std::uint64_t value = out;
  read(obj, where, key, value);
  if (value > 0xffffffffULL) throw ConfigError(path(where, key) + " exceeds 32 bits");
  out = static_cast<std::uint32_t>(value);
}

inline void read(const Json& obj, const std::string& where, std::string_view key,
                 std::int64_t& out) {
  if (const auto* v = find(obj, key)) {
    if (!v->is_number_integer()) throw ConfigError(path(where, key) + " must be an integer");
    if (v->is_number_unsigned() && v->get<std::uint64_t>() > 0x7fffffffffffffffULL) {
      throw ConfigError(path(where, key) + " out of range");
    }
    out = v->get<std::int64_t>();
  }
}

inline void read(const Json& obj, const std::string& where, std::string_view key, double& out) {
  if (const auto* v = find(obj, key)) {
    if (!v->is_number()) throw ConfigError(path(where, key) + " must be a number");
    out = v->get<double>();
  }
}

template <class T>
void read_optional(const Json& obj, const std::string& where, std::string_view key,
                   std::optional<T>& out) {
  if (const auto* v = find(obj, key)) {
    if (v->is_null()) {
      out.reset();
      return;
    }
    T value{};
    read(obj, where, key, value);
    out = value;
  }
}

inline std::string read_type(const Json& obj, const std::string& where) {
  const auto* t = find(obj, "type");
  if (!t || !t->is_string()) throw ConfigError(where + ".type must be a string");
  return t->get<std::string>();
}

inline Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace config_detail

inline GraphSpec parse_graph(const Json& j, const std::string& where = "graph") {
  using namespace config_detail;
  const auto type = read_type(j, where);
  GraphSpec spec;
  if (type == "watts_strogatz") {
    allow_keys(j, where, {"type", "n", "k", "p_rewire"});
    WattsStrogatzSpec s{50'000, 8, 0.1};
    read(j, where, "n", s.n);
    read(j, where, "k", s.k);
    read(j, where, "p_rewire", s.p_rewire);
    spec.variant = s;
  } else if (type == "regular_tree") {
    allow_keys(j, where, {"type", "z", "depth"});
    RegularTreeSpec s{2, 6};
    read(j, where, "z", s.z);
    read(j, where, "depth", s.depth);
    spec.variant = s;
  } else if (type == "erdos_renyi") {
    allow_keys(j, where, {"type", "n", "mean_degree"});
    ErdosRenyiSpec s{1000, 8.0};
    read(j, where, "n", s.n);
    read(j, where, "mean_degree", s.mean_degree);
    spec.variant = s;
  } else {
    throw ConfigError(where + ".type '" + type + "' is not one of watts_strogatz, regular_tree, " +
                      "erdos_renyi");
  }
  return spec;
}

inline Json graph_to_json(const GraphSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WattsStrogatzSpec>) {
          return {{"type", "watts_strogatz"}, {"n", s.n}, {"k", s.k}, {"p_rewire", s.p_rewire}};
        } else if constexpr (std::is_same_v<T, RegularTreeSpec>) {
          return {{"type", "regular_tree"}, {"z", s.z}, {"depth", s.depth}};
        } else {
          return {{"type", "erdos_renyi"}, {"n", s.n}, {"mean_degree", s.mean_degree}};
        }
      },
      spec.variant);
}

inline LengthSpec parse_lengths(const Json& j, const std::string& where) {
  using namespace config_detail;
  const auto type = read_type(j, where);
  if (type == "fixed") {
    allow_keys(j, where, {"type", "steps"});
    FixedLength s;
    read(j, where, "steps", s.steps);
    return s;
  }
  if (type == "power_law") {
    allow_keys(j, where, {"type", "exponent", "l_min", "l_max"});
    PowerLawLength s;
    read(j, where, "exponent", s.exponent);
    read(j, where, "l_min", s.l_min);
    read(j, where, "l_max", s.l_max);
    return s;
  }
  throw ConfigError(where + ".type '" + type + "' is not one of fixed, power_law");
}

inline Json lengths_to_json(const LengthSpec& spec) {
  if (const auto* f = std::get_if<FixedLength>(&spec)) {
    return {{"type", "fixed"}, {"steps", f->steps}};
  }
  const auto& p = std::get<PowerLawLength>(spec);
  return {{"type", "power_law"}, {"exponent", p.exponent}, {"l_min", p.l_min}, {"l_max", p.l_max}};
}

/// nullopt means "ring profile of the configured substrate".
inline std::optional<RingModel> parse_rings(const Json& j, const std::string& where) {
  using namespace config_detail;
  const auto type = read_type(j, where);
  if (type == "power_law") {
    allow_keys(j, where, {"type", "a", "prefactor"});
    PowerLawRings r;
    read(j, where, "a", r.a);
    read(j, where, "prefactor", r.prefactor);
    return r;
  }
  if (type == "exponential") {
    allow_keys(j, where, {"type", "z", "prefactor"});
    ExponentialRings r;
    read(j, where, "z", r.z);
    read(j, where, "prefactor", r.prefactor);
    return r;
  }
  if (type == "substrate") {
    allow_keys(j, where, {"type"});
    return std::nullopt;
  }
  throw ConfigError(where + ".type '" + type + "' is not one of power_law, exponential, substrate");
}

inline Json rings_to_json(const std::optional<RingModel>& rings) {
  if (!rings) return {{"type", "substrate"}};
  if (const auto* p = std::get_if<PowerLawRings>(&*rings)) {
    return {{"type", "power_law"}, {"a", p->a}, {"prefactor", p->prefactor}};
  }
  if (const auto* e = std::get_if<ExponentialRings>(&*rings)) {
    return {{"type", "exponential"}, {"z", e->z}, {"prefactor", e->prefactor}};
  }
  return {{"type", "substrate"}};
}

namespace config_detail {

inline void parse_window(const Json& obj, const std::string& where, std::string_view key,
                         WindowSetting& out) {
  const auto* w = find(obj, key);
  if (!w) return;
  const auto sub = path(where, key);
  allow_keys(*w, sub, {"lo", "hi"});
  read_optional(*w, sub, "lo", out.lo);
  read_optional(*w, sub, "hi", out.hi);
}

inline Json window_to_json(const WindowSetting& w) {
  return {{"lo", optional_number(w.lo)}, {"hi", optional_number(w.hi)}};
}

}  // namespace config_detail

/// Checks every parameter the config refers to, so that a bad config fails
/// before any computation starts.
inline void validate(const ExperimentConfig& c) {
  if (c.format_version != config_format_version) {
    throw ConfigError("unsupported format_version " + std::to_string(c.format_version));
  }
  const auto nodes = expected_node_count(c.graph);
  if (c.walk.origin >= nodes) throw ConfigError("walk.origin is not a node of the graph");
  validate(c.walk.lengths);
  if (!(c.observables.log_bin_ratio > 1.0)) throw ConfigError("log_bin_ratio must be > 1");
  if (c.observables.similarity_pair_budget < 1) {
    throw ConfigError("similarity_pair_budget must be >= 1");
  }
  if (!(c.fits.bin_ratio > 1.0)) throw ConfigError("fits.bin_ratio must be > 1");
  if (!(c.fits.tail_decades > 0.0)) throw ConfigError("fits.tail_decades must be > 0");
  for (const auto* w : {&c.fits.heaps, &c.fits.frequency_rank, &c.fits.weight_tail,
                        &c.fits.s_of_k_tail}) {
    if (w->lo && w->hi && *w->lo > *w->hi) throw ConfigError("fit window has lo > hi");
  }
  if (c.theory.rings) validate(*c.theory.rings);
  if (c.theory.lengths) validate(*c.theory.lengths);
  if (!(c.theory.grid_lo > 0.0) || !(c.theory.grid_hi >= c.theory.grid_lo) ||
      c.theory.grid_points < 1) {
    throw ConfigError("theory.grid needs 0 < lo <= hi and points >= 1");
  }
  if (!(c.theory.series.term_threshold > 0.0)) {
    throw ConfigError("theory.term_threshold must be > 0");
  }
  if (c.ingest.window_end && *c.ingest.window_end < c.ingest.window_start) {
    throw ConfigError("ingest window ends before it starts");
  }
}

/// Parses and validates a config document. The master seed may be left out
/// here and supplied later (command-line override); see master_seed().
inline ExperimentConfig parse_config(const Json& j) {
  using namespace config_detail;
  const std::string root = "config";
  allow_keys(j, root, {"format_version", "seed", "graph", "walk", "observables", "fits", "theory",
                       "ingest", "output"});
  ExperimentConfig c;
  read(j, root, "format_version", c.format_version);
  read_optional(j, root, "seed", c.seed);

  if (const auto* g = find(j, "graph")) c.graph = parse_graph(*g);

  if (const auto* w = find(j, "walk")) {
    const std::string where = "walk";
    allow_keys(*w, where,
               {"origin", "n_rw", "lengths", "count_origin", "non_backtracking"});
    read(*w, where, "origin", c.walk.origin);
    read(*w, where, "n_rw", c.walk.n_rw);
    if (const auto* l = find(*w, "lengths")) c.walk.lengths = parse_lengths(*l, "walk.lengths");
    read(*w, where, "count_origin", c.walk.count_origin);
    read(*w, where, "non_backtracking", c.walk.non_backtracking);
  }

  if (const auto* o = find(j, "observables")) {
    const std::string where = "observables";
    allow_keys(*o, where,
               {"distributions", "s_of_k", "knn", "clustering", "weight_vs_kikj", "similarity",
                "frequency_rank", "log_bin_ratio", "similarity_pair_budget"});
    auto& f = c.observables;
    read(*o, where, "distributions", f.distributions);
    read(*o, where, "s_of_k", f.s_of_k);
    read(*o, where, "knn", f.knn);
    read(*o, where, "clustering", f.clustering);
    read(*o, where, "weight_vs_kikj", f.weight_vs_kikj);
    read(*o, where, "similarity", f.similarity);
    read(*o, where, "frequency_rank", f.frequency_rank);
    read(*o, where, "log_bin_ratio", f.log_bin_ratio);
    read(*o, where, "similarity_pair_budget", f.similarity_pair_budget);
  }

  if (const auto* f = find(j, "fits")) {
    const std::string where = "fits";
    allow_keys(*f, where,
               {"bin_ratio", "tail_decades", "heaps", "frequency_rank", "weight_tail",
                "s_of_k_tail"});
    read(*f, where, "bin_ratio", c.fits.bin_ratio);
    read(*f, where, "tail_decades", c.fits.tail_decades);
    parse_window(*f, where, "heaps", c.fits.heaps);
    parse_window(*f, where, "frequency_rank", c.fits.frequency_rank);
    parse_window(*f, where, "weight_tail", c.fits.weight_tail);
    parse_window(*f, where, "s_of_k_tail", c.fits.s_of_k_tail);
  }

  if (const auto* t = find(j, "theory")) {
    const std::string where = "theory";
    allow_keys(*t, where,
               {"ring_prediction", "rings", "lengths", "grid", "term_threshold", "max_length"});
    read(*t, where, "ring_prediction", c.theory.ring_prediction);
    if (const auto* r = find(*t, "rings")) c.theory.rings = parse_rings(*r, "theory.rings");
    if (const auto* l = find(*t, "lengths")) {
      if (l->is_null()) {
        c.theory.lengths.reset();
      } else {
        c.theory.lengths = parse_lengths(*l, "theory.lengths");
      }
    }
    if (const auto* g = find(*t, "grid")) {
      allow_keys(*g, "theory.grid", {"lo", "hi", "points"});
      read(*g, "theory.grid", "lo", c.theory.grid_lo);
      read(*g, "theory.grid", "hi", c.theory.grid_hi);
      read(*g, "theory.grid", "points", c.theory.grid_points);
    }
    read(*t, where, "term_threshold", c.theory.series.term_threshold);
    read(*t, where, "max_length", c.theory.series.max_length);
  }

  if (const auto* i = find(j, "ingest")) {
    allow_keys(*i, "ingest", {"window_start", "window_end"});
    read(*i, "ingest", "window_start", c.ingest.window_start);
    read_optional(*i, "ingest", "window_end", c.ingest.window_end);
  }

  if (const auto* o = find(j, "output")) {
    allow_keys(*o, "output", {"traces", "weight_scatter"});
    read(*o, "output", "traces", c.output.traces);
    read(*o, "output", "weight_scatter", c.output.weight_scatter);
  }

  validate(c);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  return parse_config(j);
}

/// Fully resolved config; parse_config(to_json(c)) reproduces c.
inline Json to_json(const ExperimentConfig& c) {
  using config_detail::window_to_json;
  const auto& o = c.observables;
  return {
      {"format_version", c.format_version},
      {"seed", c.seed ? Json(*c.seed) : Json(nullptr)},
      {"graph", graph_to_json(c.graph)},
      {"walk",
       {{"origin", c.walk.origin},
        {"n_rw", c.walk.n_rw},
        {"lengths", lengths_to_json(c.walk.lengths)},
        {"count_origin", c.walk.count_origin},
        {"non_backtracking", c.walk.non_backtracking}}},
      {"observables",
       {{"distributions", o.distributions},
        {"s_of_k", o.s_of_k},
        {"knn", o.knn},
        {"clustering", o.clustering},
        {"weight_vs_kikj", o.weight_vs_kikj},
        {"similarity", o.similarity},
        {"frequency_rank", o.frequency_rank},
        {"log_bin_ratio", o.log_bin_ratio},
        {"similarity_pair_budget", o.similarity_pair_budget}}},
      {"fits",
       {{"bin_ratio", c.fits.bin_ratio},
        {"tail_decades", c.fits.tail_decades},
        {"heaps", window_to_json(c.fits.heaps)},
        {"frequency_rank", window_to_json(c.fits.frequency_rank)},
        {"weight_tail", window_to_json(c.fits.weight_tail)},
        {"s_of_k_tail", window_to_json(c.fits.s_of_k_tail)}}},
      {"theory",
       {{"ring_prediction", c.theory.ring_prediction},
        {"rings", rings_to_json(c.theory.rings)},
        {"lengths", c.theory.lengths ? lengths_to_json(*c.theory.lengths) : Json(nullptr)},
        {"grid", {{"lo", c.theory.grid_lo}, {"hi", c.theory.grid_hi},
                  {"points", c.theory.grid_points}}},
        {"term_threshold", c.theory.series.term_threshold},
        {"max_length", c.theory.series.max_length}}},
      {"ingest",
       {{"window_start", c.ingest.window_start},
        {"window_end", c.ingest.window_end ? Json(*c.ingest.window_end) : Json(nullptr)}}},
      {"output", {{"traces", c.output.traces}, {"weight_scatter", c.output.weight_scatter}}},
  };
}

}  // namespace tagwalk
