// tagwalk command-line driver.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tagwalk/tagwalk.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tagwalk;

constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

struct Common {
  std::string config_path;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("--config", c.config_path, "JSON experiment config");
  if (needs_config) opt->required();
  opt->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "artifact directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
  cmd->add_option("--threads", c.threads, "worker threads (does not change results)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
}

ExperimentConfig load_config(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = parse_config_text(read_file(c.config_path));
  if (c.seed) cfg.seed = c.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-walk model of collaborative tagging: simulation, theory and analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tagwalk 1.0.0");

  Common common;
  std::string graph_path, traces_path, cooc_path, nodes_path, freq_path, input_path, tag;
  std::string empirical_dir, synthetic_dir;
  bool strict = false, exclude_origin = false;

  auto* generate = app.add_subcommand("generate", "generate a substrate graph");
  add_common(generate, common, true);

  auto* walk = app.add_subcommand("walk", "run a walk ensemble on a substrate");
  add_common(walk, common, true);
  walk->add_option("--graph", graph_path, "substrate edge list (default: generate from config)")
      ->check(CLI::ExistingFile);

  auto* cooc = app.add_subcommand("cooc", "project walk traces into a co-occurrence network");
  add_common(cooc, common, false);
  cooc->add_option("--traces", traces_path, "traces file")->required()->check(CLI::ExistingFile);
  cooc->add_flag("--exclude-origin", exclude_origin, "leave each walk's origin out of its clique");

  auto* stats = app.add_subcommand("stats", "observables of a co-occurrence network");
  add_common(stats, common, false);
  stats->add_option("--cooc", cooc_path, "weighted edge list")->required()->check(CLI::ExistingFile);
  stats->add_option("--nodes", nodes_path, "node list (keeps isolated nodes)")
      ->check(CLI::ExistingFile);
  stats->add_option("--frequencies", freq_path, "node,count CSV for the frequency-rank plot")
      ->check(CLI::ExistingFile);

  auto* theory = app.add_subcommand("theory", "ring-model predictions over an n_rw grid");
  add_common(theory, common, true);

  auto* ingest = app.add_subcommand("ingest", "analyze one focus tag of a JSON Lines post log");
  add_common(ingest, common, false);
  ingest->add_option("--input", input_path, "post log")->required()->check(CLI::ExistingFile);
  ingest->add_option("--tag", tag, "focus tag")->required();
  ingest->add_flag("--strict", strict, "abort on the first malformed line");

  auto* cmp = app.add_subcommand("compare", "juxtapose empirical and synthetic artifacts");
  cmp->add_option("--empirical", empirical_dir, "empirical artifact directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmp->add_option("--synthetic", synthetic_dir, "synthetic artifact directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmp->add_option("--out", common.out, "report directory")->capture_default_str();

  auto* run = app.add_subcommand("run", "end-to-end synthetic experiment");
  add_common(run, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  ExperimentConfig cfg;
  try {
    if (!cmp->parsed()) {
      cfg = load_config(common);
      validate(cfg);
      const bool needs_seed = generate->parsed() || walk->parsed() || run->parsed() ||
                              (theory->parsed() && !cfg.theory.rings);
      if (needs_seed) cfg.master_seed();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    const fs::path out = common.out;
    if (generate->parsed()) {
      run_generate(cfg, out);
    } else if (walk->parsed()) {
      std::optional<SubstrateGraph> g;
      if (!graph_path.empty()) {
        std::istringstream in(read_file(graph_path));
        g = read_edge_list(in);
      }
      run_walk(cfg, g, out, common.threads);
    } else if (cooc->parsed()) {
      std::istringstream in(read_file(traces_path));
      run_cooc(read_traces(in), !exclude_origin, out, common.threads);
    } else if (stats->parsed()) {
      std::istringstream in(read_file(cooc_path));
      CoocGraph g = read_weighted_edge_list(in);
      if (!nodes_path.empty()) {
        std::istringstream nodes(read_file(nodes_path));
        unsigned long long v = 0;
        while (nodes >> v) g.add_node(static_cast<NodeId>(v));
      }
      std::optional<std::vector<std::uint64_t>> freq;
      if (!freq_path.empty()) freq = read_frequencies(read_file(freq_path));
      run_stats(cfg, g, freq, out);
    } else if (theory->parsed()) {
      run_theory(cfg, out);
    } else if (ingest->parsed()) {
      run_ingest(cfg, input_path, tag, strict, out);
    } else if (cmp->parsed()) {
      const auto report = compare(empirical_dir, synthetic_dir, out);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    } else if (run->parsed()) {
      run_experiment(cfg, out, common.threads);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return 0;
}
