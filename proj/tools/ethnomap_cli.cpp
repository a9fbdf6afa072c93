// Command-line front end: each subcommand is one pipeline stage that reads
// the previous stage's artifacts from disk.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ethnomap/error.hpp"
#include "ethnomap/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ethnomap;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kDependency = 2, kInternal = 3 };

struct CommonOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

// Config file is optional for single-stage commands; defaults apply without it.
RunConfig stage_config(const CommonOptions& common) {
  RunConfig config;
  if (!common.config.empty()) {
    const Json j = read_json(common.config);
    config = config_from_json(j, fs::path(common.config).parent_path());
  }
  if (common.seed) {
    config.seed = *common.seed;
    config.layout.seed = *common.seed;
    if (config.world) config.world->seed = *common.seed;
  }
  return config;
}

void require_file(const std::string& path) {
  if (path.empty() || !fs::exists(path)) throw DependencyError(path.empty() ? "<unspecified>" : path);
}

PanelSnapshot load_panel_arg(const std::string& panel, const std::string& sites, const std::string& label) {
  require_file(panel);
  std::optional<fs::path> meta;
  if (!sites.empty()) {
    require_file(sites);
    meta = sites;
  }
  return load_panel(panel, meta, label.empty() ? label_from_path(panel) : label);
}

int exit_code_for(const std::string& category) {
  if (category == "dependency") return kDependency;
  if (category == "internal") return kInternal;
  return kValidation;
}

CutSpec cut_from(const RunConfig& config, std::optional<std::size_t> k) {
  return k ? CutSpec::fixed(*k) : config.cut;
}

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config, "Run configuration (JSON)");
  cmd->add_option("--out", common.out, "Output directory");
  cmd->add_option("--seed", common.seed, "Seed for generation and layout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audience-duplication network mapping of web usage"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string panel, sites, label, graph_path, partition_path, previous_path;
  std::optional<std::size_t> top_n, k;
  std::optional<double> threshold;

  auto* generate = app.add_subcommand("generate", "Write synthetic panel CSVs from the config's world spec");
  add_common(generate, common);

  auto* graph = app.add_subcommand("graph", "Panel CSV -> duplication graph JSON and summary");
  add_common(graph, common);
  graph->add_option("--panel", panel, "Visitation CSV")->required();
  graph->add_option("--sites", sites, "Site metadata CSV");
  graph->add_option("--label", label, "Snapshot label");
  graph->add_option("--top-n", top_n, "Number of top sites kept");

  auto* cluster_cmd = app.add_subcommand("cluster", "Graph JSON -> partition JSON");
  add_common(cluster_cmd, common);
  cluster_cmd->add_option("--graph", graph_path, "Graph artifact");
  cluster_cmd->add_option("--k", k, "Fixed cluster count (default: modularity cut)");
  cluster_cmd->add_option("--previous", previous_path, "Prior snapshot's partition, for stable colors");
  cluster_cmd->add_option("--threshold", threshold, "Jaccard threshold for homologous clusters");

  auto* measure = app.add_subcommand("measure", "Graph + partition -> metrics JSON and scatter SVG");
  add_common(measure, common);
  measure->add_option("--graph", graph_path, "Graph artifact");
  measure->add_option("--partition", partition_path, "Partition artifact");

  auto* layout = app.add_subcommand("layout", "Graph + partition -> coordinates JSON and map SVG");
  add_common(layout, common);
  layout->add_option("--graph", graph_path, "Graph artifact");
  layout->add_option("--partition", partition_path, "Partition artifact");

  auto* report = app.add_subcommand("report", "All stages for one panel");
  add_common(report, common);
  report->add_option("--panel", panel, "Visitation CSV")->required();
  report->add_option("--sites", sites, "Site metadata CSV");
  report->add_option("--label", label, "Snapshot label");
  report->add_option("--top-n", top_n, "Number of top sites kept");
  report->add_option("--previous", previous_path, "Prior snapshot's partition, for stable colors");

  auto* pipeline = app.add_subcommand("pipeline", "Multi-snapshot run from a config");
  add_common(pipeline, common);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = stage_config(common);
    if (top_n) config.top_n = *top_n;
    if (threshold) config.match_threshold = *threshold;
    const fs::path out = common.out;

    auto load_previous = [&]() -> std::optional<Partition> {
      if (previous_path.empty()) return std::nullopt;
      return partition_from_json(read_json(previous_path));
    };

    if (*generate) {
      if (!config.world) throw ValidationError("generate needs a config with a world spec");
      write_generated_panels(*config.world, config.snapshots, out);
    } else if (*graph) {
      graph_stage(load_panel_arg(panel, sites, label), config.top_n, out);
    } else if (*cluster_cmd) {
      require_file(graph_path);
      const DuplicationGraph g = graph_from_json(read_json(graph_path));
      const auto previous = load_previous();
      cluster_stage(g, cut_from(config, k), previous ? &*previous : nullptr, config.match_threshold, out);
    } else if (*measure || *layout) {
      require_file(graph_path);
      require_file(partition_path);
      const DuplicationGraph g = graph_from_json(read_json(graph_path));
      std::vector<std::string> domains;
      for (const Site& s : g.sites()) domains.push_back(s.domain);
      const Partition p = partition_from_json(read_json(partition_path), domains);
      const BinaryGraph b = dichotomize(g);
      if (*measure) {
        measure_stage(g, b, p, out);
      } else {
        layout_stage(b, p, config.layout, out);
      }
    } else if (*report) {
      const auto previous = load_previous();
      run_snapshot(load_panel_arg(panel, sites, label), config, previous ? &*previous : nullptr, out);
    } else if (*pipeline) {
      if (common.config.empty()) throw DependencyError("--config");
      const PipelineResult result = run_pipeline(config, out);
      for (const auto& f : result.failures) {
        std::cerr << "snapshot " << f.label << " failed in " << f.stage << ": " << f.message << "\n";
      }
      if (!result.failures.empty()) return exit_code_for(result.failures.front().category);
    }
  } catch (const StageError& e) {
    std::cerr << "error in " << e.stage() << ": " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const DependencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDependency;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
