#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ethnomap/artifacts.hpp"
#include "ethnomap/cartograph.hpp"
#include "ethnomap/duplication.hpp"
#include "ethnomap/graphmetrics.hpp"
#include "ethnomap/measures.hpp"
#include "ethnomap/panel.hpp"
#include "ethnomap/regions.hpp"
#include "ethnomap/synthworld.hpp"

namespace ethnomap {

inline constexpr const char* kConfigSchema = "ethnomap.config/v1";

struct PanelInput {
  std::filesystem::path visits;
  std::optional<std::filesystem::path> metadata;
  std::string label;
};

struct RunConfig {
  std::vector<PanelInput> panels;
  std::optional<WorldSpec> world;
  std::size_t snapshots = 3;  // generated snapshots when `world` is set
  std::size_t top_n = 1000;
  CutSpec cut = CutSpec::automatic();
  double match_threshold = kDefaultMatchThreshold;
  LayoutParams layout;
  std::uint64_t seed = 0;

  void validate() const;
};

// The config seed overrides the world and layout seeds. Relative panel
// paths resolve against `base_dir`.
RunConfig config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

namespace files {
std::string panel(const std::string& label);
std::string site_metadata(const std::string& label);
std::string graph(const std::string& label);
std::string summary(const std::string& label);
std::string partition(const std::string& label);
std::string dendrogram(const std::string& label);
std::string metrics(const std::string& label);
std::string layout(const std::string& label);
std::string map(const std::string& label);
std::string scatter(const std::string& label);
std::string report(const std::string& label);
std::string error(const std::string& label);
inline constexpr const char* kMatches = "matches.json";
inline constexpr const char* kTrajectories = "trajectories.json";
inline constexpr const char* kTrajectoriesSvg = "trajectories.svg";
inline constexpr const char* kPipeline = "pipeline.json";
}  // namespace files

// Label for a panel file: its stem without a leading "panel_".
std::string label_from_path(const std::filesystem::path& path);

// ---- stages; each writes its artifacts under out_dir and returns them ----

struct GraphStage {
  DuplicationGraph valued;
  BinaryGraph binary;
  GraphSummary summary;
};

void write_generated_panels(const WorldSpec& world, std::size_t snapshots, const std::filesystem::path& out_dir);

GraphStage graph_stage(const PanelSnapshot& panel, std::size_t top_n, const std::filesystem::path& out_dir);

// `previous` supplies colors for clusters homologous to the prior snapshot.
Clustering cluster_stage(const DuplicationGraph& graph, const CutSpec& cut, const Partition* previous,
                         double match_threshold, const std::filesystem::path& out_dir);

std::vector<CultureMetrics> measure_stage(const DuplicationGraph& graph, const BinaryGraph& binary,
                                          const Partition& partition, const std::filesystem::path& out_dir);

Layout layout_stage(const BinaryGraph& binary, const Partition& partition, const LayoutParams& params,
                    const std::filesystem::path& out_dir);

struct ManifestEntry {
  std::string file;
  std::string sha256;
};

struct SnapshotReport {
  std::string label;
  std::size_t pairs_evaluated = 0;
  GraphSummary summary;
  Partition partition;
  std::vector<CultureMetrics> metrics;
  std::vector<ManifestEntry> manifest;
  std::vector<Site> sites;              // graph site order
  std::optional<double> ground_truth_ari;  // when every site carries a region tag
};

// All per-snapshot stages plus report_<label>.json.
SnapshotReport run_snapshot(const PanelSnapshot& panel, const RunConfig& config, const Partition* previous,
                            const std::filesystem::path& out_dir);

// Raised by run_snapshot; names the stage the underlying error escaped from.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, std::string category, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)), category_(std::move(category)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& category() const noexcept { return category_; }  // "validation", "dependency" or "internal"

 private:
  std::string stage_;
  std::string category_;
};

struct SnapshotFailure {
  std::string label;
  std::string stage;
  std::string category;  // "validation", "dependency" or "internal"
  std::string message;
};

// Chain of homologous clusters running through every surviving snapshot.
struct Track {
  std::string name;
  std::string color;
  std::string dominant_region;  // empty when sites carry no region tags
  std::vector<std::size_t> cluster_ids;
  std::vector<double> ei_index;
  std::vector<double> ei_standardized;
};

struct PipelineResult {
  std::vector<SnapshotReport> reports;
  std::vector<SnapshotFailure> failures;
  std::vector<ClusterMatch> matches;  // between consecutive surviving snapshots
  std::vector<Track> tracks;
  bool trajectories_empty = true;
};

PipelineResult run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace ethnomap
