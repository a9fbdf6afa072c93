#include "ethnomap/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ethnomap/digest.hpp"
#include "ethnomap/error.hpp"

namespace ethnomap {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (panels.empty() && !world) throw ValidationError("config needs panels or a world spec");
  if (!panels.empty() && world) throw ValidationError("config must give either panels or a world spec, not both");
  if (top_n < 2) throw ValidationError("top_n must be at least 2");
  if (world) {
    world->validate();
    if (snapshots < 1) throw ValidationError("snapshots must be at least 1");
  }
  if (!(match_threshold > 0.0 && match_threshold <= 1.0)) throw ValidationError("match_threshold outside (0, 1]");
  if (cut.mode == CutMode::fixed_k && cut.k < 1) throw ValidationError("cut k must be at least 1");
  layout.validate();
  std::set<std::string> labels;
  for (const auto& p : panels) {
    if (!labels.insert(p.label).second) throw ValidationError("duplicate snapshot label '" + p.label + "'");
  }
}

RunConfig config_from_json(const Json& j, const fs::path& base_dir) {
  RunConfig config;
  try {
    if (j.value("schema", std::string{}) != kConfigSchema) {
      throw ValidationError(fmt::format("config schema must be \"{}\"", kConfigSchema));
    }
    config.seed = j.value("seed", config.seed);
    config.top_n = j.value("top_n", config.top_n);
    config.snapshots = j.value("snapshots", config.snapshots);
    config.match_threshold = j.value("match_threshold", config.match_threshold);
    if (j.contains("cut")) {
      const Json& c = j.at("cut");
      const std::string mode = c.value("mode", std::string("auto"));
      if (mode == "k") {
        config.cut = CutSpec::fixed(c.at("k").get<std::size_t>());
      } else if (mode != "auto") {
        throw ValidationError("cut mode must be \"auto\" or \"k\"");
      }
    }
    if (j.contains("layout")) {
      const Json& l = j.at("layout");
      config.layout.width = l.value("width", config.layout.width);
      config.layout.height = l.value("height", config.layout.height);
      config.layout.iterations = l.value("iterations", config.layout.iterations);
      config.layout.initial_temperature = l.value("initial_temperature", config.layout.initial_temperature);
    }
    config.layout.seed = config.seed;
    if (j.contains("world")) {
      config.world = world_from_json(j.at("world"));
      config.world->seed = config.seed;
    }
    for (const auto& p : j.value("panels", Json::array())) {
      PanelInput input;
      input.visits = base_dir / p.at("path").get<std::string>();
      if (p.contains("sites")) input.metadata = base_dir / p.at("sites").get<std::string>();
      input.label = p.value("label", label_from_path(input.visits));
      config.panels.push_back(std::move(input));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid config: ") + e.what());
  }
  config.validate();
  return config;
}

RunConfig load_config(const fs::path& path) {
  return config_from_json(read_json(path), path.parent_path());
}

namespace files {
std::string panel(const std::string& label) { return "panel_" + label + ".csv"; }
std::string site_metadata(const std::string& label) { return "sites_" + label + ".csv"; }
std::string graph(const std::string& label) { return "graph_" + label + ".json"; }
std::string summary(const std::string& label) { return "summary_" + label + ".json"; }
std::string partition(const std::string& label) { return "partition_" + label + ".json"; }
std::string dendrogram(const std::string& label) { return "dendrogram_" + label + ".json"; }
std::string metrics(const std::string& label) { return "metrics_" + label + ".json"; }
std::string layout(const std::string& label) { return "layout_" + label + ".json"; }
std::string map(const std::string& label) { return "map_" + label + ".svg"; }
std::string scatter(const std::string& label) { return "scatter_" + label + ".svg"; }
std::string report(const std::string& label) { return "report_" + label + ".json"; }
std::string error(const std::string& label) { return "error_" + label + ".json"; }
}  // namespace files

std::string label_from_path(const fs::path& path) {
  std::string stem = path.stem().string();
  if (stem.starts_with("panel_") && stem.size() > 6) stem = stem.substr(6);
  return stem;
}

void write_generated_panels(const WorldSpec& world, std::size_t snapshots, const fs::path& out_dir) {
  for (std::size_t t = 0; t < snapshots; ++t) {
    const SyntheticSnapshot snap = generate_snapshot(world, t);
    std::ostringstream panel, meta;
    write_panel_csv(snap.panel, panel);
    write_site_metadata_csv(snap.panel, meta);
    write_text(out_dir / files::panel(snap.panel.label()), panel.str());
    write_text(out_dir / files::site_metadata(snap.panel.label()), meta.str());
  }
}

GraphStage graph_stage(const PanelSnapshot& panel, std::size_t top_n, const fs::path& out_dir) {
  const auto top = top_n_sites(panel, top_n);
  const PanelSnapshot selected = panel.subset(top);
  GraphStage stage{build_valued_graph(selected), {}, {}};
  stage.binary = dichotomize(stage.valued);
  stage.summary = summarize(stage.binary);
  const std::string& label = panel.label();
  write_text(out_dir / files::graph(label), dump(graph_to_json(stage.valued)));
  write_text(out_dir / files::summary(label), dump(summary_to_json(label, stage.summary, stage.valued.pairs_evaluated())));
  return stage;
}

Clustering cluster_stage(const DuplicationGraph& graph, const CutSpec& cut, const Partition* previous,
                         double match_threshold, const fs::path& out_dir) {
  Clustering result = cluster(profile_similarity(graph), cut, graph);
  if (previous) {
    const ClusterMatch match = match_clusters(*previous, result.partition, match_threshold);
    inherit_colors(result.partition, *previous, match);
  }
  const std::string& label = graph.snapshot_label();
  write_text(out_dir / files::partition(label), dump(partition_to_json(result.partition)));
  write_text(out_dir / files::dendrogram(label), dump(dendrogram_to_json(label, result.dendrogram)));
  return result;
}

std::vector<CultureMetrics> measure_stage(const DuplicationGraph& graph, const BinaryGraph& binary,
                                          const Partition& partition, const fs::path& out_dir) {
  auto metrics = snapshot_metrics(graph, binary, partition);
  const std::string& label = graph.snapshot_label();
  write_text(out_dir / files::metrics(label), dump(metrics_to_json(label, metrics)));
  write_text(out_dir / files::scatter(label), render_scatter(metrics, partition));
  return metrics;
}

Layout layout_stage(const BinaryGraph& binary, const Partition& partition, const LayoutParams& params,
                    const fs::path& out_dir) {
  Layout layout = fr_layout(binary, params, partition.snapshot_label());
  const std::string& label = partition.snapshot_label();
  write_text(out_dir / files::layout(label), dump(layout_to_json(layout)));
  write_text(out_dir / files::map(label), render_map(layout, partition, binary));
  return layout;
}

namespace {

template <typename F>
auto in_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const DependencyError& e) {
    throw StageError(stage, "dependency", e.what());
  } catch (const Error& e) {
    throw StageError(stage, "validation", e.what());
  } catch (const std::exception& e) {
    throw StageError(stage, "internal", e.what());
  }
}

std::optional<double> truth_agreement(const std::vector<Site>& sites, const Partition& partition) {
  std::vector<std::string> tags;
  for (const Site& s : sites) {
    if (!s.region_tag) return std::nullopt;
    tags.push_back(*s.region_tag);
  }
  std::vector<std::string> found;
  for (std::size_t i = 0; i < sites.size(); ++i) found.push_back(std::to_string(partition.cluster_of(i)));
  return adjusted_rand_index(std::span<const std::string>(tags), std::span<const std::string>(found));
}

std::string dominant_region(const std::vector<Site>& sites, const Cluster& cluster) {
  std::map<std::string, std::size_t> counts;
  for (std::size_t m : cluster.members) {
    if (sites[m].region_tag) ++counts[*sites[m].region_tag];
  }
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [region, count] : counts) {
    if (count > best_count) {
      best = region;
      best_count = count;
    }
  }
  return best;
}

Json failure_to_json(const SnapshotFailure& f) {
  Json j = artifact_header("error");
  j["snapshot_label"] = f.label;
  j["stage"] = f.stage;
  j["category"] = f.category;
  j["message"] = f.message;
  return j;
}

}  // namespace

SnapshotReport run_snapshot(const PanelSnapshot& panel, const RunConfig& config, const Partition* previous,
                            const fs::path& out_dir) {
  const std::string& label = panel.label();
  GraphStage graph = in_stage("graph", [&] { return graph_stage(panel, config.top_n, out_dir); });
  Clustering clustering = in_stage("cluster", [&] {
    return cluster_stage(graph.valued, config.cut, previous, config.match_threshold, out_dir);
  });
  auto metrics = in_stage("measure", [&] {
    return measure_stage(graph.valued, graph.binary, clustering.partition, out_dir);
  });
  in_stage("layout", [&] { return layout_stage(graph.binary, clustering.partition, config.layout, out_dir); });

  SnapshotReport report;
  report.label = label;
  report.pairs_evaluated = graph.valued.pairs_evaluated();
  report.summary = graph.summary;
  report.partition = std::move(clustering.partition);
  report.metrics = std::move(metrics);
  report.sites = graph.valued.sites();
  report.ground_truth_ari = truth_agreement(report.sites, report.partition);

  in_stage("report", [&] {
    for (const std::string& file :
         {files::graph(label), files::summary(label), files::partition(label), files::dendrogram(label),
          files::metrics(label), files::scatter(label), files::layout(label), files::map(label)}) {
      report.manifest.push_back(ManifestEntry{file, sha256_hex(read_text(out_dir / file))});
    }
    Json j = artifact_header("report");
    j["snapshot_label"] = label;
    j["pairs_evaluated"] = report.pairs_evaluated;
    j["summary"] = {{"node_count", report.summary.node_count},
                    {"edge_count", report.summary.edge_count},
                    {"density", report.summary.density},
                    {"clustering_coefficient", report.summary.clustering_coefficient},
                    {"clustering_variant", kClusteringVariant}};
    j["partition"] = {{"file", files::partition(label)},
                      {"cluster_count", report.partition.cluster_count()},
                      {"cut", cut_to_json(report.partition.cut())}};
    j["metrics"] = Json::array();
    for (const auto& m : report.metrics) j["metrics"].push_back(metrics_row_to_json(m));
    if (report.ground_truth_ari) j["ground_truth_ari"] = *report.ground_truth_ari;
    j["method"] = {{"duplication", "observed minus product of reaches, negatives zeroed"},
                   {"distance_graph", "dichotomized, unweighted geodesics"},
                   {"thickness_graph", "valued"},
                   {"similarity", "pearson over valued rows"},
                   {"linkage", "average"},
                   {"ei_standardization", "population sd across clusters of the snapshot"}};
    j["manifest"] = Json::array();
    for (const auto& e : report.manifest) j["manifest"].push_back({{"file", e.file}, {"sha256", e.sha256}});
    write_text(out_dir / files::report(label), dump(j));
    return 0;
  });
  return report;
}

PipelineResult run_pipeline(const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  PipelineResult result;
  fs::create_directories(out_dir);

  const std::size_t count = config.world ? config.snapshots : config.panels.size();
  std::vector<std::string> all_labels;
  for (std::size_t t = 0; t < count; ++t) {
    std::string label = config.world ? snapshot_label_for(t) : config.panels[t].label;
    all_labels.push_back(label);
    try {
      const PanelSnapshot panel = config.world
          ? in_stage("generate", [&] { return generate_snapshot(*config.world, t).panel; })
          : in_stage("load", [&] {
              const PanelInput& in = config.panels[t];
              return load_panel(in.visits, in.metadata, in.label);
            });
      const Partition* previous = result.reports.empty() ? nullptr : &result.reports.back().partition;
      result.reports.push_back(run_snapshot(panel, config, previous, out_dir));
    } catch (const StageError& f) {
      SnapshotFailure failure{label, f.stage(), f.category(), f.what()};
      write_text(out_dir / files::error(label), dump(failure_to_json(failure)));
      result.failures.push_back(std::move(failure));
    }
  }

  // Homologous clusters between consecutive surviving snapshots.
  for (std::size_t t = 0; t + 1 < result.reports.size(); ++t) {
    result.matches.push_back(
        match_clusters(result.reports[t].partition, result.reports[t + 1].partition, config.match_threshold));
  }

  if (result.reports.size() >= 2) {
    const SnapshotReport& first = result.reports.front();
    for (const Cluster& start : first.partition.clusters()) {
      Track track;
      track.cluster_ids.push_back(start.id);
      bool complete = true;
      for (const ClusterMatch& match : result.matches) {
        auto it = std::find_if(match.pairs.begin(), match.pairs.end(),
                               [&](const ClusterPair& p) { return p.first == track.cluster_ids.back(); });
        if (it == match.pairs.end()) {
          complete = false;
          break;
        }
        track.cluster_ids.push_back(it->second);
      }
      if (!complete) continue;
      track.color = start.color;
      track.dominant_region = dominant_region(first.sites, start);
      track.name = track.dominant_region.empty() ? fmt::format("cluster {}", start.id)
                                                 : fmt::format("{} (cluster {})", track.dominant_region, start.id);
      for (std::size_t t = 0; t < result.reports.size(); ++t) {
        track.ei_index.push_back(result.reports[t].metrics.at(track.cluster_ids[t]).ei_index);
      }
      result.tracks.push_back(std::move(track));
    }
    if (result.tracks.size() >= 2) {
      for (std::size_t t = 0; t < result.reports.size(); ++t) {
        std::vector<double> values;
        for (const Track& tr : result.tracks) values.push_back(tr.ei_index[t]);
        const Standardized z = standardized_ei(values);
        for (std::size_t k = 0; k < result.tracks.size(); ++k) result.tracks[k].ei_standardized.push_back(z.z[k]);
      }
      result.trajectories_empty = false;
    }
  }

  std::vector<std::string> labels;
  for (const auto& r : result.reports) labels.push_back(r.label);

  Json matches = artifact_header("matches");
  matches["threshold"] = config.match_threshold;
  matches["transitions"] = Json::array();
  for (std::size_t t = 0; t < result.matches.size(); ++t) {
    Json m = match_to_json(result.matches[t]);
    m["from_snapshot"] = labels[t];
    m["to_snapshot"] = labels[t + 1];
    matches["transitions"].push_back(std::move(m));
  }
  write_text(out_dir / files::kMatches, dump(matches));

  std::vector<TrajectorySeries> series;
  Json trajectories = artifact_header("trajectories");
  trajectories["snapshots"] = labels;
  trajectories["standardization"] = "population sd across homologous clusters present in every snapshot";
  trajectories["tracks"] = Json::array();
  for (const Track& tr : result.tracks) {
    Json j;
    j["name"] = tr.name;
    j["color"] = tr.color;
    j["dominant_region"] = tr.dominant_region;
    j["cluster_ids"] = tr.cluster_ids;
    j["ei_index"] = tr.ei_index;
    j["ei_standardized"] = tr.ei_standardized;
    trajectories["tracks"].push_back(std::move(j));
    if (!result.trajectories_empty) series.push_back(TrajectorySeries{tr.name, tr.color, tr.ei_standardized});
  }
  trajectories["empty"] = result.trajectories_empty;
  write_text(out_dir / files::kTrajectories, dump(trajectories));
  write_text(out_dir / files::kTrajectoriesSvg, render_trajectories(labels, series).svg);

  Json summary = artifact_header("pipeline");
  summary["snapshots"] = Json::array();
  for (const std::string& label : all_labels) {
    Json s;
    s["label"] = label;
    auto ok = std::find_if(result.reports.begin(), result.reports.end(), [&](auto& r) { return r.label == label; });
    if (ok != result.reports.end()) {
      s["status"] = "ok";
      s["report"] = files::report(label);
      s["pairs_evaluated"] = ok->pairs_evaluated;
      s["cluster_count"] = ok->partition.cluster_count();
      if (ok->ground_truth_ari) s["ground_truth_ari"] = *ok->ground_truth_ari;
    } else {
      s["status"] = "failed";
      s["error"] = files::error(label);
    }
    summary["snapshots"].push_back(std::move(s));
  }
  summary["matches"] = files::kMatches;
  summary["trajectories"] = files::kTrajectoriesSvg;
  write_text(out_dir / files::kPipeline, dump(summary));
  return result;
}

}  // namespace ethnomap
