#include "ethnomap/artifacts.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "ethnomap/error.hpp"

namespace ethnomap {
namespace {

const char* cut_mode_name(CutMode mode) { return mode == CutMode::fixed_k ? "k" : "auto"; }

template <typename F>
auto parse_or_throw(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed ") + what + " artifact: " + e.what());
  }
}

}  // namespace

Json artifact_header(const char* kind) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["kind"] = kind;
  return j;
}

Json graph_to_json(const DuplicationGraph& graph) {
  Json j = artifact_header("graph");
  j["snapshot_label"] = graph.snapshot_label();
  j["pairs_evaluated"] = graph.pairs_evaluated();
  j["sites"] = Json::array();
  for (const Site& s : graph.sites()) j["sites"].push_back({{"id", s.id}, {"domain", s.domain}});
  j["edges"] = Json::array();
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t k = i + 1; k < graph.size(); ++k) {
      if (graph.value(i, k) > 0.0) j["edges"].push_back({{"i", i}, {"j", k}, {"value", graph.value(i, k)}});
    }
  }
  return j;
}

DuplicationGraph graph_from_json(const Json& j) {
  return parse_or_throw("graph", [&] {
    std::vector<Site> sites;
    for (const auto& s : j.at("sites")) {
      Site site = make_site(s.at("domain").get<std::string>());
      site.id = s.at("id").get<std::string>();
      sites.push_back(std::move(site));
    }
    const std::size_t n = sites.size();
    SquareMatrix<double> valued(n, 0.0);
    for (const auto& e : j.at("edges")) {
      const auto a = e.at("i").get<std::size_t>();
      const auto b = e.at("j").get<std::size_t>();
      if (a >= n || b >= n || a == b) throw ValidationError("graph artifact edge outside site list");
      valued.set_symmetric(a, b, e.at("value").get<double>());
    }
    const std::size_t pairs = j.value("pairs_evaluated", n * (n - 1) / 2);
    return DuplicationGraph(j.at("snapshot_label").get<std::string>(), std::move(sites), std::move(valued), pairs);
  });
}

Json summary_to_json(const std::string& label, const GraphSummary& summary, std::size_t pairs_evaluated) {
  Json j = artifact_header("summary");
  j["snapshot_label"] = label;
  j["pairs_evaluated"] = pairs_evaluated;
  j["node_count"] = summary.node_count;
  j["edge_count"] = summary.edge_count;
  j["density"] = summary.density;
  j["clustering_coefficient"] = summary.clustering_coefficient;
  j["clustering_variant"] = kClusteringVariant;
  return j;
}

Json cut_to_json(const CutInfo& cut) {
  Json j;
  j["mode"] = cut_mode_name(cut.mode);
  j["k"] = cut.k;
  if (cut.modularity) j["modularity"] = *cut.modularity;
  return j;
}

Json partition_to_json(const Partition& partition) {
  Json j = artifact_header("partition");
  j["snapshot_label"] = partition.snapshot_label();
  j["cut"] = cut_to_json(partition.cut());
  j["clusters"] = Json::array();
  for (const Cluster& c : partition.clusters()) {
    j["clusters"].push_back({{"id", c.id}, {"color", c.color}, {"member_domains", partition.member_domains(c.id)}});
  }
  return j;
}

namespace {

Partition partition_from_json_impl(const Json& j, const std::vector<std::string>* order) {
  return parse_or_throw("partition", [&] {
    std::unordered_map<std::string, std::size_t> cluster_of;
    std::vector<std::string> listed;
    std::vector<std::pair<std::size_t, std::string>> colors;
    for (const auto& c : j.at("clusters")) {
      const auto id = c.at("id").get<std::size_t>();
      colors.emplace_back(id, c.at("color").get<std::string>());
      for (const auto& d : c.at("member_domains")) {
        const auto domain = d.get<std::string>();
        if (!cluster_of.emplace(domain, id).second) {
          throw ValidationError("partition lists '" + domain + "' in two clusters");
        }
        listed.push_back(domain);
      }
    }
    std::vector<std::string> domains = order ? *order : listed;
    if (domains.size() != cluster_of.size()) throw ValidationError("partition and graph cover different sites");
    std::vector<std::size_t> labels;
    labels.reserve(domains.size());
    for (const auto& d : domains) {
      auto it = cluster_of.find(d);
      if (it == cluster_of.end()) throw ValidationError("partition has no cluster for site '" + d + "'");
      labels.push_back(it->second);
    }
    Partition p = Partition::from_labels(j.at("snapshot_label").get<std::string>(), std::move(domains), labels);
    // Stored ids must already be canonical for this site order.
    std::unordered_map<std::size_t, std::size_t> stored_to_canonical;
    for (std::size_t i = 0; i < labels.size(); ++i) stored_to_canonical[labels[i]] = p.cluster_of(i);
    for (const auto& [id, color] : colors) {
      auto it = stored_to_canonical.find(id);
      if (it != stored_to_canonical.end()) p.clusters()[it->second].color = color;
    }
    const Json& cut = j.at("cut");
    CutInfo info{cut.at("mode").get<std::string>() == "k" ? CutMode::fixed_k : CutMode::modularity,
                 cut.value("k", p.cluster_count()), std::nullopt};
    if (cut.contains("modularity")) info.modularity = cut.at("modularity").get<double>();
    p.set_cut(info);
    return p;
  });
}

}  // namespace

Partition partition_from_json(const Json& j) { return partition_from_json_impl(j, nullptr); }

Partition partition_from_json(const Json& j, const std::vector<std::string>& domains) {
  return partition_from_json_impl(j, &domains);
}

Json dendrogram_to_json(const std::string& label, const Dendrogram& dendrogram) {
  Json j = artifact_header("dendrogram");
  j["snapshot_label"] = label;
  j["linkage"] = "average";
  j["leaf_count"] = dendrogram.leaf_count;
  j["leaf_order"] = dendrogram.leaf_order;
  j["merges"] = Json::array();
  for (const Merge& m : dendrogram.merges) {
    j["merges"].push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  }
  return j;
}

Json metrics_row_to_json(const CultureMetrics& m) {
  Json row;
  row["id"] = m.cluster_id;
  row["size"] = m.size;
  row["distance"] = m.distance;
  row["unreachable_count"] = m.unreachable_count;
  row["ei_index"] = m.ei_index;
  if (m.ei_standardized) row["ei_standardized"] = *m.ei_standardized;
  row["degenerate_flags"] = m.degenerate_flags;
  return row;
}

Json metrics_to_json(const std::string& label, const std::vector<CultureMetrics>& metrics) {
  Json j = artifact_header("metrics");
  j["snapshot_label"] = label;
  j["clusters"] = Json::array();
  for (const auto& m : metrics) j["clusters"].push_back(metrics_row_to_json(m));
  return j;
}

std::vector<CultureMetrics> metrics_from_json(const Json& j) {
  return parse_or_throw("metrics", [&] {
    std::vector<CultureMetrics> out;
    for (const auto& row : j.at("clusters")) {
      CultureMetrics m;
      m.cluster_id = row.at("id").get<std::size_t>();
      m.size = row.at("size").get<std::size_t>();
      m.distance = row.at("distance").get<double>();
      m.unreachable_count = row.at("unreachable_count").get<std::size_t>();
      m.ei_index = row.at("ei_index").get<double>();
      if (row.contains("ei_standardized")) m.ei_standardized = row.at("ei_standardized").get<double>();
      m.degenerate_flags = row.value("degenerate_flags", std::vector<std::string>{});
      out.push_back(std::move(m));
    }
    return out;
  });
}

Json layout_to_json(const Layout& layout) {
  Json j = artifact_header("layout");
  j["snapshot_label"] = layout.snapshot_label;
  j["params"] = {{"width", layout.params.width},
                 {"height", layout.params.height},
                 {"iterations", layout.params.iterations},
                 {"initial_temperature", layout.params.initial_temperature},
                 {"seed", layout.params.seed}};
  j["positions"] = Json::array();
  for (std::size_t i = 0; i < layout.positions.size(); ++i) {
    j["positions"].push_back({{"domain", layout.domains[i]}, {"x", layout.positions[i].x}, {"y", layout.positions[i].y}});
  }
  return j;
}

Layout layout_from_json(const Json& j) {
  return parse_or_throw("layout", [&] {
    Layout layout;
    layout.snapshot_label = j.at("snapshot_label").get<std::string>();
    const Json& p = j.at("params");
    layout.params.width = p.at("width").get<double>();
    layout.params.height = p.at("height").get<double>();
    layout.params.iterations = p.at("iterations").get<std::size_t>();
    layout.params.initial_temperature = p.at("initial_temperature").get<double>();
    layout.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& pos : j.at("positions")) {
      layout.domains.push_back(pos.at("domain").get<std::string>());
      layout.positions.push_back(Point{pos.at("x").get<double>(), pos.at("y").get<double>()});
    }
    return layout;
  });
}

Json match_to_json(const ClusterMatch& match) {
  Json j;
  j["threshold"] = match.threshold;
  j["pairs"] = Json::array();
  for (const auto& p : match.pairs) {
    j["pairs"].push_back({{"from_cluster", p.first}, {"to_cluster", p.second}, {"jaccard", p.jaccard}});
  }
  j["dissolved"] = match.dissolved;
  j["emerged"] = match.emerged;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DependencyError(path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace ethnomap
