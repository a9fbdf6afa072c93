#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ethnomap/cartograph.hpp"
#include "ethnomap/duplication.hpp"
#include "ethnomap/graphmetrics.hpp"
#include "ethnomap/measures.hpp"
#include "ethnomap/regions.hpp"

namespace ethnomap {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Every artifact opens with {schema_version, tool_version, kind}.
Json artifact_header(const char* kind);

Json graph_to_json(const DuplicationGraph& graph);
DuplicationGraph graph_from_json(const Json& j);

Json summary_to_json(const std::string& label, const GraphSummary& summary, std::size_t pairs_evaluated);

Json cut_to_json(const CutInfo& cut);
Json partition_to_json(const Partition& partition);
// Site order follows the cluster listing.
Partition partition_from_json(const Json& j);
// Site order follows `domains`, which must cover the same sites.
Partition partition_from_json(const Json& j, const std::vector<std::string>& domains);

Json dendrogram_to_json(const std::string& label, const Dendrogram& dendrogram);

Json metrics_row_to_json(const CultureMetrics& m);
Json metrics_to_json(const std::string& label, const std::vector<CultureMetrics>& metrics);
std::vector<CultureMetrics> metrics_from_json(const Json& j);

Json layout_to_json(const Layout& layout);
Layout layout_from_json(const Json& j);

Json match_to_json(const ClusterMatch& match);

// Serialized form written to disk: two-space indent plus trailing newline.
std::string dump(const Json& j);

void write_text(const std::filesystem::path& path, const std::string& content);
// Throws DependencyError when the file is absent.
std::string read_text(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

}  // namespace ethnomap
