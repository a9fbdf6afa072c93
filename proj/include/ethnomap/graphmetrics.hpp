#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ethnomap/duplication.hpp"
#include "ethnomap/matrix.hpp"

namespace ethnomap {

// Name of the clustering-coefficient variant, recorded in reports.
inline constexpr std::string_view kClusteringVariant = "average_local_watts_strogatz";

struct GraphSummary {
  double density = 0.0;
  double clustering_coefficient = 0.0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
};

// Present edges over possible unordered pairs. Requires n >= 2.
double density(const BinaryGraph& graph);

double local_clustering(const BinaryGraph& graph, std::size_t node);

// Mean of local clustering over all nodes; nodes with degree < 2 count as 0.
double clustering_coefficient(const BinaryGraph& graph);

GraphSummary summarize(const BinaryGraph& graph);

// Hop counts from `source`; unreachable nodes hold kUnreachable.
inline constexpr int kUnreachable = -1;
std::vector<int> bfs_distances(const BinaryGraph& graph, std::size_t source);

class GeodesicMatrix {
 public:
  explicit GeodesicMatrix(SquareMatrix<int> hops) : hops_(std::move(hops)) {}

  std::size_t size() const noexcept { return hops_.size(); }
  bool reachable(std::size_t i, std::size_t j) const { return hops_(i, j) != kUnreachable; }
  std::optional<int> distance(std::size_t i, std::size_t j) const {
    if (!reachable(i, j)) return std::nullopt;
    return hops_(i, j);
  }

 private:
  SquareMatrix<int> hops_;
};

GeodesicMatrix all_pairs_geodesics(const BinaryGraph& graph);

}  // namespace ethnomap
