#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ethnomap/duplication.hpp"
#include "ethnomap/measures.hpp"
#include "ethnomap/regions.hpp"

namespace ethnomap {

struct LayoutParams {
  double width = 1000.0;
  double height = 1000.0;
  std::size_t iterations = 500;
  double initial_temperature = 0.1;  // fraction of width
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const LayoutParams&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Layout {
  std::string snapshot_label;
  LayoutParams params;
  std::vector<std::string> domains;
  std::vector<Point> positions;
};

// Fruchterman-Reingold placement inside [0, width] x [0, height].
// Pairwise repulsion k^2/d, attraction d^2/k along edges with
// k = sqrt(area / n); each step is capped by a temperature that cools
// linearly to zero. Forces are accumulated in fixed node order.
Layout fr_layout(const BinaryGraph& graph, const LayoutParams& params, std::string snapshot_label = {});

// Network map: one dot per site colored by cluster, one line per tie, and
// a legend entry per cluster.
std::string render_map(const Layout& layout, const Partition& partition, const BinaryGraph& binary);

// Distance on x, E-I on y; circle area proportional to cluster size.
std::string render_scatter(std::span<const CultureMetrics> metrics, std::string_view title = {});
std::string render_scatter(std::span<const CultureMetrics> metrics, const Partition& partition);

struct TrajectorySeries {
  std::string name;
  std::string color;
  std::vector<double> values;  // one per snapshot
};

struct TrajectoryChart {
  std::string svg;
  bool empty = false;  // no homologous clusters; the document is a warning
};

TrajectoryChart render_trajectories(std::span<const std::string> snapshot_labels,
                                    std::span<const TrajectorySeries> series);

}  // namespace ethnomap
