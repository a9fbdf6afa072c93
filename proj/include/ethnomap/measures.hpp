#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ethnomap/duplication.hpp"
#include "ethnomap/regions.hpp"

namespace ethnomap {

struct DistanceScore {
  double value = 0.0;
  std::size_t unreachable_count = 0;
};

// Members are contracted into one supernode adjacent to the union of their
// outside neighbors; the score is the mean hop count from it to every
// non-member. Unreachable non-members count as (largest finite hop + 1).
DistanceScore cluster_distance(const BinaryGraph& graph, std::span<const std::size_t> members);

struct EiScore {
  double value = 0.0;
  double external = 0.0;
  double internal = 0.0;
  bool degenerate = false;  // no valued ties touch the cluster
};

// (E - I) / (E + I) over valued ties, each unordered dyad counted once. A
// singleton scores +1 even without ties; any other tie-less cluster scores 0.
EiScore ei_index(const DuplicationGraph& graph, std::span<const std::size_t> members);

struct Standardized {
  std::vector<double> z;
  bool zero_variance = false;
};

// Population z-scores. Throws StandardizationError for fewer than two values.
Standardized standardized_ei(std::span<const double> ei_values);

struct CultureMetrics {
  std::size_t cluster_id = 0;
  std::size_t size = 0;
  double distance = 0.0;
  std::size_t unreachable_count = 0;
  double ei_index = 0.0;
  std::optional<double> ei_standardized;
  std::vector<std::string> degenerate_flags;
};

namespace flags {
inline constexpr const char* kEiNoTies = "ei_no_ties";
inline constexpr const char* kUnreachable = "unreachable_nodes";
inline constexpr const char* kZeroVariance = "ei_zero_variance";
}  // namespace flags

// One row per cluster ordered by id. ei_standardized is filled against all
// clusters of the snapshot when there are at least two.
std::vector<CultureMetrics> snapshot_metrics(const DuplicationGraph& graph, const BinaryGraph& binary,
                                             const Partition& partition);

}  // namespace ethnomap
