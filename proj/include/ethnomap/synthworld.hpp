#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ethnomap/panel.hpp"

namespace ethnomap {

struct RegionSpec {
  std::string name;
  double user_share = 0.0;
  std::size_t site_count = 0;
  std::string language;
  std::optional<double> p_home;  // overrides the world's p_home for this region
};

// Multiplier on p_cross for users of `a` visiting sites of `b` and vice versa.
struct LanguageOverlap {
  std::string a;
  std::string b;
  double multiplier = 1.0;
};

// Per-snapshot change to a region's users' home and cross visit
// probabilities, applied snapshot_index times. An empty region applies to
// every region.
struct Drift {
  std::string region;
  double p_home_delta = 0.0;
  double p_cross_delta = 0.0;
};

// Geo-linguistic world with planted regional cultures. Every user belongs
// to one region and carries two independent two-point activity
// multipliers in {1 - s, 1 + s}: one scales all regional visit
// probabilities, the other scales global-site visits. The shared
// multiplier is what makes co-visitation exceed chance.
struct WorldSpec {
  std::vector<RegionSpec> regions;
  std::size_t global_sites = 0;
  double p_home = 0.3;
  double p_cross = 0.02;
  double p_global = 0.3;
  double engagement_spread = 0.6;
  std::vector<LanguageOverlap> language_overlap;
  std::size_t users = 20000;
  std::uint64_t seed = 0;
  std::vector<Drift> drift;

  void validate() const;

  double home_probability(std::size_t region, std::size_t snapshot_index) const;
  // Probability that a user of `from` visits a site of `to` (from != to).
  double cross_probability(std::size_t from, std::size_t to, std::size_t snapshot_index) const;
};

inline constexpr const char* kGlobalRegion = "global";

struct GroundTruth {
  std::vector<std::string> domains;
  std::vector<std::string> regions;  // parallel to domains
  // +1 thickening (home share rising relative to cross), -1 thinning, 0 flat.
  std::vector<std::pair<std::string, int>> thickening;

  const std::string& region_of(std::string_view domain) const;
};

struct SyntheticSnapshot {
  PanelSnapshot panel;
  GroundTruth truth;
};

std::string snapshot_label_for(std::size_t snapshot_index);

SyntheticSnapshot generate_snapshot(const WorldSpec& spec, std::size_t snapshot_index);
std::vector<SyntheticSnapshot> generate_series(const WorldSpec& spec, std::size_t snapshots);

WorldSpec world_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json world_to_json(const WorldSpec& spec);

}  // namespace ethnomap
