#include "ethnomap/synthworld.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "ethnomap/error.hpp"
#include "ethnomap/matrix.hpp"
#include "ethnomap/random.hpp"

namespace ethnomap {
namespace {

void require_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(fmt::format("{} = {} outside [0, 1]", what, p));
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

std::string region_domain(const std::string& region, std::size_t i) {
  return fmt::format("s{:03}.{}.example", i, region);
}

std::string global_domain(std::size_t i) { return fmt::format("g{:03}.global.example", i); }

}  // namespace

void WorldSpec::validate() const {
  if (regions.empty()) throw ValidationError("world needs at least one region");
  if (users == 0) throw ValidationError("world needs at least one user");
  std::set<std::string> names;
  double share = 0.0;
  std::size_t sites = global_sites;
  for (const RegionSpec& r : regions) {
    if (r.name.empty() || r.name == kGlobalRegion) throw ValidationError("invalid region name '" + r.name + "'");
    if (!names.insert(r.name).second) throw ValidationError("duplicate region '" + r.name + "'");
    require_probability(r.user_share, "user_share of " + r.name);
    share += r.user_share;
    sites += r.site_count;
    if (r.p_home) require_probability(*r.p_home, "p_home of " + r.name);
  }
  if (std::fabs(share - 1.0) > 1e-9) throw ValidationError(fmt::format("user shares sum to {}, not 1", share));
  if (sites < 2) throw ValidationError("world needs at least 2 sites");
  require_probability(p_home, "p_home");
  require_probability(p_cross, "p_cross");
  require_probability(p_global, "p_global");
  if (!(engagement_spread >= 0.0 && engagement_spread < 1.0)) {
    throw ValidationError("engagement_spread must lie in [0, 1)");
  }
  for (const LanguageOverlap& o : language_overlap) {
    if (!names.contains(o.a) || !names.contains(o.b)) {
      throw ValidationError("language_overlap names unknown region " + o.a + "/" + o.b);
    }
    if (!(o.multiplier >= 0.0)) throw ValidationError("language_overlap multiplier must be non-negative");
  }
  for (const Drift& d : drift) {
    if (!d.region.empty() && !names.contains(d.region)) throw ValidationError("drift names unknown region " + d.region);
  }
}

double WorldSpec::home_probability(std::size_t region, std::size_t snapshot_index) const {
  double p = regions.at(region).p_home.value_or(p_home);
  for (const Drift& d : drift) {
    if (d.region.empty() || d.region == regions.at(region).name) {
      p += d.p_home_delta * static_cast<double>(snapshot_index);
    }
  }
  return clamp01(p);
}

double WorldSpec::cross_probability(std::size_t from, std::size_t to, std::size_t snapshot_index) const {
  double p = p_cross;
  for (const Drift& d : drift) {
    if (d.region.empty() || d.region == regions.at(from).name) {
      p += d.p_cross_delta * static_cast<double>(snapshot_index);
    }
  }
  const std::string& a = regions.at(from).name;
  const std::string& b = regions.at(to).name;
  for (const LanguageOverlap& o : language_overlap) {
    if ((o.a == a && o.b == b) || (o.a == b && o.b == a)) p *= o.multiplier;
  }
  return clamp01(p);
}

const std::string& GroundTruth::region_of(std::string_view domain) const {
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (domains[i] == domain) return regions[i];
  }
  throw NotFoundError("site '" + std::string(domain) + "' not in ground truth");
}

std::string snapshot_label_for(std::size_t snapshot_index) { return fmt::format("t{}", snapshot_index); }

SyntheticSnapshot generate_snapshot(const WorldSpec& spec, std::size_t snapshot_index) {
  spec.validate();
  const std::size_t region_count = spec.regions.size();

  std::vector<Site> sites;
  std::vector<std::size_t> site_region;  // region_count marks a global site
  GroundTruth truth;
  for (std::size_t r = 0; r < region_count; ++r) {
    const RegionSpec& region = spec.regions[r];
    for (std::size_t i = 0; i < region.site_count; ++i) {
      Site s = make_site(region_domain(region.name, i));
      if (!region.language.empty()) s.languages = {region.language};
      s.region_tag = region.name;
      truth.domains.push_back(s.domain);
      truth.regions.push_back(region.name);
      sites.push_back(std::move(s));
      site_region.push_back(r);
    }
  }
  for (std::size_t i = 0; i < spec.global_sites; ++i) {
    Site s = make_site(global_domain(i));
    s.region_tag = kGlobalRegion;
    truth.domains.push_back(s.domain);
    truth.regions.push_back(kGlobalRegion);
    sites.push_back(std::move(s));
    site_region.push_back(region_count);
  }
  for (std::size_t r = 0; r < region_count; ++r) {
    double net = 0.0;
    for (const Drift& d : spec.drift) {
      if (d.region.empty() || d.region == spec.regions[r].name) net += d.p_home_delta - d.p_cross_delta;
    }
    truth.thickening.emplace_back(spec.regions[r].name, net > 0.0 ? 1 : (net < 0.0 ? -1 : 0));
  }

  // Visit probability of a user from region `from` for each site region.
  SquareMatrix<double> prob(region_count + 1, 0.0);
  for (std::size_t from = 0; from < region_count; ++from) {
    for (std::size_t to = 0; to < region_count; ++to) {
      prob(from, to) = from == to ? spec.home_probability(from, snapshot_index)
                                  : spec.cross_probability(from, to, snapshot_index);
    }
  }

  const double lo = 1.0 - spec.engagement_spread;
  const double hi = 1.0 + spec.engagement_spread;
  std::vector<std::pair<std::size_t, std::size_t>> visits;
  std::size_t observed = 0;  // users with at least one visit, as a panel file would list them
  for (std::size_t u = 0; u < spec.users; ++u) {
    // Traits persist across snapshots; visits are drawn per snapshot.
    RandomStream traits(spec.seed, {1, u});
    const double pick = traits.uniform();
    std::size_t region = region_count - 1;
    double cumulative = 0.0;
    for (std::size_t r = 0; r < region_count; ++r) {
      cumulative += spec.regions[r].user_share;
      if (pick < cumulative) {
        region = r;
        break;
      }
    }
    const double regional = traits.bernoulli(0.5) ? hi : lo;
    const double global = traits.bernoulli(0.5) ? hi : lo;

    RandomStream draws(spec.seed, {2, snapshot_index, u});
    bool active = false;
    for (std::size_t s = 0; s < sites.size(); ++s) {
      const std::size_t to = site_region[s];
      const double p = to == region_count ? clamp01(spec.p_global * global) : clamp01(prob(region, to) * regional);
      if (draws.bernoulli(p)) {
        visits.emplace_back(observed, s);
        active = true;
      }
    }
    observed += active;
  }
  if (observed == 0) throw ValidationError("world produced no visits");

  PanelSnapshot panel(snapshot_label_for(snapshot_index), observed, std::move(sites), visits);
  return SyntheticSnapshot{std::move(panel), std::move(truth)};
}

std::vector<SyntheticSnapshot> generate_series(const WorldSpec& spec, std::size_t snapshots) {
  if (snapshots < 1) throw ValidationError("series needs at least one snapshot");
  std::vector<SyntheticSnapshot> out;
  out.reserve(snapshots);
  for (std::size_t t = 0; t < snapshots; ++t) out.push_back(generate_snapshot(spec, t));
  return out;
}

WorldSpec world_from_json(const nlohmann::ordered_json& j) {
  WorldSpec w;
  try {
    for (const auto& r : j.at("regions")) {
      w.regions.push_back(RegionSpec{r.at("name").get<std::string>(), r.at("user_share").get<double>(),
                                     r.at("site_count").get<std::size_t>(), r.value("language", std::string{}),
                                     r.contains("p_home") ? std::optional<double>(r.at("p_home").get<double>())
                                                          : std::nullopt});
    }
    w.global_sites = j.value("global_sites", w.global_sites);
    w.p_home = j.value("p_home", w.p_home);
    w.p_cross = j.value("p_cross", w.p_cross);
    w.p_global = j.value("p_global", w.p_global);
    w.engagement_spread = j.value("engagement_spread", w.engagement_spread);
    w.users = j.value("users", w.users);
    w.seed = j.value("seed", w.seed);
    for (const auto& o : j.value("language_overlap", nlohmann::ordered_json::array())) {
      w.language_overlap.push_back(
          LanguageOverlap{o.at("a").get<std::string>(), o.at("b").get<std::string>(), o.at("multiplier").get<double>()});
    }
    for (const auto& d : j.value("drift", nlohmann::ordered_json::array())) {
      w.drift.push_back(Drift{d.value("region", std::string{}), d.value("p_home_delta", 0.0),
                              d.value("p_cross_delta", 0.0)});
    }
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ValidationError(std::string("invalid world spec: ") + e.what());
  }
  w.validate();
  return w;
}

nlohmann::ordered_json world_to_json(const WorldSpec& spec) {
  nlohmann::ordered_json j;
  j["regions"] = nlohmann::ordered_json::array();
  for (const RegionSpec& r : spec.regions) {
    nlohmann::ordered_json region = {
        {"name", r.name}, {"user_share", r.user_share}, {"site_count", r.site_count}, {"language", r.language}};
    if (r.p_home) region["p_home"] = *r.p_home;
    j["regions"].push_back(std::move(region));
  }
  j["global_sites"] = spec.global_sites;
  j["p_home"] = spec.p_home;
  j["p_cross"] = spec.p_cross;
  j["p_global"] = spec.p_global;
  j["engagement_spread"] = spec.engagement_spread;
  j["users"] = spec.users;
  j["seed"] = spec.seed;
  j["language_overlap"] = nlohmann::ordered_json::array();
  for (const auto& o : spec.language_overlap) {
    j["language_overlap"].push_back({{"a", o.a}, {"b", o.b}, {"multiplier", o.multiplier}});
  }
  j["drift"] = nlohmann::ordered_json::array();
  for (const auto& d : spec.drift) {
    j["drift"].push_back({{"region", d.region}, {"p_home_delta", d.p_home_delta}, {"p_cross_delta", d.p_cross_delta}});
  }
  return j;
}

}  // namespace ethnomap
