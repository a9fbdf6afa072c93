#include <doctest.h>

#include <set>
#include <string>

#include "ethnomap/duplication.hpp"
#include "ethnomap/error.hpp"
#include "ethnomap/synthworld.hpp"

using namespace ethnomap;

namespace {

WorldSpec small_world(std::uint64_t seed) {
  WorldSpec w;
  w.regions = {{"north", 0.5, 6, "no"}, {"south", 0.5, 6, "so"}};
  w.global_sites = 2;
  w.users = 1500;
  w.seed = seed;
  return w;
}

bool same_visits(const PanelSnapshot& a, const PanelSnapshot& b) {
  if (a.site_count() != b.site_count() || a.user_count() != b.user_count()) return false;
  for (std::size_t s = 0; s < a.site_count(); ++s) {
    if (a.site(s).domain != b.site(s).domain) return false;
    for (std::size_t u = 0; u < a.user_count(); ++u) {
      if (a.audience(s).contains(u) != b.audience(s).contains(u)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  auto a = generate_snapshot(small_world(3), 0);
  auto b = generate_snapshot(small_world(3), 0);
  auto c = generate_snapshot(small_world(4), 0);
  CHECK(same_visits(a.panel, b.panel));
  CHECK_FALSE(same_visits(a.panel, c.panel));
}

TEST_CASE("ground truth covers every site") {
  auto snap = generate_snapshot(small_world(1), 0);
  CHECK(snap.panel.site_count() == 14);
  CHECK(snap.truth.domains.size() == 14);
  std::size_t global = 0;
  for (const auto& site : snap.panel.sites()) {
    const auto& region = snap.truth.region_of(site.domain);
    CHECK(site.region_tag == region);
    global += region == kGlobalRegion;
  }
  CHECK(global == 2);
  CHECK_THROWS_AS(snap.truth.region_of("nowhere.example"), NotFoundError);
}

TEST_CASE("invalid specs are rejected") {
  auto w = small_world(0);
  w.regions[0].user_share = 0.7;
  CHECK_THROWS_AS(w.validate(), ValidationError);
  w = small_world(0);
  w.p_cross = 1.5;
  CHECK_THROWS_AS(generate_snapshot(w, 0), ValidationError);
  w = small_world(0);
  w.regions[1].name = w.regions[0].name;
  CHECK_THROWS_AS(w.validate(), ValidationError);
  w = small_world(0);
  w.language_overlap = {{"north", "west", 0.5}};
  CHECK_THROWS_AS(w.validate(), ValidationError);
  w = small_world(0);
  w.regions[0].p_home = -0.1;
  CHECK_THROWS_AS(w.validate(), ValidationError);
}

TEST_CASE("series share one site universe") {
  auto w = small_world(2);
  w.drift = {{"north", 0.1, 0.0}};
  auto series = generate_series(w, 3);
  REQUIRE(series.size() == 3);
  std::set<std::string> labels;
  for (const auto& s : series) {
    labels.insert(s.panel.label());
    REQUIRE(s.panel.site_count() == series[0].panel.site_count());
    for (std::size_t i = 0; i < s.panel.site_count(); ++i) CHECK(s.panel.site(i) == series[0].panel.site(i));
  }
  CHECK(labels.size() == 3);
  CHECK(w.home_probability(0, 2) == doctest::Approx(0.5));
  CHECK(w.home_probability(1, 2) == doctest::Approx(0.3));
}

TEST_CASE("regions without cross traffic produce no cross-region ties") {
  auto w = small_world(6);
  w.global_sites = 0;
  w.p_cross = 0.0;
  w.p_global = 0.0;
  auto snap = generate_snapshot(w, 0);
  auto g = build_valued_graph(snap.panel);
  auto b = dichotomize(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (snap.truth.region_of(g.sites()[i].domain) != snap.truth.region_of(g.sites()[j].domain)) {
        CHECK_FALSE(b.has_edge(i, j));
      }
    }
  }
}

TEST_CASE("world spec JSON round trip") {
  auto w = small_world(9);
  w.regions[1].p_home = 0.2;
  w.language_overlap = {{"north", "south", 0.1}};
  w.drift = {{"south", 0.1, -0.01}};
  auto back = world_from_json(world_to_json(w));
  CHECK(world_to_json(back) == world_to_json(w));
  CHECK(back.regions[1].p_home == 0.2);
  CHECK_FALSE(back.regions[0].p_home.has_value());
}
