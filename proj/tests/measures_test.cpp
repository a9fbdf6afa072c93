#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "ethnomap/error.hpp"
#include "ethnomap/measures.hpp"
#include "ethnomap/synthworld.hpp"
#include "support.hpp"

using namespace ethnomap;
namespace oracle = ethnomap::testing::oracle;
using ethnomap::testing::valued_graph;

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;
using Members = std::vector<std::size_t>;

bool has_flag(const CultureMetrics& m, const char* flag) {
  return std::find(m.degenerate_flags.begin(), m.degenerate_flags.end(), flag) != m.degenerate_flags.end();
}

}  // namespace

TEST_CASE("cluster distance") {
  auto star = BinaryGraph::with_nodes(5, Edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK(cluster_distance(star, Members{0}).value == 1.0);

  auto path = BinaryGraph::with_nodes(5, Edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  auto d = cluster_distance(path, Members{0, 1});
  CHECK(d.value == 2.0);
  CHECK(d.unreachable_count == 0);

  // Component {0,1,2} holds the cluster; nodes 3 and 4 are isolated.
  auto split = BinaryGraph::with_nodes(5, Edges{{0, 1}, {1, 2}});
  auto u = cluster_distance(split, Members{0});
  CHECK(u.unreachable_count == 2);
  CHECK(u.value == doctest::Approx((1.0 + 2.0 + 3.0 + 3.0) / 4.0));

  CHECK_THROWS_AS(cluster_distance(path, Members{0, 1, 2, 3, 4}), UndefinedDistanceError);
  CHECK_THROWS_AS(cluster_distance(path, Members{}), ValidationError);
  CHECK_THROWS_AS(cluster_distance(path, Members{7}), ValidationError);
}

TEST_CASE("cluster distance matches a contracted-graph oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 3 + trial % 6;
    auto a = ethnomap::testing::random_adjacency(rng, n, 0.2 + 0.05 * (trial % 8));
    auto g = ethnomap::testing::to_graph(a);
    Members members;
    for (std::size_t v = 0; v < n; ++v)
      if ((rng() & 1u) != 0u) members.push_back(v);
    if (members.empty() || members.size() == n) continue;
    auto [value, unreachable] = oracle::cluster_distance(a, members);
    auto got = cluster_distance(g, members);
    CHECK(got.value == doctest::Approx(value).epsilon(1e-12));
    CHECK(got.unreachable_count == unreachable);
  }
}

TEST_CASE("E-I index extremes") {
  // Site 0 tied to everyone; sites 1 and 2 tied only to each other and 0.
  auto g = valued_graph({{0, 0.2, 0.1, 0.3}, {0.2, 0, 0.4, 0}, {0.1, 0.4, 0, 0}, {0.3, 0, 0, 0}});
  CHECK(ei_index(g, Members{0}).value == 1.0);
  CHECK(ei_index(g, Members{0, 1, 2, 3}).value == -1.0);

  auto balanced = valued_graph({{0, 0.5, 0.25}, {0.5, 0, 0.25}, {0.25, 0.25, 0}});
  auto e = ei_index(balanced, Members{0, 1});
  CHECK(e.value == 0.0);
  CHECK(e.external == 0.5);
  CHECK(e.internal == 0.5);

  auto empty = valued_graph(std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
  CHECK(ei_index(empty, Members{1}).value == 1.0);
  CHECK(ei_index(empty, Members{1}).degenerate);
  CHECK(ei_index(empty, Members{0, 1}).value == 0.0);
}

TEST_CASE("E-I index matches the ordered-pair oracle and is scale invariant") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 6;
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0)), scaled = w;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = u(rng) < 0.5 ? 0.0 : u(rng);
        w[i][j] = w[j][i] = v;
        scaled[i][j] = scaled[j][i] = 8.0 * v;
      }
    }
    Members members;
    for (std::size_t v = 0; v < n; ++v)
      if ((rng() & 1u) != 0u) members.push_back(v);
    if (members.empty()) members.push_back(0);
    const double got = ei_index(valued_graph(w), members).value;
    CHECK(got == doctest::Approx(oracle::ei_index(w, members)).epsilon(1e-12));
    CHECK(ei_index(valued_graph(scaled), members).value == doctest::Approx(got).epsilon(1e-12));
    CHECK(got >= -1.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("turning an external tie internal lowers E-I") {
  auto before = valued_graph({{0, 0.3, 0.2, 0}, {0.3, 0, 0, 0.4}, {0.2, 0, 0, 0.1}, {0, 0.4, 0.1, 0}});
  auto after = ei_index(before, Members{0, 1, 2});
  CHECK(after.value < ei_index(before, Members{0, 1}).value);
}

TEST_CASE("standardized E-I") {
  std::vector<double> two{0.2, 0.6};
  auto z = standardized_ei(two);
  CHECK(z.z[0] == doctest::Approx(-1.0));
  CHECK(z.z[1] == doctest::Approx(1.0));
  CHECK_FALSE(z.zero_variance);

  std::vector<double> flat{0.4, 0.4, 0.4};
  auto f = standardized_ei(flat);
  CHECK(f.zero_variance);
  CHECK(f.z == std::vector<double>{0.0, 0.0, 0.0});

  std::vector<double> single{0.1};
  CHECK_THROWS_AS(standardized_ei(single), StandardizationError);
}

TEST_CASE("snapshot metrics") {
  auto w = std::vector<std::vector<double>>{{0, 0.3, 0.01, 0, 0},
                                            {0.3, 0, 0, 0, 0},
                                            {0.01, 0, 0, 0.2, 0.2},
                                            {0, 0, 0.2, 0, 0.2},
                                            {0, 0, 0.2, 0.2, 0}};
  auto g = valued_graph(w);
  auto b = dichotomize(g);
  std::vector<std::string> domains;
  for (const auto& s : g.sites()) domains.push_back(s.domain);

  std::vector<std::size_t> labels{0, 0, 1, 1, 1};
  auto two = snapshot_metrics(g, b, Partition::from_labels("t", domains, labels));
  REQUIRE(two.size() == 2);
  CHECK(two[0].size == 2);
  CHECK(two[1].size == 3);
  CHECK(two[0].ei_standardized.has_value());
  CHECK(two[0].ei_index > two[1].ei_index);  // the pair leans outward more than the triangle

  std::vector<std::size_t> singletons{0, 1, 2, 3, 4};
  for (const auto& m : snapshot_metrics(g, b, Partition::from_labels("t", domains, singletons))) {
    CHECK(m.ei_index == 1.0);
  }

  std::vector<std::size_t> one{0, 0, 0, 0, 0};
  CHECK_THROWS_AS(snapshot_metrics(g, b, Partition::from_labels("t", domains, one)), UndefinedDistanceError);

  // An isolated site forms a tie-less singleton.
  auto iso = valued_graph({{0, 0.2, 0.2, 0}, {0.2, 0, 0.2, 0}, {0.2, 0.2, 0, 0}, {0, 0, 0, 0}});
  std::vector<std::string> iso_domains;
  for (const auto& s : iso.sites()) iso_domains.push_back(s.domain);
  std::vector<std::size_t> iso_labels{0, 0, 0, 1};
  auto rows = snapshot_metrics(iso, dichotomize(iso), Partition::from_labels("t", iso_domains, iso_labels));
  CHECK(has_flag(rows[1], flags::kEiNoTies));
  CHECK(has_flag(rows[0], flags::kUnreachable));
  CHECK(rows[0].unreachable_count == 1);
}

TEST_CASE("the least connected planted region is the most distant") {
  WorldSpec spec;
  for (const char* name : {"a", "b", "c", "d"}) spec.regions.push_back({name, 0.25, 30, name});
  spec.global_sites = 10;
  spec.p_cross = 0.05;
  spec.language_overlap = {{"a", "b", 0.1}, {"a", "c", 0.1}, {"a", "d", 0.1}};
  spec.seed = 5;
  auto snap = generate_snapshot(spec, 0);
  auto g = build_valued_graph(snap.panel);
  auto b = dichotomize(g);
  std::vector<std::string> domains;
  std::vector<std::size_t> labels;
  for (const auto& s : g.sites()) {
    domains.push_back(s.domain);
    const auto& region = snap.truth.region_of(s.domain);
    labels.push_back(region == kGlobalRegion ? 4 : static_cast<std::size_t>(region[0] - 'a'));
  }
  auto rows = snapshot_metrics(g, b, Partition::from_labels("t", domains, labels));
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[0].distance > rows[i].distance);
}
