#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ethnomap/duplication.hpp"
#include "ethnomap/error.hpp"
#include "ethnomap/graphmetrics.hpp"
#include "support.hpp"

using namespace ethnomap;
using ethnomap::testing::panel_from_audiences;
using ethnomap::testing::range;

TEST_CASE("observed duplication") {
  // 100 users: 20 visit both sites, 60 only the first, 10 only the second.
  auto p = panel_from_audiences(100, {range(0, 80), [] {
                                        auto v = range(0, 20);
                                        auto w = range(80, 90);
                                        v.insert(v.end(), w.begin(), w.end());
                                        return v;
                                      }()});
  CHECK(observed_duplication(p, 0, 1) == 0.20);
  CHECK(observed_duplication(p, 1, 0) == 0.20);
  CHECK_THROWS_AS(observed_duplication(p, 1, 1), InvalidPairError);

  auto disjoint = panel_from_audiences(10, {range(0, 5), range(5, 10)});
  CHECK(observed_duplication(disjoint, 0, 1) == 0.0);

  auto same = panel_from_audiences(10, {range(0, 3), range(0, 3)});
  CHECK(observed_duplication(same, 0, 1) == reach(same, 0));
}

TEST_CASE("expected duplication") {
  CHECK(expected_duplication(Share{80, 100}, Share{70, 100}) == 0.56);
  CHECK(std::abs(expected_duplication(0.80, 0.70) - 0.56) <= std::nextafter(0.56, 1.0) - 0.56);
  for (double x : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(expected_duplication(x, 0.0) == 0.0);
    CHECK(expected_duplication(1.0, x) == x);
  }
  CHECK_THROWS_AS(expected_duplication(1.2, 0.5), ValidationError);
  CHECK_THROWS_AS(expected_duplication(0.5, -0.1), ValidationError);
}

TEST_CASE("above-random residual") {
  CHECK(above_random(Share{20, 100}, Share{50, 100}, Share{20, 100}) == doctest::Approx(0.10).epsilon(1e-15));
  CHECK(above_random(0.20, 0.10) == doctest::Approx(0.10));

  auto disjoint = panel_from_audiences(10, {range(0, 5), range(5, 10)});
  CHECK(above_random(observed_share(disjoint, 0, 1), reach_share(disjoint, 0), reach_share(disjoint, 1)) < 0.0);
  auto g = build_valued_graph(disjoint);
  CHECK(g.value(0, 1) == 0.0);
  CHECK(g.pairs_evaluated() == 1);

  auto same = panel_from_audiences(10, {range(0, 3), range(0, 3)});
  CHECK(build_valued_graph(same).value(0, 1) == doctest::Approx(0.3 * 0.7));
}

TEST_CASE("valued graph invariants on a random panel") {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution visit(0.3);
  std::vector<std::vector<std::size_t>> audiences(12);
  for (std::size_t u = 0; u < 200; ++u)
    for (auto& a : audiences)
      if (visit(rng)) a.push_back(u);
  auto p = panel_from_audiences(200, audiences);
  auto g = build_valued_graph(p);
  CHECK(g.pairs_evaluated() == 66);

  std::vector<std::size_t> reversed(12);
  for (std::size_t i = 0; i < 12; ++i) reversed[i] = 11 - i;
  auto r = build_valued_graph(p.subset(reversed));

  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(g.value(i, i) == 0.0);
    for (std::size_t j = 0; j < 12; ++j) {
      if (i == j) continue;
      CHECK(g.value(i, j) == g.value(j, i));
      CHECK(g.value(i, j) >= 0.0);
      CHECK(g.value(i, j) == r.value(11 - i, 11 - j));
      const double obs = observed_duplication(p, i, j);
      CHECK(obs <= std::min(reach(p, i), reach(p, j)));
      CHECK(obs >= std::max(0.0, reach(p, i) + reach(p, j) - 1.0));
    }
  }
}

TEST_CASE("planted blocks have denser within-block duplication") {
  // Three blocks of four sites; each user is active in one block.
  std::mt19937_64 rng(11);
  std::bernoulli_distribution home(0.5), away(0.05);
  std::vector<std::vector<std::size_t>> audiences(12);
  for (std::size_t u = 0; u < 600; ++u) {
    for (std::size_t s = 0; s < 12; ++s) {
      if ((s / 4 == u % 3) ? home(rng) : away(rng)) audiences[s].push_back(u);
    }
  }
  auto g = build_valued_graph(panel_from_audiences(600, audiences));
  double within = 0, between = 0;
  int nw = 0, nb = 0;
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = i + 1; j < 12; ++j) {
      if (i / 4 == j / 4) {
        within += g.value(i, j);
        ++nw;
      } else {
        between += g.value(i, j);
        ++nb;
      }
    }
  }
  CHECK(within / nw > between / nb);

  auto b = dichotomize(g);
  std::size_t counted = 0;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i + 1; j < 12; ++j) counted += g.value(i, j) > 0.0;
  CHECK(b.edge_count() == counted);
  CHECK(density(b) == static_cast<double>(counted) / 66.0);
}

TEST_CASE("dichotomize thresholds at zero") {
  auto g = ethnomap::testing::valued_graph({{0, 0.1, 0.0}, {0.1, 0, 0.002}, {0.0, 0.002, 0}});
  auto b = dichotomize(g);
  CHECK(b.has_edge(0, 1));
  CHECK_FALSE(b.has_edge(0, 2));
  CHECK(b.has_edge(1, 2));
  CHECK(b.edge_count() == 2);

  auto zero = ethnomap::testing::valued_graph({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  CHECK(dichotomize(zero).edge_count() == 0);
}

TEST_CASE("graph construction validation") {
  CHECK_THROWS_AS(ethnomap::testing::valued_graph({{0, 0.1}, {0.2, 0}}), ValidationError);
  CHECK_THROWS_AS(ethnomap::testing::valued_graph({{0, -0.1}, {-0.1, 0}}), ValidationError);
  std::vector<std::pair<std::size_t, std::size_t>> loop{{1, 1}};
  CHECK_THROWS_AS(BinaryGraph::with_nodes(3, loop), ValidationError);
  std::vector<std::pair<std::size_t, std::size_t>> out{{0, 3}};
  CHECK_THROWS_AS(BinaryGraph::with_nodes(3, out), ValidationError);
}
