#include <doctest.h>

#include <random>
#include <vector>

#include "ethnomap/error.hpp"
#include "ethnomap/graphmetrics.hpp"
#include "support.hpp"

using namespace ethnomap;
namespace oracle = ethnomap::testing::oracle;
using ethnomap::testing::AdjacencyMatrix;
using ethnomap::testing::to_graph;

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

BinaryGraph complete(std::size_t n) {
  Edges e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return BinaryGraph::with_nodes(n, e);
}

}  // namespace

TEST_CASE("density") {
  CHECK(density(complete(5)) == 1.0);
  CHECK(density(BinaryGraph::with_nodes(5, Edges{})) == 0.0);
  CHECK_THROWS_AS(density(BinaryGraph::with_nodes(1, Edges{})), ValidationError);
}

TEST_CASE("clustering coefficient") {
  CHECK(clustering_coefficient(complete(3)) == 1.0);
  CHECK(clustering_coefficient(BinaryGraph::with_nodes(3, Edges{{0, 1}, {1, 2}})) == 0.0);
  CHECK_THROWS_AS(clustering_coefficient(BinaryGraph::with_nodes(1, Edges{})), ValidationError);

  // Two triangles joined by a bridge.
  auto g = BinaryGraph::with_nodes(6, Edges{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
  CHECK(clustering_coefficient(g) == doctest::Approx(0.7777777777777778).epsilon(1e-15));
  auto s = summarize(g);
  CHECK(s.density == doctest::Approx(0.4666666666666667).epsilon(1e-15));
  CHECK(s.edge_count == 7);
  CHECK(s.node_count == 6);
}

TEST_CASE("geodesics") {
  auto path = BinaryGraph::with_nodes(3, Edges{{0, 1}, {1, 2}});
  CHECK(all_pairs_geodesics(path).distance(0, 2) == 2);

  auto split = BinaryGraph::with_nodes(4, Edges{{0, 1}, {2, 3}});
  auto d = all_pairs_geodesics(split);
  CHECK_FALSE(d.reachable(0, 2));
  CHECK_FALSE(d.distance(1, 3).has_value());
  CHECK(d.distance(2, 3) == 1);
  CHECK(d.distance(2, 2) == 0);
}

TEST_CASE("metrics agree with brute-force oracles on random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const AdjacencyMatrix a = ethnomap::testing::random_adjacency(rng, n, 0.15 + 0.1 * (trial % 6));
    const auto g = to_graph(a);
    const auto fw = oracle::floyd_warshall(a);
    const auto geo = all_pairs_geodesics(g);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (fw[i][j] >= oracle::kInf) {
          CHECK_FALSE(geo.reachable(i, j));
        } else {
          CHECK(geo.distance(i, j) == fw[i][j]);
        }
      }
    }
    CHECK(density(g) == doctest::Approx(oracle::density(a)).epsilon(1e-12));
    CHECK(clustering_coefficient(g) == doctest::Approx(oracle::clustering(a)).epsilon(1e-12));
  }
}

TEST_CASE("random graph clustering tracks density") {
  std::mt19937_64 rng(5);
  double gap = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    auto g = to_graph(ethnomap::testing::random_adjacency(rng, 120, 0.3));
    gap += clustering_coefficient(g) - density(g);
  }
  CHECK(std::abs(gap / 10.0) < 0.05);
}
