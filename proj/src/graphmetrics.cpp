#include "ethnomap/graphmetrics.hpp"

#include <deque>

#include "ethnomap/error.hpp"

namespace ethnomap {
namespace {

void require_pairs(const BinaryGraph& graph) {
  if (graph.size() < 2) throw ValidationError("graph metrics need at least 2 nodes");
}

}  // namespace

double density(const BinaryGraph& graph) {
  require_pairs(graph);
  const double n = static_cast<double>(graph.size());
  return static_cast<double>(graph.edge_count()) / (n * (n - 1.0) / 2.0);
}

double local_clustering(const BinaryGraph& graph, std::size_t node) {
  const auto& nb = graph.neighbors(node);
  const std::size_t k = nb.size();
  if (k < 2) return 0.0;
  std::size_t closed = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (graph.has_edge(nb[a], nb[b])) ++closed;
    }
  }
  return static_cast<double>(closed) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
}

double clustering_coefficient(const BinaryGraph& graph) {
  require_pairs(graph);
  double total = 0.0;
  for (std::size_t v = 0; v < graph.size(); ++v) total += local_clustering(graph, v);
  return total / static_cast<double>(graph.size());
}

GraphSummary summarize(const BinaryGraph& graph) {
  return GraphSummary{density(graph), clustering_coefficient(graph), graph.size(), graph.edge_count()};
}

std::vector<int> bfs_distances(const BinaryGraph& graph, std::size_t source) {
  std::vector<int> dist(graph.size(), kUnreachable);
  std::deque<std::size_t> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : graph.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

GeodesicMatrix all_pairs_geodesics(const BinaryGraph& graph) {
  const std::size_t n = graph.size();
  SquareMatrix<int> hops(n, kUnreachable);
  for (std::size_t s = 0; s < n; ++s) {
    const auto dist = bfs_distances(graph, s);
    for (std::size_t t = 0; t < n; ++t) hops(s, t) = dist[t];
  }
  return GeodesicMatrix(std::move(hops));
}

}  // namespace ethnomap
