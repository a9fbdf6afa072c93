#include "ethnomap/measures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "ethnomap/error.hpp"

namespace ethnomap {
namespace {

std::vector<bool> membership(std::size_t n, std::span<const std::size_t> members) {
  if (members.empty()) throw ValidationError("cluster has no members");
  std::vector<bool> in(n, false);
  for (std::size_t m : members) {
    if (m >= n) throw ValidationError(fmt::format("cluster member {} outside graph of {} nodes", m, n));
    in[m] = true;
  }
  return in;
}

}  // namespace

DistanceScore cluster_distance(const BinaryGraph& graph, std::span<const std::size_t> members) {
  const std::size_t n = graph.size();
  const auto in = membership(n, members);
  const auto member_count = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
  if (member_count == n) throw UndefinedDistanceError("cluster spans every node; distance is undefined");

  std::vector<int> dist(n, -1);
  std::deque<std::size_t> queue;
  for (std::size_t m : members) {
    for (std::size_t w : graph.neighbors(m)) {
      if (!in[w] && dist[w] < 0) {
        dist[w] = 1;
        queue.push_back(w);
      }
    }
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : graph.neighbors(v)) {
      if (!in[w] && dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }

  int farthest = 0;
  std::size_t unreachable = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (in[v]) continue;
    if (dist[v] < 0) {
      ++unreachable;
    } else {
      farthest = std::max(farthest, dist[v]);
    }
  }
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!in[v]) total += dist[v] < 0 ? farthest + 1 : dist[v];
  }
  return DistanceScore{total / static_cast<double>(n - member_count), unreachable};
}

EiScore ei_index(const DuplicationGraph& graph, std::span<const std::size_t> members) {
  const std::size_t n = graph.size();
  const auto in = membership(n, members);
  EiScore score;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = graph.value(i, j);
      if (in[i] && in[j]) {
        score.internal += w;
      } else if (in[i] != in[j]) {
        score.external += w;
      }
    }
  }
  const double total = score.external + score.internal;
  if (total > 0.0) {
    score.value = (score.external - score.internal) / total;
  } else {
    score.degenerate = true;
    score.value = std::count(in.begin(), in.end(), true) == 1 ? 1.0 : 0.0;
  }
  return score;
}

Standardized standardized_ei(std::span<const double> ei_values) {
  if (ei_values.size() < 2) throw StandardizationError("standardization needs at least two clusters");
  const double count = static_cast<double>(ei_values.size());
  double mean = 0.0;
  for (double v : ei_values) mean += v;
  mean /= count;
  double var = 0.0;
  for (double v : ei_values) var += (v - mean) * (v - mean);
  var /= count;
  Standardized out;
  out.z.assign(ei_values.size(), 0.0);
  // Identical inputs can leave rounding residue in the mean; treat them as flat.
  const auto [lo, hi] = std::minmax_element(ei_values.begin(), ei_values.end());
  if (*lo == *hi || var <= 0.0) {
    out.zero_variance = true;
    return out;
  }
  const double sd = std::sqrt(var);
  for (std::size_t i = 0; i < ei_values.size(); ++i) out.z[i] = (ei_values[i] - mean) / sd;
  return out;
}

std::vector<CultureMetrics> snapshot_metrics(const DuplicationGraph& graph, const BinaryGraph& binary,
                                             const Partition& partition) {
  const std::size_t n = graph.size();
  if (binary.size() != n || partition.domains().size() != n) {
    throw ValidationError("graph, binary graph and partition cover different site counts");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (graph.sites()[i].domain != partition.domains()[i] || binary.sites()[i].domain != graph.sites()[i].domain) {
      throw ValidationError("site universes differ at index " + std::to_string(i));
    }
  }

  std::vector<CultureMetrics> rows;
  rows.reserve(partition.cluster_count());
  for (const Cluster& c : partition.clusters()) {
    CultureMetrics m;
    m.cluster_id = c.id;
    m.size = c.members.size();
    const DistanceScore d = cluster_distance(binary, c.members);
    m.distance = d.value;
    m.unreachable_count = d.unreachable_count;
    if (d.unreachable_count > 0) m.degenerate_flags.emplace_back(flags::kUnreachable);
    const EiScore ei = ei_index(graph, c.members);
    m.ei_index = ei.value;
    if (ei.degenerate) m.degenerate_flags.emplace_back(flags::kEiNoTies);
    rows.push_back(std::move(m));
  }

  if (rows.size() >= 2) {
    std::vector<double> values;
    for (const auto& r : rows) values.push_back(r.ei_index);
    const Standardized z = standardized_ei(values);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].ei_standardized = z.z[i];
      if (z.zero_variance) rows[i].degenerate_flags.emplace_back(flags::kZeroVariance);
    }
  }
  return rows;
}

}  // namespace ethnomap
