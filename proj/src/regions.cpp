#include "ethnomap/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "ethnomap/error.hpp"

namespace ethnomap {
namespace {

// Rank of each site's domain in ascending order.
std::vector<std::size_t> domain_ranks(const std::vector<Site>& sites) {
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sites[a].domain < sites[b].domain; });
  std::vector<std::size_t> rank(sites.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

std::vector<std::size_t> canonical_order(const std::vector<Site>& sites) {
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sites[a].domain < sites[b].domain; });
  return order;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

SimilarityMatrix profile_similarity(const DuplicationGraph& graph) {
  const std::size_t n = graph.size();
  if (n < 3) throw ValidationError("profile similarity needs at least 3 sites");

  // Rows laid out in canonical domain order so the sums do not depend on
  // the input site order.
  const auto order = canonical_order(graph.sites());
  std::vector<std::size_t> position(n);
  for (std::size_t p = 0; p < n; ++p) position[order[p]] = p;
  SquareMatrix<double> rows(n);
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      rows(i, p) = order[p] == i ? 0.0 : graph.value(i, order[p]);
      row_sum[i] += rows(i, p);
    }
  }

  SimilarityMatrix out{graph.sites(), SquareMatrix<double>(n, 0.0)};
  const double m = static_cast<double>(n - 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.r(i, i) = 1.0;
    const double* x = rows.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* y = rows.row(j);
      const std::size_t pi = position[i];
      const std::size_t pj = position[j];
      const double mx = (row_sum[i] - x[pj]) / m;
      const double my = (row_sum[j] - y[pi]) / m;
      double sxx = 0.0, syy = 0.0, sxy = 0.0;
      bool x_constant = true, y_constant = true;
      double x0 = 0.0, y0 = 0.0;
      bool first = true;
      for (std::size_t p = 0; p < n; ++p) {
        if (p == pi || p == pj) continue;
        if (first) {
          x0 = x[p];
          y0 = y[p];
          first = false;
        } else {
          x_constant = x_constant && x[p] == x0;
          y_constant = y_constant && y[p] == y0;
        }
        const double dx = x[p] - mx;
        const double dy = y[p] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
      }
      double r = 0.0;
      if (!x_constant && !y_constant && sxx > 0.0 && syy > 0.0) {
        r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
      }
      out.r.set_symmetric(i, j, r);
    }
  }
  return out;
}

Partition Partition::from_labels(std::string snapshot_label, std::vector<std::string> domains,
                                 std::span<const std::size_t> labels) {
  if (labels.size() != domains.size()) throw ValidationError("partition label count does not match site count");
  Partition p;
  p.label_ = std::move(snapshot_label);
  p.domains_ = std::move(domains);
  p.assignment_.resize(labels.size());
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = renumber.try_emplace(labels[i], p.clusters_.size());
    if (inserted) p.clusters_.push_back(Cluster{it->second, palette_color(it->second), {}});
    p.assignment_[i] = it->second;
    p.clusters_[it->second].members.push_back(i);
  }
  p.cut_ = CutInfo{CutMode::fixed_k, p.clusters_.size(), std::nullopt};
  return p;
}

std::vector<std::string> Partition::member_domains(std::size_t cluster) const {
  std::vector<std::string> out;
  for (std::size_t i : clusters_.at(cluster).members) out.push_back(domains_[i]);
  return out;
}

std::vector<std::size_t> cut_dendrogram(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.leaf_count;
  if (k < 1 || k > n) throw ValidationError(fmt::format("cluster count {} outside [1, {}]", k, n));
  // Representative leaf of every dendrogram node.
  std::vector<std::size_t> representative(n + dendrogram.merges.size());
  std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(n), 0);
  DisjointSets sets(n);
  for (std::size_t s = 0; s < dendrogram.merges.size(); ++s) {
    const Merge& m = dendrogram.merges[s];
    representative[n + s] = representative[m.left];
    if (s < n - k) sets.unite(representative[m.left], representative[m.right]);
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = sets.find(i);
  return labels;
}

double modularity(const DuplicationGraph& graph, std::span<const std::size_t> assignment) {
  const std::size_t n = graph.size();
  if (assignment.size() != n) throw ValidationError("assignment size does not match graph");
  std::map<std::size_t, double> internal;
  std::map<std::size_t, double> strength;
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = graph.value(i, j);
      two_m += w;
      strength[assignment[i]] += w;
      if (assignment[i] == assignment[j]) internal[assignment[i]] += w;
    }
  }
  if (two_m <= 0.0) return 0.0;
  double q = 0.0;
  for (const auto& [c, s] : strength) {
    const double a = s / two_m;
    q += internal[c] / two_m - a * a;
  }
  return q;
}

Clustering cluster(const SimilarityMatrix& similarity, const CutSpec& cut, const DuplicationGraph& valued) {
  const std::size_t n = similarity.size();
  if (n == 0) throw ValidationError("cannot cluster an empty similarity matrix");
  if (valued.size() != n) throw ValidationError("similarity and valued graph sizes differ");
  if (cut.mode == CutMode::fixed_k && (cut.k < 1 || cut.k > n)) {
    throw ValidationError(fmt::format("cluster count {} outside [1, {}]", cut.k, n));
  }

  const auto rank = domain_ranks(similarity.sites);
  SquareMatrix<double> dissimilarity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dissimilarity(i, j) = 1.0 - similarity.r(i, j);
  }

  // Cluster state lives in slot = lowest original site index of the pair
  // merged into it; key breaks ties, node is the dendrogram id.
  std::vector<std::size_t> slots(n);
  std::iota(slots.begin(), slots.end(), 0);
  std::vector<std::size_t> key = rank;
  std::vector<std::size_t> node(n);
  std::iota(node.begin(), node.end(), 0);
  std::vector<std::size_t> size(n, 1);

  // Modularity bookkeeping: between-cluster weight (both directions) and
  // cluster strength.
  SquareMatrix<double> between(n, 0.0);
  std::vector<double> strength(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      between(i, j) = valued.value(i, j);
      strength[i] += valued.value(i, j);
    }
    two_m += strength[i];
  }
  std::vector<double> q_at(n + 1, 0.0);  // q_at[k]: modularity with k clusters
  if (two_m > 0.0) {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) q -= (strength[i] / two_m) * (strength[i] / two_m);
    q_at[n] = q;
  }

  Dendrogram dendrogram;
  dendrogram.leaf_count = n;
  double last_height = -std::numeric_limits<double>::infinity();
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0, best_b = 0;
    double best_d = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_key{n * 2, n * 2};
    bool found = false;
    for (std::size_t ia = 0; ia < slots.size(); ++ia) {
      const std::size_t a = slots[ia];
      for (std::size_t ib = ia + 1; ib < slots.size(); ++ib) {
        const std::size_t b = slots[ib];
        const double d = dissimilarity(a, b);
        const std::pair<std::size_t, std::size_t> k{std::min(key[a], key[b]), std::max(key[a], key[b])};
        if (!found || d < best_d || (d == best_d && k < best_key)) {
          found = true;
          best_d = d;
          best_key = k;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (key[best_a] > key[best_b]) std::swap(best_a, best_b);
    const std::size_t keep = std::min(best_a, best_b);
    const std::size_t drop = std::max(best_a, best_b);

    const double height = std::max(best_d, last_height);
    last_height = height;
    const std::size_t merged_size = size[best_a] + size[best_b];
    dendrogram.merges.push_back(Merge{node[best_a], node[best_b], height, merged_size});

    if (two_m > 0.0) {
      const std::size_t k = slots.size();
      q_at[k - 1] = q_at[k] + 2.0 * between(best_a, best_b) / two_m -
                    2.0 * (strength[best_a] / two_m) * (strength[best_b] / two_m);
    }

    const double wa = static_cast<double>(size[keep]);
    const double wb = static_cast<double>(size[drop]);
    for (std::size_t c : slots) {
      if (c == keep || c == drop) continue;
      const double d = (wa * dissimilarity(keep, c) + wb * dissimilarity(drop, c)) / (wa + wb);
      dissimilarity.set_symmetric(keep, c, d);
      const double w = between(keep, c) + between(drop, c);
      between.set_symmetric(keep, c, w);
    }
    strength[keep] += strength[drop];
    size[keep] = merged_size;
    node[keep] = n + step;
    key[keep] = n + step;
    slots.erase(std::find(slots.begin(), slots.end(), drop));
  }

  // Leaf order: depth-first, left child first.
  if (n == 1) {
    dendrogram.leaf_order = {0};
  } else {
    std::vector<std::size_t> stack{n + dendrogram.merges.size() - 1};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (v < n) {
        dendrogram.leaf_order.push_back(v);
      } else {
        const Merge& m = dendrogram.merges[v - n];
        stack.push_back(m.right);
        stack.push_back(m.left);
      }
    }
  }

  std::size_t k = cut.k;
  if (cut.mode == CutMode::modularity) {
    // Scan coarse to fine; only a strictly larger score moves the cut.
    k = 1;
    double best = q_at[1];
    for (std::size_t level = 2; level <= n; ++level) {
      if (q_at[level] > best + 1e-12) {
        best = q_at[level];
        k = level;
      }
    }
  }

  std::vector<std::string> domains;
  domains.reserve(n);
  for (const Site& s : similarity.sites) domains.push_back(s.domain);
  const auto labels = cut_dendrogram(dendrogram, k);
  Partition partition = Partition::from_labels(valued.snapshot_label(), std::move(domains), labels);
  CutInfo info{cut.mode, partition.cluster_count(), std::nullopt};
  if (cut.mode == CutMode::modularity) info.modularity = modularity(valued, partition.assignment());
  partition.set_cut(info);
  return Clustering{std::move(dendrogram), std::move(partition)};
}

ClusterMatch match_clusters(const Partition& earlier, const Partition& later, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError(fmt::format("match threshold must be in (0, 1], got {}", threshold));
  }
  std::unordered_map<std::string, std::size_t> later_cluster;
  for (std::size_t i = 0; i < later.domains().size(); ++i) later_cluster[later.domains()[i]] = later.cluster_of(i);

  struct Candidate {
    std::size_t first, second, shared;
    std::string smallest_shared;
  };
  std::map<std::pair<std::size_t, std::size_t>, Candidate> overlap;
  for (std::size_t i = 0; i < earlier.domains().size(); ++i) {
    const std::string& d = earlier.domains()[i];
    auto it = later_cluster.find(d);
    if (it == later_cluster.end()) continue;
    const std::pair<std::size_t, std::size_t> key{earlier.cluster_of(i), it->second};
    auto [c, inserted] = overlap.try_emplace(key, Candidate{key.first, key.second, 0, d});
    ++c->second.shared;
    if (d < c->second.smallest_shared) c->second.smallest_shared = d;
  }

  std::vector<std::pair<double, const Candidate*>> ranked;
  for (const auto& [k, c] : overlap) {
    const double a = static_cast<double>(earlier.clusters()[c.first].members.size());
    const double b = static_cast<double>(later.clusters()[c.second].members.size());
    const double s = static_cast<double>(c.shared);
    ranked.emplace_back(s / (a + b - s), &c);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second->smallest_shared < y.second->smallest_shared;
  });

  ClusterMatch match;
  match.threshold = threshold;
  std::vector<bool> used_first(earlier.cluster_count(), false);
  std::vector<bool> used_second(later.cluster_count(), false);
  for (const auto& [jaccard, c] : ranked) {
    if (jaccard < threshold) break;
    if (used_first[c->first] || used_second[c->second]) continue;
    used_first[c->first] = used_second[c->second] = true;
    match.pairs.push_back(ClusterPair{c->first, c->second, jaccard});
  }
  std::sort(match.pairs.begin(), match.pairs.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (std::size_t c = 0; c < used_first.size(); ++c) {
    if (!used_first[c]) match.dissolved.push_back(c);
  }
  for (std::size_t c = 0; c < used_second.size(); ++c) {
    if (!used_second[c]) match.emerged.push_back(c);
  }
  return match;
}

std::string palette_color(std::size_t index) {
  static constexpr const char* kPalette[] = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
      "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
      "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};
  constexpr std::size_t fixed = std::size(kPalette);
  if (index < fixed) return kPalette[index];
  // Golden-angle hue walk beyond the fixed palette.
  const double hue = std::fmod(static_cast<double>(index - fixed) * 137.50776405, 360.0);
  const double s = 0.55, l = 0.5;
  const double c = (1.0 - std::fabs(2.0 * l - 1.0)) * s;
  const double x = c * (1.0 - std::fabs(std::fmod(hue / 60.0, 2.0) - 1.0));
  const double m = l - c / 2.0;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue / 60.0)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  auto channel = [&](double v) { return static_cast<int>(std::lround((v + m) * 255.0)); };
  return fmt::format("#{:02x}{:02x}{:02x}", channel(r), channel(g), channel(b));
}

void assign_default_colors(Partition& partition) {
  for (Cluster& c : partition.clusters()) c.color = palette_color(c.id);
}

void inherit_colors(Partition& later, const Partition& earlier, const ClusterMatch& match) {
  std::set<std::string> used;
  for (const Cluster& c : earlier.clusters()) used.insert(c.color);
  std::vector<bool> assigned(later.cluster_count(), false);
  for (const ClusterPair& p : match.pairs) {
    later.clusters().at(p.second).color = earlier.clusters().at(p.first).color;
    assigned[p.second] = true;
  }
  std::size_t next = 0;
  for (Cluster& c : later.clusters()) {
    if (assigned[c.id]) continue;
    while (used.contains(palette_color(next))) ++next;
    c.color = palette_color(next);
    used.insert(c.color);
  }
}

namespace {

template <typename Label>
double ari_impl(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw ValidationError("partitions compared by ARI differ in size");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::map<Label, std::size_t> ra, rb;
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = ra.try_emplace(a[i], ra.size()).first->second;
    const auto y = rb.try_emplace(b[i], rb.size()).first->second;
    table[{x, y}] += 1.0;
  }
  auto choose2 = [](double v) { return v * (v - 1.0) / 2.0; };
  std::vector<double> row(ra.size(), 0.0), col(rb.size(), 0.0);
  double index = 0.0;
  for (const auto& [cell, count] : table) {
    index += choose2(count);
    row[cell.first] += count;
    col[cell.second] += count;
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (double v : row) sum_a += choose2(v);
  for (double v : col) sum_b += choose2(v);
  const double expected = sum_a * sum_b / choose2(static_cast<double>(n));
  const double maximum = (sum_a + sum_b) / 2.0;
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

}  // namespace

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  return ari_impl(a, b);
}

double adjusted_rand_index(std::span<const std::string> a, std::span<const std::string> b) {
  return ari_impl(a, b);
}

}  // namespace ethnomap
