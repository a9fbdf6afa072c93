#pragma once

// Test fixtures and brute-force oracles. The oracles deliberately avoid the
// library's algorithms: Floyd-Warshall instead of BFS, triple enumeration
// instead of neighbor lists, pair counting instead of contingency tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <unistd.h>
#include <vector>

#include "ethnomap/duplication.hpp"
#include "ethnomap/panel.hpp"

namespace ethnomap::testing {

// Panel whose site s is visited by exactly the users in audiences[s].
inline PanelSnapshot panel_from_audiences(std::size_t users, const std::vector<std::vector<std::size_t>>& audiences,
                                          std::vector<std::string> domains = {}, std::string label = "test") {
  std::vector<Site> sites;
  std::vector<std::pair<std::size_t, std::size_t>> visits;
  for (std::size_t s = 0; s < audiences.size(); ++s) {
    sites.push_back(make_site(domains.empty() ? "site" + std::to_string(s) + ".example" : domains[s]));
    for (std::size_t u : audiences[s]) visits.emplace_back(u, s);
  }
  return PanelSnapshot(std::move(label), users, std::move(sites), visits);
}

inline std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

using AdjacencyMatrix = std::vector<std::vector<int>>;

inline AdjacencyMatrix random_adjacency(std::mt19937_64& rng, std::size_t n, double p) {
  AdjacencyMatrix a(n, std::vector<int>(n, 0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (u(rng) < p) a[i][j] = a[j][i] = 1;
    }
  }
  return a;
}

inline BinaryGraph to_graph(const AdjacencyMatrix& a) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i][j]) edges.emplace_back(i, j);
    }
  }
  return BinaryGraph::with_nodes(a.size(), edges);
}

inline DuplicationGraph valued_graph(const std::vector<std::vector<double>>& w, std::string label = "test") {
  const std::size_t n = w.size();
  SquareMatrix<double> m(n, 0.0);
  std::vector<Site> sites;
  for (std::size_t i = 0; i < n; ++i) {
    sites.push_back(make_site("v" + std::to_string(i)));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = w[i][j];
  }
  return DuplicationGraph(std::move(label), std::move(sites), std::move(m), n * (n - 1) / 2);
}

namespace oracle {

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> floyd_warshall(const AdjacencyMatrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline double density(const AdjacencyMatrix& a) {
  const double n = static_cast<double>(a.size());
  double ordered = 0.0;
  for (const auto& row : a)
    for (int v : row) ordered += v;
  return ordered / (n * (n - 1.0));
}

inline double clustering(const AdjacencyMatrix& a) {
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double pairs = 0.0, closed = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y || x == v || y == v || !a[v][x] || !a[v][y]) continue;
        pairs += 1.0;
        closed += a[x][y];
      }
    }
    total += pairs > 0.0 ? closed / pairs : 0.0;
  }
  return total / static_cast<double>(n);
}

// Builds the contracted graph explicitly (supernode = index 0) and runs
// Floyd-Warshall on it.
inline std::pair<double, std::size_t> cluster_distance(const AdjacencyMatrix& a, const std::vector<std::size_t>& members) {
  const std::size_t n = a.size();
  std::vector<bool> in(n, false);
  for (auto m : members) in[m] = true;
  std::vector<std::size_t> outside;
  for (std::size_t v = 0; v < n; ++v)
    if (!in[v]) outside.push_back(v);
  const std::size_t c = outside.size() + 1;
  AdjacencyMatrix contracted(c, std::vector<int>(c, 0));
  for (std::size_t x = 0; x < outside.size(); ++x) {
    for (std::size_t y = 0; y < outside.size(); ++y) contracted[x + 1][y + 1] = a[outside[x]][outside[y]];
    for (auto m : members) {
      if (a[m][outside[x]]) contracted[0][x + 1] = contracted[x + 1][0] = 1;
    }
  }
  const auto d = floyd_warshall(contracted);
  int farthest = 0;
  std::size_t unreachable = 0;
  for (std::size_t x = 1; x < c; ++x) {
    if (d[0][x] >= kInf) {
      ++unreachable;
    } else {
      farthest = std::max(farthest, d[0][x]);
    }
  }
  double total = 0.0;
  for (std::size_t x = 1; x < c; ++x) total += d[0][x] >= kInf ? farthest + 1 : d[0][x];
  return {total / static_cast<double>(c - 1), unreachable};
}

// Ordered-pair sums halved.
inline double ei_index(const std::vector<std::vector<double>>& w, const std::vector<std::size_t>& members) {
  const std::size_t n = w.size();
  std::vector<bool> in(n, false);
  for (auto m : members) in[m] = true;
  double e = 0.0, i_sum = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      if (in[x] && in[y]) {
        i_sum += w[x][y];
      } else if (in[x] || in[y]) {
        e += w[x][y];
      }
    }
  }
  e /= 2.0;
  i_sum /= 2.0;
  if (e + i_sum == 0.0) return members.size() == 1 ? 1.0 : 0.0;
  return (e - i_sum) / (e + i_sum);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - sx / n) * (y[i] - sy / n);
    vx += (x[i] - sx / n) * (x[i] - sx / n);
    vy += (y[i] - sy / n) * (y[i] - sy / n);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

// Hubert-Arabie ARI from agreement counts over all unordered pairs.
inline double ari(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  double both = 0, only_a = 0, only_b = 0, neither = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      if (sa && sb) both += 1;
      else if (sa) only_a += 1;
      else if (sb) only_b += 1;
      else neither += 1;
    }
  }
  const double denom = (both + only_a) * (only_a + neither) + (both + only_b) * (only_b + neither);
  if (denom == 0.0) return 1.0;
  return 2.0 * (both * neither - only_a * only_b) / denom;
}

}  // namespace oracle

class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ethnomap_" + name + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace ethnomap::testing
