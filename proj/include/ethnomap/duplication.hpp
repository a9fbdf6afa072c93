#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ethnomap/matrix.hpp"
#include "ethnomap/panel.hpp"

namespace ethnomap {

// Audience count over panel size. Products of shares are formed in integer
// arithmetic and rounded once, so 80/100 x 70/100 gives exactly 0.56.
struct Share {
  std::uint64_t count = 0;
  std::uint64_t total = 1;

  double value() const { return static_cast<double>(count) / static_cast<double>(total); }
};

Share reach_share(const PanelSnapshot& panel, std::size_t site);
Share observed_share(const PanelSnapshot& panel, std::size_t a, std::size_t b);

// Fraction of the panel universe visiting both sites. Throws InvalidPairError for a == b.
double observed_duplication(const PanelSnapshot& panel, std::size_t a, std::size_t b);

// Duplication expected if the two audiences were independent: r_a * r_b.
double expected_duplication(double reach_a, double reach_b);
double expected_duplication(Share reach_a, Share reach_b);

// Residual observed - expected; positive means more shared audience than chance.
double above_random(double observed, double expected);
// observed - r_a * r_b over a common denominator; shares must share `total`.
double above_random(Share observed, Share reach_a, Share reach_b);

// Symmetric valued network of above-random duplication. Negative residuals
// are stored as zero (tie absent); the diagonal is zero and never read.
class DuplicationGraph {
 public:
  DuplicationGraph() = default;
  DuplicationGraph(std::string snapshot_label, std::vector<Site> sites, SquareMatrix<double> valued,
                   std::size_t pairs_evaluated);

  const std::string& snapshot_label() const noexcept { return label_; }
  const std::vector<Site>& sites() const noexcept { return sites_; }
  std::size_t size() const noexcept { return sites_.size(); }
  std::size_t pairs_evaluated() const noexcept { return pairs_evaluated_; }

  double value(std::size_t i, std::size_t j) const { return valued_(i, j); }
  const SquareMatrix<double>& matrix() const noexcept { return valued_; }

  // Sum of valued ties incident to i.
  double strength(std::size_t i) const;

 private:
  std::string label_;
  std::vector<Site> sites_;
  SquareMatrix<double> valued_;
  std::size_t pairs_evaluated_ = 0;
};

// Evaluates every unordered site pair exactly once.
DuplicationGraph build_valued_graph(const PanelSnapshot& panel);

// Undirected simple graph over a site list.
class BinaryGraph {
 public:
  BinaryGraph() = default;
  BinaryGraph(std::vector<Site> sites, std::span<const std::pair<std::size_t, std::size_t>> edges);

  // Placeholder sites named v0, v1, ...
  static BinaryGraph with_nodes(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

  const std::vector<Site>& sites() const noexcept { return sites_; }
  std::size_t size() const noexcept { return sites_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_(i, j) != 0; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
  std::size_t degree(std::size_t i) const { return neighbors_.at(i).size(); }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::vector<Site> sites_;
  SquareMatrix<unsigned char> adjacency_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::size_t edge_count_ = 0;
};

// Edge wherever the valued entry is strictly positive.
BinaryGraph dichotomize(const DuplicationGraph& graph);

}  // namespace ethnomap
