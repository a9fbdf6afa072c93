#include "ethnomap/duplication.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "ethnomap/error.hpp"

namespace ethnomap {
namespace {

void require_fraction(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(fmt::format("{} {} outside [0, 1]", what, v));
}

void require_share(Share s) {
  if (s.total == 0 || s.count > s.total) throw ValidationError(fmt::format("share {}/{} invalid", s.count, s.total));
}

}  // namespace

Share reach_share(const PanelSnapshot& panel, std::size_t site) {
  return Share{panel.visitors(site), panel.user_count()};
}

Share observed_share(const PanelSnapshot& panel, std::size_t a, std::size_t b) {
  if (a == b) throw InvalidPairError("duplication of a site with itself is undefined");
  return Share{panel.audience(a).intersection_count(panel.audience(b)), panel.user_count()};
}

double observed_duplication(const PanelSnapshot& panel, std::size_t a, std::size_t b) {
  return observed_share(panel, a, b).value();
}

double expected_duplication(double reach_a, double reach_b) {
  require_fraction(reach_a, "reach");
  require_fraction(reach_b, "reach");
  return reach_a * reach_b;
}

double expected_duplication(Share reach_a, Share reach_b) {
  require_share(reach_a);
  require_share(reach_b);
  return static_cast<double>(reach_a.count * reach_b.count) / static_cast<double>(reach_a.total * reach_b.total);
}

double above_random(Share observed, Share reach_a, Share reach_b) {
  require_share(observed);
  require_share(reach_a);
  require_share(reach_b);
  if (observed.total != reach_a.total || observed.total != reach_b.total) {
    throw ValidationError("shares drawn from different panels");
  }
  const auto total = static_cast<std::int64_t>(observed.total);
  const std::int64_t numerator = static_cast<std::int64_t>(observed.count) * total -
                                 static_cast<std::int64_t>(reach_a.count * reach_b.count);
  return static_cast<double>(numerator) / static_cast<double>(total * total);
}

double above_random(double observed, double expected) {
  require_fraction(observed, "observed duplication");
  require_fraction(expected, "expected duplication");
  return observed - expected;
}

DuplicationGraph::DuplicationGraph(std::string snapshot_label, std::vector<Site> sites,
                                   SquareMatrix<double> valued, std::size_t pairs_evaluated)
    : label_(std::move(snapshot_label)),
      sites_(std::move(sites)),
      valued_(std::move(valued)),
      pairs_evaluated_(pairs_evaluated) {
  const std::size_t n = sites_.size();
  if (valued_.size() != n) throw ValidationError("valued matrix does not match site count");
  for (std::size_t i = 0; i < n; ++i) {
    valued_(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (valued_(i, j) != valued_(j, i)) {
        throw ValidationError(fmt::format("valued matrix asymmetric at ({}, {})", i, j));
      }
      if (!(valued_(i, j) >= 0.0)) {
        throw ValidationError(fmt::format("negative or NaN valued tie at ({}, {})", i, j));
      }
    }
  }
}

double DuplicationGraph::strength(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j != i) s += valued_(i, j);
  }
  return s;
}

DuplicationGraph build_valued_graph(const PanelSnapshot& panel) {
  const std::size_t n = panel.site_count();
  SquareMatrix<double> valued(n, 0.0);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double residual =
          above_random(observed_share(panel, i, j), reach_share(panel, i), reach_share(panel, j));
      valued.set_symmetric(i, j, std::max(0.0, residual));
      ++pairs;
    }
  }
  return DuplicationGraph(panel.label(), panel.sites(), std::move(valued), pairs);
}

BinaryGraph::BinaryGraph(std::vector<Site> sites, std::span<const std::pair<std::size_t, std::size_t>> edges)
    : sites_(std::move(sites)), adjacency_(sites_.size(), 0), neighbors_(sites_.size()) {
  const std::size_t n = sites_.size();
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw ValidationError(fmt::format("edge ({}, {}) outside graph of {} nodes", a, b, n));
    if (a == b) throw ValidationError("self-loops are not allowed");
    if (adjacency_(a, b)) continue;
    adjacency_.set_symmetric(a, b, 1);
    ++edge_count_;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency_(i, j)) neighbors_[i].push_back(j);
    }
  }
}

BinaryGraph BinaryGraph::with_nodes(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::vector<Site> sites;
  sites.reserve(n);
  for (std::size_t i = 0; i < n; ++i) sites.push_back(make_site("v" + std::to_string(i)));
  return BinaryGraph(std::move(sites), edges);
}

std::vector<std::pair<std::size_t, std::size_t>> BinaryGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j : neighbors_[i]) {
      if (j > i) out.emplace_back(i, j);
    }
  }
  return out;
}

BinaryGraph dichotomize(const DuplicationGraph& graph) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      if (graph.value(i, j) > 0.0) edges.emplace_back(i, j);
    }
  }
  return BinaryGraph(graph.sites(), edges);
}

}  // namespace ethnomap
