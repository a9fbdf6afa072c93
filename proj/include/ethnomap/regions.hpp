#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ethnomap/duplication.hpp"
#include "ethnomap/matrix.hpp"

namespace ethnomap {

// Pearson correlations between sites' valued duplication profiles.
struct SimilarityMatrix {
  std::vector<Site> sites;
  SquareMatrix<double> r;

  std::size_t size() const noexcept { return sites.size(); }
};

// r_ij is computed over coordinates k not in {i, j}. A profile that is
// constant over those coordinates correlates 0 with everything.
SimilarityMatrix profile_similarity(const DuplicationGraph& graph);

enum class CutMode { fixed_k, modularity };

struct CutSpec {
  CutMode mode = CutMode::modularity;
  std::size_t k = 0;  // used when mode == fixed_k

  static CutSpec fixed(std::size_t k) { return {CutMode::fixed_k, k}; }
  static CutSpec automatic() { return {CutMode::modularity, 0}; }
};

// Node ids: leaves are site indices 0..n-1, merge s creates node n + s.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::size_t leaf_count = 0;
  std::vector<Merge> merges;
  std::vector<std::size_t> leaf_order;
};

struct Cluster {
  std::size_t id = 0;
  std::string color;
  std::vector<std::size_t> members;  // ascending site indices
};

struct CutInfo {
  CutMode mode = CutMode::modularity;
  std::size_t k = 0;
  std::optional<double> modularity;
};

// Disjoint covering assignment of sites to clusters. Cluster ids are
// 0..k-1 numbered by each cluster's lowest site index.
class Partition {
 public:
  Partition() = default;

  // `labels` may use any values; clusters are renumbered canonically.
  static Partition from_labels(std::string snapshot_label, std::vector<std::string> domains,
                               std::span<const std::size_t> labels);

  const std::string& snapshot_label() const noexcept { return label_; }
  const std::vector<std::string>& domains() const noexcept { return domains_; }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
  const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
  std::vector<Cluster>& clusters() noexcept { return clusters_; }
  std::size_t cluster_count() const noexcept { return clusters_.size(); }
  std::size_t cluster_of(std::size_t site) const { return assignment_.at(site); }
  std::vector<std::string> member_domains(std::size_t cluster) const;

  const CutInfo& cut() const noexcept { return cut_; }
  void set_cut(CutInfo cut) { cut_ = cut; }

 private:
  std::string label_;
  std::vector<std::string> domains_;
  std::vector<std::size_t> assignment_;
  std::vector<Cluster> clusters_;
  CutInfo cut_;
};

struct Clustering {
  Dendrogram dendrogram;
  Partition partition;
};

// Average-linkage agglomeration on 1 - r. Equal dissimilarities merge the
// pair whose lower domain-rank keys are lexicographically smallest. The
// modularity cut scores every level on `valued`.
Clustering cluster(const SimilarityMatrix& similarity, const CutSpec& cut, const DuplicationGraph& valued);

// Assignment after n - k merges.
std::vector<std::size_t> cut_dendrogram(const Dendrogram& dendrogram, std::size_t k);

// Weighted Newman modularity of an assignment on the valued graph. Zero
// when the graph carries no weight.
double modularity(const DuplicationGraph& graph, std::span<const std::size_t> assignment);

struct ClusterPair {
  std::size_t first = 0;   // cluster id in the earlier partition
  std::size_t second = 0;  // cluster id in the later partition
  double jaccard = 0.0;
};

struct ClusterMatch {
  double threshold = 0.3;
  std::vector<ClusterPair> pairs;      // ordered by first
  std::vector<std::size_t> dissolved;  // earlier clusters left unmatched
  std::vector<std::size_t> emerged;    // later clusters left unmatched
};

inline constexpr double kDefaultMatchThreshold = 0.3;

// Greedy maximum-Jaccard matching of member domain sets. Equal overlaps
// are ordered by the smallest shared domain, which makes the result
// symmetric in its arguments.
ClusterMatch match_clusters(const Partition& earlier, const Partition& later,
                            double threshold = kDefaultMatchThreshold);

std::string palette_color(std::size_t index);
void assign_default_colors(Partition& partition);
// Matched clusters take their predecessor's color; the rest take the
// first palette entries not already in use by either partition.
void inherit_colors(Partition& later, const Partition& earlier, const ClusterMatch& match);

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);
double adjusted_rand_index(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace ethnomap
