#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ethnomap {

struct Site {
  std::string id;      // opaque, derived from the domain
  std::string domain;  // subdomains are distinct sites
  std::vector<std::string> languages;
  std::optional<std::string> region_tag;

  bool operator==(const Site&) const = default;
};

// Stable 64-bit FNV-1a digest of the domain rendered as 16 hex digits.
std::string site_id_for(std::string_view domain);

Site make_site(std::string domain);

// Set of panel users, stored as a bitset over user indices.
class Audience {
 public:
  Audience() = default;
  explicit Audience(std::size_t users) : users_(users), words_((users + 63) / 64, 0) {}

  void add(std::size_t user);
  bool contains(std::size_t user) const;
  std::size_t count() const noexcept { return count_; }
  std::size_t universe() const noexcept { return users_; }
  std::size_t intersection_count(const Audience& other) const;

 private:
  std::size_t users_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

// Binary user x site visitation for one period. Immutable once constructed.
class PanelSnapshot {
 public:
  // `visits` holds (user, site) index pairs; duplicates collapse to one visit.
  PanelSnapshot(std::string label, std::size_t users, std::vector<Site> sites,
                std::span<const std::pair<std::size_t, std::size_t>> visits);

  const std::string& label() const noexcept { return label_; }
  std::size_t user_count() const noexcept { return users_; }
  std::size_t site_count() const noexcept { return sites_.size(); }
  std::size_t visit_count() const noexcept { return visit_count_; }

  const std::vector<Site>& sites() const noexcept { return sites_; }
  const Site& site(std::size_t i) const { return sites_.at(i); }
  const Audience& audience(std::size_t i) const { return audiences_.at(i); }
  std::size_t visitors(std::size_t i) const { return audiences_.at(i).count(); }

  std::optional<std::size_t> index_of(std::string_view domain) const;
  // Throws NotFoundError for unknown domains.
  std::size_t require_index(std::string_view domain) const;

  // New snapshot restricted to the given sites, in the given order.
  PanelSnapshot subset(std::span<const std::size_t> site_indices) const;

  // Same audiences with replacement site records; domains must match.
  PanelSnapshot with_sites(std::vector<Site> sites) const;

  PanelSnapshot with_label(std::string label) const;

 private:
  PanelSnapshot(std::string label, std::size_t users, std::vector<Site> sites,
                std::vector<Audience> audiences);
  void index_domains();

  std::string label_;
  std::size_t users_ = 0;
  std::size_t visit_count_ = 0;
  std::vector<Site> sites_;
  std::vector<Audience> audiences_;
  std::unordered_map<std::string, std::size_t> by_domain_;
};

// Visitation CSV with header `user_id,site_domain`. Users are indexed in
// order of first appearance, sites are ordered by domain.
PanelSnapshot read_panel_csv(std::istream& in, std::string label);

// Optional metadata CSV `site_domain,languages,region_tag`; languages are
// `;`-separated. Rows for domains absent from the panel are ignored.
PanelSnapshot attach_site_metadata(const PanelSnapshot& panel, std::istream& in);

PanelSnapshot load_panel(const std::filesystem::path& visits,
                         const std::optional<std::filesystem::path>& metadata,
                         std::string label);

void write_panel_csv(const PanelSnapshot& panel, std::ostream& out);
void write_site_metadata_csv(const PanelSnapshot& panel, std::ostream& out);

double reach(const PanelSnapshot& panel, std::size_t site);
double reach(const PanelSnapshot& panel, std::string_view domain);
std::vector<double> reach_vector(const PanelSnapshot& panel);

// Indices of the n most visited sites, ties broken by ascending domain.
// Returns every site when n exceeds the site count.
std::vector<std::size_t> top_n_sites(const PanelSnapshot& panel, std::size_t n);

}  // namespace ethnomap
