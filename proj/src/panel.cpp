#include "ethnomap/panel.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "csv.hpp"
#include "ethnomap/error.hpp"

namespace ethnomap {

std::string site_id_for(std::string_view domain) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : domain) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

Site make_site(std::string domain) {
  Site s;
  s.id = site_id_for(domain);
  s.domain = std::move(domain);
  return s;
}

void Audience::add(std::size_t user) {
  std::uint64_t& w = words_.at(user / 64);
  const std::uint64_t bit = std::uint64_t{1} << (user % 64);
  if (!(w & bit)) {
    w |= bit;
    ++count_;
  }
}

bool Audience::contains(std::size_t user) const {
  if (user >= users_) return false;
  return (words_[user / 64] >> (user % 64)) & 1U;
}

std::size_t Audience::intersection_count(const Audience& other) const {
  const std::size_t words = std::min(words_.size(), other.words_.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(words_[i] & other.words_[i]);
  return total;
}

PanelSnapshot::PanelSnapshot(std::string label, std::size_t users, std::vector<Site> sites,
                             std::span<const std::pair<std::size_t, std::size_t>> visits)
    : label_(std::move(label)), users_(users), sites_(std::move(sites)) {
  if (users_ == 0) throw ValidationError("panel '" + label_ + "' has no users");
  if (sites_.size() < 2) throw ValidationError("panel '" + label_ + "' needs at least 2 sites");
  index_domains();
  audiences_.assign(sites_.size(), Audience(users_));
  for (const auto& [user, site] : visits) {
    if (user >= users_ || site >= sites_.size()) {
      throw ValidationError(fmt::format("visit ({}, {}) outside panel bounds", user, site));
    }
    audiences_[site].add(user);
  }
  for (const auto& a : audiences_) visit_count_ += a.count();
}

PanelSnapshot::PanelSnapshot(std::string label, std::size_t users, std::vector<Site> sites,
                             std::vector<Audience> audiences)
    : label_(std::move(label)), users_(users), sites_(std::move(sites)), audiences_(std::move(audiences)) {
  if (sites_.size() < 2) throw ValidationError("panel '" + label_ + "' needs at least 2 sites");
  index_domains();
  for (const auto& a : audiences_) visit_count_ += a.count();
}

void PanelSnapshot::index_domains() {
  by_domain_.clear();
  by_domain_.reserve(sites_.size());
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i].domain.empty()) throw ValidationError("site with empty domain");
    if (!by_domain_.emplace(sites_[i].domain, i).second) {
      throw ValidationError("duplicate site domain '" + sites_[i].domain + "'");
    }
  }
}

std::optional<std::size_t> PanelSnapshot::index_of(std::string_view domain) const {
  auto it = by_domain_.find(std::string(domain));
  if (it == by_domain_.end()) return std::nullopt;
  return it->second;
}

std::size_t PanelSnapshot::require_index(std::string_view domain) const {
  if (auto i = index_of(domain)) return *i;
  throw NotFoundError("site '" + std::string(domain) + "' not in panel '" + label_ + "'");
}

PanelSnapshot PanelSnapshot::subset(std::span<const std::size_t> site_indices) const {
  std::vector<Site> sites;
  std::vector<Audience> audiences;
  sites.reserve(site_indices.size());
  audiences.reserve(site_indices.size());
  for (std::size_t i : site_indices) {
    sites.push_back(site(i));
    audiences.push_back(audience(i));
  }
  return PanelSnapshot(label_, users_, std::move(sites), std::move(audiences));
}

PanelSnapshot PanelSnapshot::with_sites(std::vector<Site> sites) const {
  if (sites.size() != sites_.size()) throw ValidationError("site list size mismatch");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].domain != sites_[i].domain) throw ValidationError("site list domain mismatch");
  }
  return PanelSnapshot(label_, users_, std::move(sites), audiences_);
}

PanelSnapshot PanelSnapshot::with_label(std::string label) const {
  return PanelSnapshot(std::move(label), users_, sites_, audiences_);
}

PanelSnapshot read_panel_csv(std::istream& in, std::string label) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;

  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    if (!detail::split_csv_record(view, fields) || fields.size() != 2 ||
        detail::trim(fields[0]) != "user_id" || detail::trim(fields[1]) != "site_domain") {
      throw ParseError(line_no, "expected header 'user_id,site_domain'");
    }
    have_header = true;
    break;
  }
  if (!have_header) throw ValidationError("panel '" + label + "' is empty");

  std::unordered_map<std::string, std::size_t> users;
  std::unordered_map<std::string, std::size_t> domains;
  std::vector<std::pair<std::size_t, std::size_t>> visits;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    if (!detail::split_csv_record(view, fields)) throw ParseError(line_no, "unterminated quote");
    if (fields.size() != 2) {
      throw ParseError(line_no, fmt::format("expected 2 fields, found {}", fields.size()));
    }
    const std::string user(detail::trim(fields[0]));
    const std::string domain(detail::trim(fields[1]));
    if (user.empty() || domain.empty()) throw ParseError(line_no, "empty user_id or site_domain");
    const std::size_t u = users.try_emplace(user, users.size()).first->second;
    const std::size_t s = domains.try_emplace(domain, domains.size()).first->second;
    visits.emplace_back(u, s);
  }

  // Canonical site order: ascending domain.
  std::vector<std::string> names(domains.size());
  for (const auto& [d, i] : domains) names[i] = d;
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return names[a] < names[b]; });
  std::vector<std::size_t> rank(names.size());
  std::vector<Site> sites;
  sites.reserve(names.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = r;
    sites.push_back(make_site(names[order[r]]));
  }
  for (auto& v : visits) v.second = rank[v.second];

  return PanelSnapshot(std::move(label), users.size(), std::move(sites), visits);
}

PanelSnapshot attach_site_metadata(const PanelSnapshot& panel, std::istream& in) {
  std::vector<Site> sites = panel.sites();
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    if (!detail::split_csv_record(view, fields)) throw ParseError(line_no, "unterminated quote");
    if (header) {
      if (fields.size() != 3 || detail::trim(fields[0]) != "site_domain") {
        throw ParseError(line_no, "expected header 'site_domain,languages,region_tag'");
      }
      header = false;
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError(line_no, fmt::format("expected 3 fields, found {}", fields.size()));
    }
    auto idx = panel.index_of(detail::trim(fields[0]));
    if (!idx) continue;
    Site& s = sites[*idx];
    s.languages.clear();
    std::string_view langs = fields[1];
    while (!langs.empty()) {
      const auto cut = langs.find(';');
      const std::string_view tag = detail::trim(langs.substr(0, cut));
      if (!tag.empty()) s.languages.emplace_back(tag);
      if (cut == std::string_view::npos) break;
      langs.remove_prefix(cut + 1);
    }
    const std::string_view region = detail::trim(fields[2]);
    s.region_tag = region.empty() ? std::nullopt : std::optional<std::string>(region);
  }

  return panel.with_sites(std::move(sites));
}

PanelSnapshot load_panel(const std::filesystem::path& visits,
                         const std::optional<std::filesystem::path>& metadata, std::string label) {
  std::ifstream in(visits);
  if (!in) throw NotFoundError("cannot open panel file " + visits.string());
  PanelSnapshot panel = read_panel_csv(in, std::move(label));
  if (!metadata) return panel;
  std::ifstream meta(*metadata);
  if (!meta) throw NotFoundError("cannot open site metadata file " + metadata->string());
  return attach_site_metadata(panel, meta);
}

void write_panel_csv(const PanelSnapshot& panel, std::ostream& out) {
  out << "user_id,site_domain\n";
  for (std::size_t u = 0; u < panel.user_count(); ++u) {
    for (std::size_t s = 0; s < panel.site_count(); ++s) {
      if (panel.audience(s).contains(u)) {
        out << 'u' << u << ',' << detail::csv_escape(panel.site(s).domain) << '\n';
      }
    }
  }
}

void write_site_metadata_csv(const PanelSnapshot& panel, std::ostream& out) {
  out << "site_domain,languages,region_tag\n";
  for (const Site& s : panel.sites()) {
    std::string langs;
    for (std::size_t i = 0; i < s.languages.size(); ++i) {
      if (i) langs += ';';
      langs += s.languages[i];
    }
    out << detail::csv_escape(s.domain) << ',' << detail::csv_escape(langs) << ','
        << detail::csv_escape(s.region_tag.value_or("")) << '\n';
  }
}

double reach(const PanelSnapshot& panel, std::size_t site) {
  if (site >= panel.site_count()) throw NotFoundError(fmt::format("site index {} out of range", site));
  return static_cast<double>(panel.visitors(site)) / static_cast<double>(panel.user_count());
}

double reach(const PanelSnapshot& panel, std::string_view domain) {
  return reach(panel, panel.require_index(domain));
}

std::vector<double> reach_vector(const PanelSnapshot& panel) {
  std::vector<double> r(panel.site_count());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = reach(panel, i);
  return r;
}

std::vector<std::size_t> top_n_sites(const PanelSnapshot& panel, std::size_t n) {
  if (n < 2) throw ValidationError("top_n must be at least 2");
  std::vector<std::size_t> order(panel.site_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (panel.visitors(a) != panel.visitors(b)) return panel.visitors(a) > panel.visitors(b);
    return panel.site(a).domain < panel.site(b).domain;
  });
  if (order.size() > n) order.resize(n);
  return order;
}

}  // namespace ethnomap
