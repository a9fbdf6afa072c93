#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "ethnomap/cartograph.hpp"
#include "ethnomap/error.hpp"

namespace ethnomap {
namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void open_svg(std::string& out, double width, double height, std::string_view title) {
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  fmt::format_to(std::back_inserter(out),
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
                 width, height);
  fmt::format_to(std::back_inserter(out), "<title>{}</title>\n", xml_escape(title));
  fmt::format_to(std::back_inserter(out),
                 "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", width,
                 height);
}

// Nice-ish tick values across [lo, hi].
std::vector<double> ticks(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i <= count; ++i) out.push_back(lo + (hi - lo) * i / count);
  return out;
}

}  // namespace

std::string render_map(const Layout& layout, const Partition& partition, const BinaryGraph& binary) {
  const std::size_t n = layout.positions.size();
  if (partition.domains().size() != n || binary.size() != n || layout.domains.size() != n) {
    throw ValidationError("layout, partition and graph cover different site counts");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (layout.domains[i] != partition.domains()[i] || layout.domains[i] != binary.sites()[i].domain) {
      throw ValidationError("site universes differ at index " + std::to_string(i));
    }
  }

  constexpr double margin = 20.0;
  constexpr double legend_width = 180.0;
  const double frame_w = layout.params.width;
  const double frame_h = layout.params.height;
  const double width = frame_w + 2 * margin + legend_width;
  const double height = frame_h + 2 * margin;
  auto px = [&](const Point& p) { return Point{margin + p.x, margin + (frame_h - p.y)}; };

  std::string out;
  open_svg(out, width, height, "Ethnological map " + layout.snapshot_label);

  out += "<g class=\"edges\" stroke=\"#9a9a9a\" stroke-width=\"0.4\" stroke-opacity=\"0.35\">\n";
  for (const auto& [i, j] : binary.edges()) {
    const Point a = px(layout.positions[i]);
    const Point b = px(layout.positions[j]);
    fmt::format_to(std::back_inserter(out), "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", a.x,
                   a.y, b.x, b.y);
  }
  out += "</g>\n<g class=\"nodes\" stroke=\"#333333\" stroke-width=\"0.3\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = px(layout.positions[i]);
    const Cluster& c = partition.clusters().at(partition.cluster_of(i));
    fmt::format_to(std::back_inserter(out),
                   "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\" data-domain=\"{}\" data-cluster=\"{}\"/>\n",
                   p.x, p.y, c.color, xml_escape(layout.domains[i]), c.id);
  }
  out += "</g>\n<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  double y = margin + 10.0;
  for (const Cluster& c : partition.clusters()) {
    fmt::format_to(std::back_inserter(out),
                   "<g class=\"legend-entry\" data-cluster=\"{0}\"><rect x=\"{1:.2f}\" y=\"{2:.2f}\" width=\"12\" "
                   "height=\"12\" fill=\"{3}\"/><text x=\"{4:.2f}\" y=\"{5:.2f}\">cluster {0} ({6} sites)</text></g>\n",
                   c.id, frame_w + 2 * margin, y, c.color, frame_w + 2 * margin + 18.0, y + 10.0, c.members.size());
    y += 18.0;
  }
  out += "</g>\n</svg>\n";
  return out;
}

namespace {

template <typename ColorOf>
std::string scatter_document(std::span<const CultureMetrics> metrics, std::string_view title, ColorOf color_of) {
  constexpr double width = 640.0, height = 480.0;
  constexpr double left = 70.0, right = 30.0, top = 40.0, bottom = 60.0;
  constexpr double max_radius = 36.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double x_lo = 1.0, x_hi = 2.0;
  std::size_t max_size = 1;
  if (!metrics.empty()) {
    x_lo = x_hi = metrics.front().distance;
    for (const auto& m : metrics) {
      x_lo = std::min(x_lo, m.distance);
      x_hi = std::max(x_hi, m.distance);
      max_size = std::max(max_size, m.size);
    }
    const double pad = std::max(0.1, (x_hi - x_lo) * 0.15);
    x_lo -= pad;
    x_hi += pad;
  }
  constexpr double y_lo = -1.1, y_hi = 1.1;
  auto sx = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double v) { return top + (y_hi - v) / (y_hi - y_lo) * plot_h; };

  std::string out;
  open_svg(out, width, height, title.empty() ? "Distance and thickness" : title);
  out += "<g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\">\n";
  fmt::format_to(std::back_inserter(out), "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>\n", left,
                 top + plot_h, left + plot_w);
  fmt::format_to(std::back_inserter(out), "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n", left, top,
                 top + plot_h);
  fmt::format_to(std::back_inserter(out),
                 "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke-dasharray=\"4 3\" "
                 "stroke-opacity=\"0.5\"/>\n",
                 left, sy(0.0), left + plot_w);
  out += "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  for (double t : ticks(x_lo, x_hi, 5)) {
    fmt::format_to(std::back_inserter(out), "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.2f}</text>\n",
                   sx(t), top + plot_h + 16.0, t);
  }
  for (double t : ticks(-1.0, 1.0, 4)) {
    fmt::format_to(std::back_inserter(out), "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n",
                   left - 6.0, sy(t) + 4.0, t);
  }
  out += "</g>\n<g class=\"labels\" font-family=\"sans-serif\" font-size=\"13\">\n";
  fmt::format_to(std::back_inserter(out),
                 "<text class=\"x-label\" x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">distance</text>\n",
                 left + plot_w / 2.0, height - 16.0);
  fmt::format_to(std::back_inserter(out),
                 "<text class=\"y-label\" x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                 "transform=\"rotate(-90 18 {0:.2f})\">thickness (E-I index)</text>\n",
                 top + plot_h / 2.0);
  out += "</g>\n<g class=\"clusters\" fill-opacity=\"0.6\" stroke=\"#333333\" stroke-width=\"0.8\">\n";
  for (const auto& m : metrics) {
    const double r = max_radius * std::sqrt(static_cast<double>(m.size) / static_cast<double>(max_size));
    fmt::format_to(std::back_inserter(out),
                   "<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.4f}\" fill=\"{}\" data-cluster=\"{}\" "
                   "data-distance=\"{}\" data-ei=\"{}\" data-size=\"{}\"/>\n",
                   sx(m.distance), sy(m.ei_index), r, color_of(m.cluster_id), m.cluster_id, m.distance,
                   m.ei_index, m.size);
  }
  out += "</g>\n<g class=\"annotations\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
  for (const auto& m : metrics) {
    fmt::format_to(std::back_inserter(out), "<text x=\"{:.3f}\" y=\"{:.3f}\" data-cluster=\"{}\">{}</text>\n",
                   sx(m.distance), sy(m.ei_index) + 4.0, m.cluster_id, m.cluster_id);
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace

std::string render_scatter(std::span<const CultureMetrics> metrics, std::string_view title) {
  return scatter_document(metrics, title, [](std::size_t id) { return palette_color(id); });
}

std::string render_scatter(std::span<const CultureMetrics> metrics, const Partition& partition) {
  return scatter_document(metrics, "Distance and thickness " + partition.snapshot_label(),
                          [&](std::size_t id) { return partition.clusters().at(id).color; });
}

TrajectoryChart render_trajectories(std::span<const std::string> snapshot_labels,
                                    std::span<const TrajectorySeries> series) {
  constexpr double width = 640.0, height = 420.0;
  constexpr double left = 70.0, right = 160.0, top = 40.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  TrajectoryChart chart;
  if (series.empty()) {
    chart.empty = true;
    open_svg(chart.svg, width, height, "Standardized E-I over time");
    fmt::format_to(std::back_inserter(chart.svg),
                   "<text class=\"warning\" x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" "
                   "font-family=\"sans-serif\" font-size=\"14\">no homologous clusters across snapshots</text>\n",
                   width / 2.0, height / 2.0);
    chart.svg += "</svg>\n";
    return chart;
  }
  if (snapshot_labels.size() < 2) throw ValidationError("trajectories need at least two snapshots");
  for (const auto& s : series) {
    if (s.values.size() != snapshot_labels.size()) {
      throw ValidationError("trajectory '" + s.name + "' does not cover every snapshot");
    }
  }

  double y_lo = 0.0, y_hi = 0.0;
  for (const auto& s : series) {
    for (double v : s.values) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  const double pad = std::max(0.25, (y_hi - y_lo) * 0.1);
  y_lo -= pad;
  y_hi += pad;
  const double step = plot_w / static_cast<double>(snapshot_labels.size() - 1);
  auto sx = [&](std::size_t i) { return left + step * static_cast<double>(i); };
  auto sy = [&](double v) { return top + (y_hi - v) / (y_hi - y_lo) * plot_h; };

  open_svg(chart.svg, width, height, "Standardized E-I over time");
  std::string& out = chart.svg;
  out += "<g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\">\n";
  fmt::format_to(std::back_inserter(out), "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>\n", left,
                 top + plot_h, left + plot_w);
  fmt::format_to(std::back_inserter(out), "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n", left, top,
                 top + plot_h);
  out += "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < snapshot_labels.size(); ++i) {
    fmt::format_to(std::back_inserter(out), "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                   sx(i), top + plot_h + 18.0, xml_escape(snapshot_labels[i]));
  }
  for (double t : ticks(y_lo, y_hi, 4)) {
    fmt::format_to(std::back_inserter(out), "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.2f}</text>\n",
                   left - 6.0, sy(t) + 4.0, t);
  }
  fmt::format_to(std::back_inserter(out),
                 "<text class=\"y-label\" x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                 "transform=\"rotate(-90 18 {0:.2f})\">standardized E-I</text>\n",
                 top + plot_h / 2.0);
  out += "</g>\n<g class=\"trajectories\" fill=\"none\" stroke-width=\"2\">\n";
  for (const auto& s : series) {
    std::string points, values;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i) {
        points += ' ';
        values += ' ';
      }
      points += fmt::format("{:.2f},{:.2f}", sx(i), sy(s.values[i]));
      values += fmt::format("{}", s.values[i]);
    }
    fmt::format_to(std::back_inserter(out),
                   "<polyline class=\"trajectory\" stroke=\"{}\" points=\"{}\" data-cluster=\"{}\" "
                   "data-values=\"{}\"/>\n",
                   s.color, points, xml_escape(s.name), values);
  }
  out += "</g>\n<g class=\"series-labels\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& s : series) {
    fmt::format_to(std::back_inserter(out), "<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"{}\">{}</text>\n",
                   sx(snapshot_labels.size() - 1) + 8.0, sy(s.values.back()) + 4.0, s.color, xml_escape(s.name));
  }
  out += "</g>\n</svg>\n";
  return chart;
}

}  // namespace ethnomap
