#include "ethnomap/cartograph.hpp"

#include <algorithm>
#include <cmath>

#include "ethnomap/error.hpp"
#include "ethnomap/random.hpp"

namespace ethnomap {

void LayoutParams::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) throw ValidationError("layout dimensions must be positive");
  if (iterations < 1) throw ValidationError("layout needs at least one iteration");
  if (!(initial_temperature > 0.0)) throw ValidationError("layout temperature must be positive");
}

Layout fr_layout(const BinaryGraph& graph, const LayoutParams& params, std::string snapshot_label) {
  params.validate();
  const std::size_t n = graph.size();
  Layout layout;
  layout.snapshot_label = std::move(snapshot_label);
  layout.params = params;
  for (const Site& s : graph.sites()) layout.domains.push_back(s.domain);
  layout.positions.resize(n);
  if (n == 0) return layout;
  if (n == 1) {
    layout.positions[0] = {params.width / 2.0, params.height / 2.0};
    return layout;
  }

  RandomStream rng(params.seed, {0x6c61796f7574ULL});
  std::vector<Point>& pos = layout.positions;
  for (Point& p : pos) {
    p.x = rng.uniform() * params.width;
    p.y = rng.uniform() * params.height;
  }

  const double k = std::sqrt(params.width * params.height / static_cast<double>(n));
  const double k2 = k * k;
  const double start = params.initial_temperature * params.width;
  const auto edges = graph.edges();
  std::vector<Point> disp(n);

  for (std::size_t it = 0; it < params.iterations; ++it) {
    const double temperature =
        start * (1.0 - static_cast<double>(it) / static_cast<double>(params.iterations));
    std::fill(disp.begin(), disp.end(), Point{});

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x;
        double dy = pos[i].y - pos[j].y;
        double d = std::hypot(dx, dy);
        if (d < 1e-9) {
          // Coincident nodes: separate along an index-derived direction.
          const double angle = static_cast<double>((i * 7919 + j * 104729) % 360) * (M_PI / 180.0);
          dx = std::cos(angle) * 1e-3 * k;
          dy = std::sin(angle) * 1e-3 * k;
          d = std::hypot(dx, dy);
        }
        const double f = k2 / d;
        disp[i].x += dx / d * f;
        disp[i].y += dy / d * f;
        disp[j].x -= dx / d * f;
        disp[j].y -= dy / d * f;
      }
    }
    for (const auto& [i, j] : edges) {
      const double dx = pos[i].x - pos[j].x;
      const double dy = pos[i].y - pos[j].y;
      const double d = std::hypot(dx, dy);
      if (d < 1e-12) continue;
      const double f = d * d / k;
      disp[i].x -= dx / d * f;
      disp[i].y -= dy / d * f;
      disp[j].x += dx / d * f;
      disp[j].y += dy / d * f;
    }
    for (std::size_t v = 0; v < n; ++v) {
      const double len = std::hypot(disp[v].x, disp[v].y);
      if (len > 0.0) {
        const double step = std::min(len, temperature);
        pos[v].x += disp[v].x / len * step;
        pos[v].y += disp[v].y / len * step;
      }
      pos[v].x = std::clamp(pos[v].x, 0.0, params.width);
      pos[v].y = std::clamp(pos[v].y, 0.0, params.height);
    }
  }
  return layout;
}

}  // namespace ethnomap
