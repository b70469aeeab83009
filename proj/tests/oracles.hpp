#pragma once
// Brute-force reference implementations. Deliberately written without the
// library's helpers so that a shared bug cannot hide.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "skybench/env.hpp"
#include "skybench/planning.hpp"
#include "skybench/rng.hpp"

namespace oracle {

using skybench::GridIndex;
using skybench::OccupancyGrid;
using skybench::Path;
using skybench::Vec3;

struct RandomGridCase {
  OccupancyGrid grid;
  GridIndex start;
  GridIndex goal;
};

inline RandomGridCase random_grid(std::uint64_t seed, int nx = 20, int ny = 20, int nz = 8,
                                  double blocked = 0.3) {
  skybench::Rng rng(seed);
  OccupancyGrid g({0, 0, 0}, 1.0, nx, ny, nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) g.set_occupied({i, j, k}, rng.uniform() < blocked);
  auto free_cell = [&] {
    for (;;) {
      GridIndex c{static_cast<int>(rng.uniform_int(0, nx - 1)), static_cast<int>(rng.uniform_int(0, ny - 1)),
                  static_cast<int>(rng.uniform_int(0, nz - 1))};
      if (!g.occupied(c)) return c;
    }
  };
  GridIndex s = free_cell();
  GridIndex t = free_cell();
  return {std::move(g), s, t};
}

// Plain Dijkstra over 26 neighbours. An edge exists when every cell of the box
// spanned by the two endpoints is inside the grid and free.
inline std::optional<double> dijkstra(const OccupancyGrid& g, GridIndex s, GridIndex t) {
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  auto id = [&](int i, int j, int k) { return static_cast<std::size_t>((k * ny + j) * nx + i); };
  auto free_at = [&](int i, int j, int k) {
    return i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz && !g.occupied({i, j, k});
  };
  std::vector<double> dist(static_cast<std::size_t>(nx) * ny * nz, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[id(s.i, s.j, s.k)] = 0;
  pq.push({0, id(s.i, s.j, s.k)});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    const int i = static_cast<int>(u % nx), j = static_cast<int>((u / nx) % ny), k = static_cast<int>(u / (nx * ny));
    if (i == t.i && j == t.j && k == t.k) return d;
    for (int dk = -1; dk <= 1; ++dk)
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (!di && !dj && !dk) continue;
          bool ok = true;
          for (int a = std::min(0, di); a <= std::max(0, di) && ok; ++a)
            for (int b = std::min(0, dj); b <= std::max(0, dj) && ok; ++b)
              for (int c = std::min(0, dk); c <= std::max(0, dk) && ok; ++c)
                if (!free_at(i + a, j + b, k + c)) ok = false;
          if (!ok) continue;
          const double w = std::sqrt(static_cast<double>(di * di + dj * dj + dk * dk)) * g.resolution();
          const std::size_t v = id(i + di, j + dj, k + dk);
          if (d + w < dist[v]) {
            dist[v] = d + w;
            pq.push({dist[v], v});
          }
        }
  }
  return std::nullopt;
}

inline double length(const Path& p) {
  double sum = 0;
  for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
    const Vec3& a = p.waypoints[i - 1];
    const Vec3& b = p.waypoints[i];
    sum += std::hypot(b.x - a.x, b.y - a.y, b.z - a.z);
  }
  return sum;
}

// atan2 form of the deflection angle, independent of the arccos form.
inline double deflection(const Vec3& u, const Vec3& v) {
  const double cx = u.y * v.z - u.z * v.y, cy = u.z * v.x - u.x * v.z, cz = u.x * v.y - u.y * v.x;
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), u.x * v.x + u.y * v.y + u.z * v.z);
}

inline double turning(const Path& p) {
  double sum = 0;
  for (std::size_t i = 1; i + 1 < p.waypoints.size(); ++i) {
    sum += deflection(p.waypoints[i] - p.waypoints[i - 1], p.waypoints[i + 1] - p.waypoints[i]);
  }
  return sum;
}

inline double point_box(const skybench::Aabb& b, const Vec3& p) {
  double s = 0;
  for (int a = 0; a < 3; ++a) {
    const double d = std::max({b.min[a] - p[a], 0.0, p[a] - b.max[a]});
    s += d * d;
  }
  return std::sqrt(s);
}

// Minimum over points spaced at most `step` apart along every segment.
inline double sampled_clearance(const Path& p, const std::vector<skybench::BoxObstacle>& obstacles, double step) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
    const Vec3 a = p.waypoints[i - 1], b = p.waypoints[i];
    const int n = std::max(1, static_cast<int>(std::ceil(skybench::distance(a, b) / step)));
    for (int s = 0; s <= n; ++s) {
      const Vec3 q = a + (static_cast<double>(s) / n) * (b - a);
      for (const auto& o : obstacles) best = std::min(best, point_box(o.box(), q));
    }
  }
  return best;
}

// Fraction of raster cell centers covered by at least one footprint.
inline double raster_coverage(const skybench::CityMap& map, double cell) {
  const double w = map.bounds_max().x - map.bounds_min().x;
  const double d = map.bounds_max().y - map.bounds_min().y;
  const int nx = static_cast<int>(std::llround(w / cell)), ny = static_cast<int>(std::llround(d / cell));
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(nx) * ny, 0);
  for (const auto& o : map.obstacles()) {
    for (int j = 0; j < ny; ++j) {
      const double y = map.bounds_min().y + (j + 0.5) * cell;
      if (y < o.min_corner.y || y > o.max_corner.y) continue;
      for (int i = 0; i < nx; ++i) {
        const double x = map.bounds_min().x + (i + 0.5) * cell;
        if (x >= o.min_corner.x && x <= o.max_corner.x) hit[static_cast<std::size_t>(j) * nx + i] = 1;
      }
    }
  }
  std::size_t count = 0;
  for (auto h : hit) count += h;
  return static_cast<double>(count) / static_cast<double>(hit.size());
}

}  // namespace oracle
