#include "skybench/geometry.hpp"

#include <array>
#include <limits>

namespace skybench {

bool segment_intersects(const Aabb& box, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  double t_enter = 0.0;
  double t_exit = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double lo = box.min[axis];
    const double hi = box.max[axis];
    if (d[axis] == 0.0) {
      if (a[axis] < lo || a[axis] > hi) return false;
      continue;
    }
    double t0 = (lo - a[axis]) / d[axis];
    double t1 = (hi - a[axis]) / d[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return false;
  }
  return true;
}

double point_box_distance(const Aabb& box, const Vec3& p) {
  return distance(p, box.clamp(p));
}

double segment_box_distance(const Aabb& box, const Vec3& a, const Vec3& b) {
  if (segment_intersects(box, a, b)) return 0.0;
  const Vec3 d = b - a;

  // Squared distance is piecewise quadratic in t; pieces change where a
  // coordinate crosses a face plane.
  std::array<double, 8> breaks{};
  std::size_t n = 0;
  breaks[n++] = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) continue;
    for (double plane : {box.min[axis], box.max[axis]}) {
      const double t = (plane - a[axis]) / d[axis];
      if (t > 0.0 && t < 1.0) breaks[n++] = t;
    }
  }
  breaks[n++] = 1.0;
  std::sort(breaks.begin(), breaks.begin() + static_cast<std::ptrdiff_t>(n));

  auto sq_dist = [&](double t) {
    const Vec3 p = a + t * d;
    const Vec3 q = box.clamp(p);
    return dot(p - q, p - q);
  };

  double best = std::min(sq_dist(0.0), sq_dist(1.0));
  for (std::size_t s = 0; s + 1 < n; ++s) {
    const double t0 = breaks[s];
    const double t1 = breaks[s + 1];
    if (t1 <= t0) continue;
    const Vec3 mid = a + (0.5 * (t0 + t1)) * d;
    // On this piece each axis is either inside its slab (contributes 0) or
    // pinned to one face.
    double num = 0.0;
    double den = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      double face;
      if (mid[axis] < box.min[axis]) {
        face = box.min[axis];
      } else if (mid[axis] > box.max[axis]) {
        face = box.max[axis];
      } else {
        continue;
      }
      num += d[axis] * (a[axis] - face);
      den += d[axis] * d[axis];
    }
    if (den == 0.0) {
      best = std::min(best, sq_dist(t0));
      continue;
    }
    const double t = std::clamp(-num / den, t0, t1);
    best = std::min({best, sq_dist(t), sq_dist(t0), sq_dist(t1)});
  }
  return std::sqrt(best);
}

}  // namespace skybench
