#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

namespace skybench {

/// Point or displacement in world coordinates, meters.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend constexpr Vec3 operator*(const Vec3& v, double s) { return s * v; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
  }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(b - a); }

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Closed axis-aligned box. Used both for obstacles and for the world bounds.
struct Aabb {
  Vec3 min;
  Vec3 max;

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
  }

  /// Minkowski sum with a cube of half-width `margin`.
  Aabb inflated(double margin) const {
    const Vec3 m{margin, margin, margin};
    return {min - m, max + m};
  }

  Vec3 clamp(const Vec3& p) const {
    return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
            std::clamp(p.z, min.z, max.z)};
  }

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }

  friend bool operator==(const Aabb&, const Aabb&) = default;
};

/// Slab test of the closed segment [a, b] against a closed box.
bool segment_intersects(const Aabb& box, const Vec3& a, const Vec3& b);

/// Euclidean distance from a point to a closed box (0 inside).
double point_box_distance(const Aabb& box, const Vec3& p);

/// Exact minimum Euclidean distance between the segment [a, b] and a closed box.
double segment_box_distance(const Aabb& box, const Vec3& a, const Vec3& b);

}  // namespace skybench
