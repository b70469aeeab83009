#include "skybench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skybench::metrics {

namespace {

double deflection(const Vec3& a, const Vec3& b) {
  // Exactly parallel segments give exactly zero.
  if (cross(a, b) == Vec3{} && dot(a, b) > 0.0) return 0.0;
  const double ratio = dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
  return std::acos(std::clamp(ratio, -1.0, 1.0));
}

}  // namespace

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::Clearance: return "Clearance";
    case Violation::SharpTurn: return "SharpTurn";
    case Violation::RangeExceeded: return "RangeExceeded";
    case Violation::AltitudeDelta: return "AltitudeDelta";
  }
  return "Unknown";
}

bool MetricsRecord::has(Violation v) const {
  return std::find(violations.begin(), violations.end(), v) != violations.end();
}

double path_length(const Path& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    total += distance(path.waypoints[i - 1], path.waypoints[i]);
  }
  return total;
}

TurningAngles turning_angles(const Path& path) {
  TurningAngles out;
  const auto& w = path.waypoints;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == w[i - 1]) throw DegenerateSegment(i);
  }
  for (std::size_t n = 1; n + 1 < w.size(); ++n) {
    const double theta = deflection(w[n] - w[n - 1], w[n + 1] - w[n]);
    out.per_vertex.push_back(theta);
    out.total += theta;
  }
  return out;
}

double interior_angle(const Path& path, std::size_t vertex) {
  const auto& w = path.waypoints;
  if (vertex == 0 || vertex + 1 >= w.size()) {
    throw std::out_of_range("interior_angle needs an interior vertex");
  }
  if (w[vertex] == w[vertex - 1]) throw DegenerateSegment(vertex);
  if (w[vertex + 1] == w[vertex]) throw DegenerateSegment(vertex + 1);
  const double theta = deflection(w[vertex] - w[vertex - 1], w[vertex + 1] - w[vertex]);
  return 180.0 - theta * 180.0 / std::numbers::pi;
}

Path collapse_duplicates(const Path& path) {
  Path out;
  for (const Vec3& p : path.waypoints) {
    if (out.waypoints.empty() || out.waypoints.back() != p) out.waypoints.push_back(p);
  }
  return out;
}

double min_clearance(const Path& path, const CityMap& map) {
  double best = std::numeric_limits<double>::infinity();
  const auto& w = path.waypoints;
  for (const auto& o : map.obstacles()) {
    const Aabb box = o.box();
    if (w.size() == 1) {
      best = std::min(best, point_box_distance(box, w[0]));
      continue;
    }
    for (std::size_t i = 1; i < w.size(); ++i) {
      best = std::min(best, segment_box_distance(box, w[i - 1], w[i]));
    }
  }
  return best;
}

MetricsRecord validate(const Path& raw, const CityMap& map, const ConstraintSet& constraints) {
  MetricsRecord rec;
  const Path path = collapse_duplicates(raw);
  if (path.empty()) return rec;

  rec.path_length = path_length(path);
  rec.min_clearance = min_clearance(path, map);

  bool sharp = false;
  if (path.size() >= 3) {
    rec.turning_sum = turning_angles(path).total;
    for (std::size_t v = 1; v + 1 < path.size(); ++v) {
      if (is_sharp_turn(interior_angle(path, v), constraints.sharp_turn_min_angle)) sharp = true;
    }
  }

  if (rec.min_clearance < constraints.safety_margin) rec.violations.push_back(Violation::Clearance);
  if (sharp) rec.violations.push_back(Violation::SharpTurn);
  if (rec.path_length > constraints.max_range) rec.violations.push_back(Violation::RangeExceeded);
  if (std::abs(path.waypoints.back().z - path.waypoints.front().z) > constraints.max_altitude_delta) {
    rec.violations.push_back(Violation::AltitudeDelta);
  }
  return rec;
}

}  // namespace skybench::metrics
