#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "skybench/env.hpp"
#include "skybench/planning.hpp"

namespace skybench::metrics {

enum class Violation { Clearance, SharpTurn, RangeExceeded, AltitudeDelta };

std::string_view to_string(Violation v);

struct ConstraintSet {
  double safety_margin = 1.0;          // m
  double sharp_turn_min_angle = 30.0;  // degrees, interior angle
  double max_range = 200.0;            // m
  double max_altitude_delta = 30.0;    // m, between start and goal
};

struct MetricsRecord {
  double path_length = 0.0;    // m
  double turning_sum = 0.0;    // rad
  double planning_time = 0.0;  // s; filled in by the caller that timed the run
  double min_clearance = 0.0;  // m, to the un-inflated obstacles
  std::vector<Violation> violations;

  bool has(Violation v) const;
  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

class DegenerateSegment : public std::invalid_argument {
 public:
  explicit DegenerateSegment(std::size_t index)
      : std::invalid_argument("zero-length segment at waypoint " + std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Sum of Euclidean segment lengths.
double path_length(const Path& path);

struct TurningAngles {
  double total = 0.0;              // rad
  std::vector<double> per_vertex;  // rad, one per interior vertex
};

/// Deflection angle at each interior vertex, arccos of the normalized dot
/// product of the incoming and outgoing segment vectors.
/// Throws DegenerateSegment on consecutive duplicate waypoints.
TurningAngles turning_angles(const Path& path);

/// Interior angle at `vertex` in degrees: 180 minus the deflection.
double interior_angle(const Path& path, std::size_t vertex);

/// Sharp-turn predicate. Interior angles within 1e-9 degrees of the limit do
/// not violate, so a deflection of exactly 150 degrees passes a 30 degree limit.
inline bool is_sharp_turn(double interior_deg, double min_angle_deg) {
  return interior_deg < min_angle_deg - 1e-9;
}

/// Drops consecutive duplicate waypoints.
Path collapse_duplicates(const Path& path);

/// Exact minimum distance from the path to the map's obstacles (+inf if none).
double min_clearance(const Path& path, const CityMap& map);

/// All metrics except planning_time, which is left at 0.
MetricsRecord validate(const Path& path, const CityMap& map, const ConstraintSet& constraints);

/// Wall-clock seconds spent in `fn`, measured with a monotonic clock.
template <typename Fn>
auto timed(Fn&& fn) {
  using Clock = std::chrono::steady_clock;
  if constexpr (std::is_void_v<std::invoke_result_t<Fn>>) {
    const auto t0 = Clock::now();
    std::forward<Fn>(fn)();
    return std::chrono::duration<double>(Clock::now() - t0).count();
  } else {
    const auto t0 = Clock::now();
    auto result = std::forward<Fn>(fn)();
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return std::pair<decltype(result), double>(std::move(result), seconds);
  }
}

}  // namespace skybench::metrics
