#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "skybench/geometry.hpp"

namespace skybench {

/// Ordered waypoint sequence in meters; the output of every planner.
struct Path {
  std::vector<Vec3> waypoints;

  bool empty() const { return waypoints.empty(); }
  std::size_t size() const { return waypoints.size(); }
  friend bool operator==(const Path&, const Path&) = default;
};

enum class PlanStatus {
  Success,
  NoPath,
  StartBlocked,
  GoalBlocked,
  NoFeasiblePath,  // a path was produced but still violates hard constraints
};

std::string_view to_string(PlanStatus status);

struct SearchStats {
  std::size_t nodes_expanded = 0;
  std::size_t open_peak = 0;
  double wall_time_s = 0.0;
  /// Distance from the requested endpoints to the grid cells actually used.
  double snap_distance_m = 0.0;
  /// Planner-specific progress trace: RRT* best cost per checkpoint, PSO
  /// gbest fitness per iteration.
  std::vector<double> cost_history;
};

struct PlanResult {
  PlanStatus status = PlanStatus::NoPath;
  Path path;
  SearchStats stats;

  bool ok() const { return status == PlanStatus::Success; }
};

}  // namespace skybench
