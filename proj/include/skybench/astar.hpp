#pragma once

#include <optional>
#include <vector>

#include "skybench/env.hpp"
#include "skybench/planning.hpp"

namespace skybench::astar {

struct AStarConfig {
  double resolution = 10.0;  // voxel size for map-level planning, m
  std::size_t cell_budget = kDefaultCellBudget;
  /// Keep the f value of every popped node in `expansion_trace`.
  bool record_expansions = false;
};

/// Node bookkeeping. f is always g + h.
struct SearchNode {
  GridIndex index;
  double g = 0.0;
  double h = 0.0;
  double f = 0.0;
  std::optional<GridIndex> parent;
};

struct AStarResult {
  PlanResult plan;
  double cost = 0.0;  // grid cost of the path, m
  /// Popped f values in expansion order (only with record_expansions).
  std::vector<double> expansion_trace;
  /// Better costs found for already-closed nodes. Zero for a consistent heuristic.
  std::size_t closed_improvements = 0;
  std::vector<GridIndex> cells;
};

/// Straight-line distance between cell centers.
double heuristic(const GridIndex& a, const GridIndex& b, double resolution);

/// The 26-neighbour move set. A move is legal when the target cell and every
/// cell of the sub-cube it spans are free (no corner cutting).
struct Move {
  int di, dj, dk;
  double unit_cost;  // 1, sqrt(2) or sqrt(3)
};
const std::vector<Move>& moves();
bool move_allowed(const OccupancyGrid& grid, const GridIndex& from, const Move& m);

/// A* over the grid from start cell center to goal cell center.
AStarResult plan_astar(const OccupancyGrid& grid, const GridIndex& start, const GridIndex& goal,
                       const AStarConfig& config = {});

/// Nearest free cell to p by center distance, searching outward in shells.
std::optional<GridIndex> snap_to_free(const OccupancyGrid& grid, const Vec3& p, int max_shell = 8);

/// Voxelize the map, snap continuous endpoints to free cells and run A*.
/// Timing covers voxelization and search.
AStarResult plan_astar(const CityMap& map, const Vec3& start, const Vec3& goal,
                       const AStarConfig& config = {});

/// Same, reusing an existing voxelization of `map`.
AStarResult plan_astar(const CityMap& map, const OccupancyGrid& grid, const Vec3& start,
                       const Vec3& goal, const AStarConfig& config = {});

}  // namespace skybench::astar
