#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skybench/geometry.hpp"

namespace skybench {

/// A building: an axis-aligned box standing on the ground.
struct BoxObstacle {
  Vec3 min_corner;
  Vec3 max_corner;

  Aabb box() const { return {min_corner, max_corner}; }
  friend bool operator==(const BoxObstacle&, const BoxObstacle&) = default;
};

/// Bounded 3D world of box obstacles. Immutable once built.
///
/// Every collision query treats obstacles as inflated by `safety_margin`
/// (Minkowski sum with a cube), so all planners inherit the same clearance.
class CityMap {
 public:
  CityMap(Vec3 bounds_min, Vec3 bounds_max, std::vector<BoxObstacle> obstacles,
          double safety_margin = 1.0);

  const Vec3& bounds_min() const { return bounds_.min; }
  const Vec3& bounds_max() const { return bounds_.max; }
  const Aabb& bounds() const { return bounds_; }
  const std::vector<BoxObstacle>& obstacles() const { return obstacles_; }
  double safety_margin() const { return safety_margin_; }

  /// Obstacles after inflation by the safety margin.
  const std::vector<Aabb>& inflated() const { return inflated_; }

  bool in_bounds(const Vec3& p) const { return bounds_.contains(p); }

  /// True iff p is inside bounds and strictly outside every inflated obstacle.
  bool is_point_free(const Vec3& p) const;

  /// True iff both endpoints are in bounds and the closed segment misses every
  /// inflated obstacle (exact slab test).
  bool is_segment_free(const Vec3& a, const Vec3& b) const;

  /// Same world with a different margin.
  CityMap with_margin(double safety_margin) const;

 private:
  Aabb bounds_;
  std::vector<BoxObstacle> obstacles_;
  double safety_margin_;
  std::vector<Aabb> inflated_;
};

/// Parameters of one experiment scenario.
struct ScenarioSpec {
  int scenario_id = 1;
  double map_width = 1000.0;   // x extent, m
  double map_depth = 1000.0;   // y extent, m
  double obstacle_density = 0.1;
  double max_building_height = 120.0;
  Vec3 start;
  Vec3 goal;
  double max_range = 200.0;
  double max_altitude_delta = 30.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const;

  Aabb bounds() const { return {{0.0, 0.0, 0.0}, {map_width, map_depth, max_building_height}}; }
};

void to_json(nlohmann::json& j, const Vec3& v);
void from_json(const nlohmann::json& j, Vec3& v);
void to_json(nlohmann::json& j, const ScenarioSpec& s);
void from_json(const nlohmann::json& j, ScenarioSpec& s);
void to_json(nlohmann::json& j, const CityMap& map);
CityMap city_from_json(const nlohmann::json& j);
/// Reads a map written by to_json; throws std::invalid_argument on bad content.
CityMap load_city(const std::string& path);

ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const ScenarioSpec& spec, const std::string& path);

class GenerationError : public std::runtime_error {
 public:
  enum class Reason { DensityUnreachable, EndpointBlocked };

  GenerationError(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// Building generator knobs. Defaults give 20-80 m footprints, 10-100 m heights.
struct CityGenOptions {
  int min_side = 20;
  int max_side = 80;
  double min_height = 10.0;
  double max_height = 100.0;
  double safety_margin = 1.0;
  double overshoot_tolerance = 0.01;  // max coverage above target
  std::size_t max_attempts = 200000;
};

/// Seeded random city whose footprint coverage meets spec.obstacle_density.
/// Footprints have integer-meter corners, so coverage on a 1 m raster is exact.
CityMap generate_city(const ScenarioSpec& spec, const CityGenOptions& options = {});

/// Union-of-footprints area divided by map ground area.
double coverage_density(const CityMap& map);

struct GridIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  friend constexpr bool operator==(const GridIndex&, const GridIndex&) = default;
  friend constexpr auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

/// Dense boolean lattice over the map bounds.
class OccupancyGrid {
 public:
  OccupancyGrid(Vec3 origin, double resolution, int nx, int ny, int nz);

  double resolution() const { return resolution_; }
  const Vec3& origin() const { return origin_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  std::size_t cell_count() const { return cells_.size(); }

  bool in_grid(const GridIndex& c) const {
    return c.i >= 0 && c.j >= 0 && c.k >= 0 && c.i < nx_ && c.j < ny_ && c.k < nz_;
  }
  std::size_t linear(const GridIndex& c) const {
    return static_cast<std::size_t>(c.i) +
           static_cast<std::size_t>(nx_) *
               (static_cast<std::size_t>(c.j) + static_cast<std::size_t>(ny_) * c.k);
  }
  GridIndex unlinear(std::size_t idx) const;

  bool occupied(const GridIndex& c) const { return cells_[linear(c)] != 0; }
  /// Out-of-grid cells count as occupied.
  bool blocked(const GridIndex& c) const { return !in_grid(c) || occupied(c); }
  void set_occupied(const GridIndex& c, bool value = true) { cells_[linear(c)] = value ? 1 : 0; }

  Vec3 cell_center(const GridIndex& c) const;
  /// Cell containing p, or nullopt if p lies outside the grid.
  std::optional<GridIndex> cell_of(const Vec3& p) const;

  /// Smallest inflated obstacle extent over all axes; +inf without obstacles.
  double min_obstacle_extent() const { return min_obstacle_extent_; }
  void set_min_obstacle_extent(double e) { min_obstacle_extent_ = e; }

 private:
  Vec3 origin_;
  double resolution_;
  int nx_, ny_, nz_;
  std::vector<std::uint8_t> cells_;
  double min_obstacle_extent_;
};

class GridBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultCellBudget = 20'000'000;

/// Marks a cell occupied iff its center fails is_point_free.
OccupancyGrid voxelize(const CityMap& map, double resolution,
                       std::size_t cell_budget = kDefaultCellBudget);

}  // namespace skybench
