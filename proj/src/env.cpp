#include "skybench/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "skybench/rng.hpp"

namespace skybench {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

CityMap::CityMap(Vec3 bounds_min, Vec3 bounds_max, std::vector<BoxObstacle> obstacles,
                 double safety_margin)
    : bounds_{bounds_min, bounds_max},
      obstacles_(std::move(obstacles)),
      safety_margin_(safety_margin) {
  require(is_finite(bounds_min) && is_finite(bounds_max), "map bounds must be finite");
  require(bounds_min.x < bounds_max.x && bounds_min.y < bounds_max.y && bounds_min.z < bounds_max.z,
          "map bounds_min must be < bounds_max componentwise");
  require(std::isfinite(safety_margin) && safety_margin >= 0.0, "safety_margin must be >= 0");
  inflated_.reserve(obstacles_.size());
  for (const auto& o : obstacles_) {
    require(o.min_corner.x <= o.max_corner.x && o.min_corner.y <= o.max_corner.y &&
                o.min_corner.z <= o.max_corner.z,
            "obstacle min_corner must be <= max_corner");
    require(bounds_.contains(o.min_corner) && bounds_.contains(o.max_corner),
            "obstacle lies outside map bounds");
    inflated_.push_back(o.box().inflated(safety_margin_));
  }
}

bool CityMap::is_point_free(const Vec3& p) const {
  if (!in_bounds(p)) return false;
  return std::none_of(inflated_.begin(), inflated_.end(),
                      [&](const Aabb& box) { return box.contains(p); });
}

bool CityMap::is_segment_free(const Vec3& a, const Vec3& b) const {
  if (!in_bounds(a) || !in_bounds(b)) return false;
  return std::none_of(inflated_.begin(), inflated_.end(),
                      [&](const Aabb& box) { return segment_intersects(box, a, b); });
}

CityMap CityMap::with_margin(double safety_margin) const {
  return CityMap(bounds_.min, bounds_.max, obstacles_, safety_margin);
}

void ScenarioSpec::validate() const {
  require(scenario_id >= 1 && scenario_id <= 6, "scenario_id must be in 1..6");
  require(std::isfinite(map_width) && map_width > 0.0, "map_size width must be > 0");
  require(std::isfinite(map_depth) && map_depth > 0.0, "map_size depth must be > 0");
  require(obstacle_density >= 0.0 && obstacle_density <= 1.0,
          "obstacle_density must lie in [0, 1]");
  require(std::isfinite(max_building_height) && max_building_height > 0.0,
          "max_building_height must be > 0");
  require(is_finite(start) && is_finite(goal), "start and goal must be finite");
  require(max_range > 0.0, "max_range must be > 0");
  require(max_altitude_delta >= 0.0, "max_altitude_delta must be >= 0");
  require(std::abs(start.z - goal.z) <= max_altitude_delta,
          "|start.z - goal.z| exceeds max_altitude_delta");
}

void to_json(nlohmann::json& j, const Vec3& v) { j = {{"x", v.x}, {"y", v.y}, {"z", v.z}}; }

void from_json(const nlohmann::json& j, Vec3& v) {
  v.x = j.at("x").get<double>();
  v.y = j.at("y").get<double>();
  v.z = j.at("z").get<double>();
}

void to_json(nlohmann::json& j, const ScenarioSpec& s) {
  j = {{"scenario_id", s.scenario_id},
       {"map_size", {{"width", s.map_width}, {"depth", s.map_depth}}},
       {"obstacle_density", s.obstacle_density},
       {"max_building_height", s.max_building_height},
       {"start", s.start},
       {"goal", s.goal},
       {"max_range", s.max_range},
       {"max_altitude_delta", s.max_altitude_delta},
       {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, ScenarioSpec& s) {
  static const char* kKnown[] = {"scenario_id", "map_size",           "obstacle_density",
                                 "max_building_height", "start",     "goal",
                                 "max_range",   "max_altitude_delta", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw std::invalid_argument("unknown scenario field '" + key + "'");
    }
  }
  s.scenario_id = j.at("scenario_id").get<int>();
  s.map_width = j.at("map_size").at("width").get<double>();
  s.map_depth = j.at("map_size").at("depth").get<double>();
  s.obstacle_density = j.at("obstacle_density").get<double>();
  s.max_building_height = j.at("max_building_height").get<double>();
  s.start = j.at("start").get<Vec3>();
  s.goal = j.at("goal").get<Vec3>();
  s.max_range = j.at("max_range").get<double>();
  s.max_altitude_delta = j.at("max_altitude_delta").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
}

void to_json(nlohmann::json& j, const CityMap& map) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const auto& o : map.obstacles()) {
    obstacles.push_back({{"min_corner", o.min_corner}, {"max_corner", o.max_corner}});
  }
  j = {{"bounds_min", map.bounds_min()},
       {"bounds_max", map.bounds_max()},
       {"safety_margin", map.safety_margin()},
       {"obstacles", std::move(obstacles)}};
}

CityMap city_from_json(const nlohmann::json& j) {
  std::vector<BoxObstacle> obstacles;
  for (const auto& o : j.at("obstacles")) {
    obstacles.push_back({o.at("min_corner").get<Vec3>(), o.at("max_corner").get<Vec3>()});
  }
  return CityMap(j.at("bounds_min").get<Vec3>(), j.at("bounds_max").get<Vec3>(), std::move(obstacles),
                 j.value("safety_margin", 1.0));
}

CityMap load_city(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    return city_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad map file '" + path + "': " + e.what());
  }
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed scenario file '" + path + "': " + e.what());
  }
  ScenarioSpec spec;
  try {
    spec = j.get<ScenarioSpec>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad scenario file '" + path + "': " + e.what());
  }
  spec.validate();
  return spec;
}

void save_scenario(const ScenarioSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << nlohmann::json(spec).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

CityMap generate_city(const ScenarioSpec& spec, const CityGenOptions& options) {
  spec.validate();
  const Aabb bounds = spec.bounds();
  for (const Vec3& p : {spec.start, spec.goal}) {
    if (!bounds.contains(p)) {
      throw GenerationError(GenerationError::Reason::EndpointBlocked,
                            "start/goal outside map bounds");
    }
  }

  std::vector<BoxObstacle> obstacles;
  if (spec.obstacle_density == 0.0) {
    return CityMap(bounds.min, bounds.max, std::move(obstacles), options.safety_margin);
  }

  // Footprints snap to whole meters; a 1 m raster then gives the exact union area.
  const int width = static_cast<int>(std::floor(spec.map_width));
  const int depth = static_cast<int>(std::floor(spec.map_depth));
  const int side_x_max = std::min(options.max_side, width);
  const int side_y_max = std::min(options.max_side, depth);
  const int side_x_min = std::min(options.min_side, side_x_max);
  const int side_y_min = std::min(options.min_side, side_y_max);
  const double height_hi = std::min(options.max_height, spec.max_building_height);
  const double height_lo = std::min(options.min_height, height_hi);
  if (width < 1 || depth < 1) {
    throw GenerationError(GenerationError::Reason::DensityUnreachable,
                          "map too small to hold a building");
  }

  const double ground_area = spec.map_width * spec.map_depth;
  const double target = spec.obstacle_density;
  const double ceiling = target + options.overshoot_tolerance;
  std::vector<std::uint8_t> raster(static_cast<std::size_t>(width) * depth, 0);
  std::size_t covered = 0;

  Rng rng(spec.seed);
  std::size_t attempts = 0;
  while (static_cast<double>(covered) / ground_area < target) {
    if (++attempts > options.max_attempts) {
      std::ostringstream msg;
      msg << "obstacle density " << target << " unreachable after " << options.max_attempts
          << " placement attempts (reached " << static_cast<double>(covered) / ground_area << ")";
      throw GenerationError(GenerationError::Reason::DensityUnreachable, msg.str());
    }
    const auto sx = static_cast<int>(rng.uniform_int(side_x_min, side_x_max));
    const auto sy = static_cast<int>(rng.uniform_int(side_y_min, side_y_max));
    const auto x0 = static_cast<int>(rng.uniform_int(0, width - sx));
    const auto y0 = static_cast<int>(rng.uniform_int(0, depth - sy));
    const double h = rng.uniform(height_lo, height_hi);

    const BoxObstacle candidate{{double(x0), double(y0), 0.0}, {double(x0 + sx), double(y0 + sy), h}};
    const Aabb keep_out = candidate.box().inflated(options.safety_margin);
    if (keep_out.contains(spec.start) || keep_out.contains(spec.goal)) continue;

    std::size_t fresh = 0;
    for (int y = y0; y < y0 + sy; ++y) {
      for (int x = x0; x < x0 + sx; ++x) {
        fresh += raster[static_cast<std::size_t>(y) * width + x] == 0;
      }
    }
    if (fresh == 0) continue;
    if (static_cast<double>(covered + fresh) / ground_area > ceiling) continue;

    for (int y = y0; y < y0 + sy; ++y) {
      std::fill_n(raster.begin() + static_cast<std::ptrdiff_t>(y) * width + x0, sx, 1);
    }
    covered += fresh;
    obstacles.push_back(candidate);
  }
  return CityMap(bounds.min, bounds.max, std::move(obstacles), options.safety_margin);
}

double coverage_density(const CityMap& map) {
  const Aabb& b = map.bounds();
  const double ground = (b.max.x - b.min.x) * (b.max.y - b.min.y);
  const auto& obs = map.obstacles();
  if (obs.empty()) return 0.0;

  // Exact union area by coordinate compression.
  std::vector<double> xs, ys;
  for (const auto& o : obs) {
    xs.push_back(o.min_corner.x);
    xs.push_back(o.max_corner.x);
    ys.push_back(o.min_corner.y);
    ys.push_back(o.max_corner.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (xs.size() < 2 || ys.size() < 2) return 0.0;

  const std::size_t nx = xs.size() - 1;
  const std::size_t ny = ys.size() - 1;
  // 2D difference array over compressed cells.
  std::vector<int> diff((nx + 1) * (ny + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> int& { return diff[j * (nx + 1) + i]; };
  for (const auto& o : obs) {
    const auto i0 = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), o.min_corner.x) - xs.begin());
    const auto i1 = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), o.max_corner.x) - xs.begin());
    const auto j0 = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), o.min_corner.y) - ys.begin());
    const auto j1 = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), o.max_corner.y) - ys.begin());
    if (i0 == i1 || j0 == j1) continue;
    at(i0, j0) += 1;
    at(i1, j0) -= 1;
    at(i0, j1) -= 1;
    at(i1, j1) += 1;
  }
  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 1; i <= nx; ++i) at(i, j) += at(i - 1, j);
  }
  for (std::size_t j = 1; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) at(i, j) += at(i, j - 1);
  }
  double area = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (at(i, j) > 0) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    }
  }
  return std::clamp(area / ground, 0.0, 1.0);
}

OccupancyGrid::OccupancyGrid(Vec3 origin, double resolution, int nx, int ny, int nz)
    : origin_(origin),
      resolution_(resolution),
      nx_(nx),
      ny_(ny),
      nz_(nz),
      cells_(static_cast<std::size_t>(nx) * ny * nz, 0),
      min_obstacle_extent_(std::numeric_limits<double>::infinity()) {
  require(resolution > 0.0 && std::isfinite(resolution), "grid resolution must be > 0");
  require(nx >= 1 && ny >= 1 && nz >= 1, "grid dims must be >= 1");
}

GridIndex OccupancyGrid::unlinear(std::size_t idx) const {
  const auto sx = static_cast<std::size_t>(nx_);
  const auto sy = static_cast<std::size_t>(ny_);
  return {static_cast<int>(idx % sx), static_cast<int>((idx / sx) % sy),
          static_cast<int>(idx / (sx * sy))};
}

Vec3 OccupancyGrid::cell_center(const GridIndex& c) const {
  return {origin_.x + (c.i + 0.5) * resolution_, origin_.y + (c.j + 0.5) * resolution_,
          origin_.z + (c.k + 0.5) * resolution_};
}

std::optional<GridIndex> OccupancyGrid::cell_of(const Vec3& p) const {
  const GridIndex c{static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
                    static_cast<int>(std::floor((p.y - origin_.y) / resolution_)),
                    static_cast<int>(std::floor((p.z - origin_.z) / resolution_))};
  if (!in_grid(c)) return std::nullopt;
  return c;
}

OccupancyGrid voxelize(const CityMap& map, double resolution, std::size_t cell_budget) {
  require(resolution > 0.0 && std::isfinite(resolution), "voxel resolution must be > 0");
  const Vec3 ext = map.bounds().extent();
  auto cells_along = [&](double e) {
    const double n = std::ceil(e / resolution - 1e-9);
    return std::max(1.0, n);
  };
  const double nx = cells_along(ext.x);
  const double ny = cells_along(ext.y);
  const double nz = cells_along(ext.z);
  if (nx * ny * nz > static_cast<double>(cell_budget)) {
    std::ostringstream msg;
    msg << "voxel grid of " << nx << "x" << ny << "x" << nz << " cells exceeds budget of "
        << cell_budget;
    throw GridBudgetError(msg.str());
  }
  OccupancyGrid grid(map.bounds_min(), resolution, static_cast<int>(nx), static_cast<int>(ny),
                     static_cast<int>(nz));

  // Cell centers that fall past the bounds (non-divisible extents) are not free.
  const Aabb& bounds = map.bounds();
  for (int k = 0; k < grid.nz(); ++k) {
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        const GridIndex c{i, j, k};
        if (!bounds.contains(grid.cell_center(c))) grid.set_occupied(c);
      }
    }
  }

  const Vec3& o = grid.origin();
  double min_extent = std::numeric_limits<double>::infinity();
  for (const Aabb& box : map.inflated()) {
    const Vec3 e = box.extent();
    min_extent = std::min({min_extent, e.x, e.y, e.z});
    // Candidate index range, widened by one; the exact containment test decides.
    int lo[3], hi[3];
    const int n[3] = {grid.nx(), grid.ny(), grid.nz()};
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::ceil((box.min[a] - o[a]) / resolution - 0.5)) - 1);
      hi[a] = std::min(n[a] - 1, static_cast<int>(std::floor((box.max[a] - o[a]) / resolution - 0.5)) + 1);
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const GridIndex c{i, j, k};
          if (box.contains(grid.cell_center(c))) grid.set_occupied(c);
        }
      }
    }
  }
  grid.set_min_obstacle_extent(min_extent);
  return grid;
}

}  // namespace skybench
