#include "skybench/astar.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace skybench::astar {

namespace {

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();
constexpr double kImprovementTol = 1e-9;

struct OpenEntry {
  double f;
  double g;
  GridIndex index;
};

// Lowest f first; ties go to the larger g, then the smaller index.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.index > b.index;
  }
};

using EdgeCheck = std::function<bool(const GridIndex&, const GridIndex&)>;

AStarResult search(const OccupancyGrid& grid, const GridIndex& start, const GridIndex& goal,
                   const AStarConfig& config, const EdgeCheck& edge_ok) {
  AStarResult out;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](PlanStatus status) {
    out.plan.status = status;
    out.plan.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  };

  if (grid.blocked(start)) return finish(PlanStatus::StartBlocked);
  if (grid.blocked(goal)) return finish(PlanStatus::GoalBlocked);

  const double res = grid.resolution();
  const std::size_t n = grid.cell_count();
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, kNoParent);
  std::vector<std::uint8_t> closed(n, 0);

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  const std::size_t start_id = grid.linear(start);
  g[start_id] = 0.0;
  open.push({heuristic(start, goal, res), 0.0, start});
  out.plan.stats.open_peak = 1;

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t id = grid.linear(top.index);
    if (closed[id] || top.g > g[id]) continue;  // stale entry
    closed[id] = 1;
    ++out.plan.stats.nodes_expanded;
    if (config.record_expansions) out.expansion_trace.push_back(top.f);

    if (top.index == goal) {
      out.cost = g[id];
      for (std::size_t at = id; at != kNoParent; at = parent[at]) {
        out.cells.push_back(grid.unlinear(at));
      }
      std::reverse(out.cells.begin(), out.cells.end());
      out.plan.path.waypoints.reserve(out.cells.size());
      for (const auto& c : out.cells) out.plan.path.waypoints.push_back(grid.cell_center(c));
      return finish(PlanStatus::Success);
    }

    for (const Move& m : moves()) {
      if (!move_allowed(grid, top.index, m)) continue;
      const GridIndex next{top.index.i + m.di, top.index.j + m.dj, top.index.k + m.dk};
      if (edge_ok && !edge_ok(top.index, next)) continue;
      const std::size_t nid = grid.linear(next);
      const double ng = g[id] + m.unit_cost * res;
      if (closed[nid]) {
        if (ng < g[nid] - kImprovementTol) ++out.closed_improvements;
        continue;
      }
      if (ng < g[nid]) {
        g[nid] = ng;
        parent[nid] = id;
        open.push({ng + heuristic(next, goal, res), ng, next});
        out.plan.stats.open_peak = std::max(out.plan.stats.open_peak, open.size());
      }
    }
  }
  return finish(PlanStatus::NoPath);
}

}  // namespace

double heuristic(const GridIndex& a, const GridIndex& b, double resolution) {
  const double di = a.i - b.i;
  const double dj = a.j - b.j;
  const double dk = a.k - b.k;
  return resolution * std::sqrt(di * di + dj * dj + dk * dk);
}

const std::vector<Move>& moves() {
  static const std::vector<Move> kMoves = [] {
    std::vector<Move> out;
    for (int dk = -1; dk <= 1; ++dk) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int nonzero = (di != 0) + (dj != 0) + (dk != 0);
          if (nonzero == 0) continue;
          out.push_back({di, dj, dk, std::sqrt(static_cast<double>(nonzero))});
        }
      }
    }
    return out;
  }();
  return kMoves;
}

bool move_allowed(const OccupancyGrid& grid, const GridIndex& from, const Move& m) {
  // Every cell of the spanned sub-cube, the target included, must be free.
  for (int a = 0; a <= (m.di != 0); ++a) {
    for (int b = 0; b <= (m.dj != 0); ++b) {
      for (int c = 0; c <= (m.dk != 0); ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        if (grid.blocked({from.i + a * m.di, from.j + b * m.dj, from.k + c * m.dk})) return false;
      }
    }
  }
  return true;
}

AStarResult plan_astar(const OccupancyGrid& grid, const GridIndex& start, const GridIndex& goal,
                       const AStarConfig& config) {
  return search(grid, start, goal, config, nullptr);
}

std::optional<GridIndex> snap_to_free(const OccupancyGrid& grid, const Vec3& p, int max_shell) {
  const double r = grid.resolution();
  const Vec3& o = grid.origin();
  auto clamp_axis = [](double v, int n) { return std::clamp(static_cast<int>(std::floor(v)), 0, n - 1); };
  const GridIndex base{clamp_axis((p.x - o.x) / r, grid.nx()), clamp_axis((p.y - o.y) / r, grid.ny()),
                       clamp_axis((p.z - o.z) / r, grid.nz())};
  std::optional<GridIndex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int dk = -max_shell; dk <= max_shell; ++dk) {
    for (int dj = -max_shell; dj <= max_shell; ++dj) {
      for (int di = -max_shell; di <= max_shell; ++di) {
        const GridIndex c{base.i + di, base.j + dj, base.k + dk};
        if (grid.blocked(c)) continue;
        const double d = distance(p, grid.cell_center(c));
        if (d < best_d || (d == best_d && c < *best)) {
          best_d = d;
          best = c;
        }
      }
    }
  }
  return best;
}

AStarResult plan_astar(const CityMap& map, const OccupancyGrid& grid, const Vec3& start,
                       const Vec3& goal, const AStarConfig& config) {
  AStarResult out;
  if (!map.is_point_free(start)) {
    out.plan.status = PlanStatus::StartBlocked;
    return out;
  }
  if (!map.is_point_free(goal)) {
    out.plan.status = PlanStatus::GoalBlocked;
    return out;
  }
  const auto s = snap_to_free(grid, start);
  const auto t = snap_to_free(grid, goal);
  if (!s) {
    out.plan.status = PlanStatus::StartBlocked;
    return out;
  }
  if (!t) {
    out.plan.status = PlanStatus::GoalBlocked;
    return out;
  }

  // With every inflated obstacle at least one cell thick, a move whose spanned
  // cells are all free cannot clip an obstacle; thinner obstacles need the
  // exact segment test.
  EdgeCheck edge_ok;
  if (grid.min_obstacle_extent() < grid.resolution()) {
    edge_ok = [&](const GridIndex& a, const GridIndex& b) {
      return map.is_segment_free(grid.cell_center(a), grid.cell_center(b));
    };
  }
  out = search(grid, *s, *t, config, edge_ok);
  out.plan.stats.snap_distance_m =
      std::max(distance(start, grid.cell_center(*s)), distance(goal, grid.cell_center(*t)));
  return out;
}

AStarResult plan_astar(const CityMap& map, const Vec3& start, const Vec3& goal,
                       const AStarConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const OccupancyGrid grid = voxelize(map, config.resolution, config.cell_budget);
  AStarResult out = plan_astar(map, grid, start, goal, config);
  out.plan.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace skybench::astar
