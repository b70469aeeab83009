#include "skybench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "skybench/rng.hpp"
#include "skybench/svg.hpp"

namespace skybench::bench {

namespace fs = std::filesystem;

std::string_view to_string(Planner p) {
  switch (p) {
    case Planner::AStar: return "astar";
    case Planner::RrtStar: return "rrtstar";
    case Planner::Pso: return "pso";
  }
  return "unknown";
}

std::optional<Planner> parse_planner(std::string_view name) {
  for (Planner p : kAllPlanners) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::PathLength: return "path_length";
    case Metric::TurningSum: return "turning_sum";
    case Metric::PlanningTime: return "planning_time";
  }
  return "unknown";
}

void ExperimentPlan::validate() const {
  if (trials_per_cell < 1) throw std::invalid_argument("trials_per_cell must be >= 1");
  if (scenarios.empty()) throw std::invalid_argument("plan has no scenarios");
  if (planners.empty()) throw std::invalid_argument("plan has no planners");
  if (!(endpoint_range_fraction > 0.0 && endpoint_range_fraction <= 1.0)) {
    throw std::invalid_argument("endpoint_range_fraction must lie in (0, 1]");
  }
  std::vector<int> ids;
  for (const auto& s : scenarios) {
    s.validate();
    ids.push_back(s.scenario_id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw std::invalid_argument("scenario ids must be unique");
  }
  configs.rrt.validate();
  configs.pso.validate();
}

ExperimentPlan default_plan() {
  ExperimentPlan plan;
  plan.planners.assign(std::begin(kAllPlanners), std::end(kAllPlanners));

  auto make = [](int id, double size, double density, double climb, double range) {
    ScenarioSpec s;
    s.scenario_id = id;
    s.map_width = size;
    s.map_depth = size;
    s.obstacle_density = density;
    s.max_building_height = 120.0;
    s.max_range = range;
    s.max_altitude_delta = climb;
    const double half = 0.4 * range;
    s.start = {size / 2 - half, size / 2, 25.0};
    s.goal = {size / 2 + half, size / 2, 25.0 + climb};
    s.seed = static_cast<std::uint64_t>(id);
    return s;
  };
  // Experiment 1: obstacle density. Experiment 2: map size (the 2 km map gets
  // the 400 m range). Experiment 3: altitude difference between endpoints.
  plan.scenarios = {
      make(1, 1000.0, 0.60, 0.0, 200.0), make(2, 1000.0, 0.10, 0.0, 200.0),
      make(3, 2000.0, 0.30, 0.0, 400.0), make(4, 1000.0, 0.30, 0.0, 200.0),
      make(5, 1000.0, 0.30, 30.0, 200.0), make(6, 1000.0, 0.30, 0.0, 200.0),
  };
  return plan;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int scenario_id, Planner planner, std::size_t trial) {
  return derive_seed(base_seed, 0x5eedULL, static_cast<std::uint64_t>(scenario_id),
                     static_cast<std::uint64_t>(planner), static_cast<std::uint64_t>(trial));
}

std::uint64_t city_seed(std::uint64_t base_seed, int scenario_id, std::size_t trial) {
  return derive_seed(base_seed, 0xc17fULL, static_cast<std::uint64_t>(scenario_id),
                     static_cast<std::uint64_t>(trial));
}

TrialWorld make_trial_world(const ExperimentPlan& plan, const ScenarioSpec& scenario, std::size_t trial) {
  const std::uint64_t seed = city_seed(plan.base_seed, scenario.scenario_id, trial);
  Rng rng(seed);
  ScenarioSpec spec = scenario;

  const double res = plan.configs.astar.resolution;
  const double climb = scenario.goal.z - scenario.start.z;
  const double reach = plan.endpoint_range_fraction * scenario.max_range;
  const double horizontal = std::sqrt(std::max(0.0, reach * reach - climb * climb));
  const double border = std::min({50.0, scenario.map_width / 4, scenario.map_depth / 4});
  auto lattice = [res](double v) { return (std::floor(v / res) + 0.5) * res; };
  auto inside = [&](double x, double y) {
    return x >= border && x <= scenario.map_width - border && y >= border && y <= scenario.map_depth - border;
  };

  bool placed = false;
  for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
    const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double sx = rng.uniform(border, scenario.map_width - border);
    const double sy = rng.uniform(border, scenario.map_depth - border);
    const double gx = sx + horizontal * std::cos(heading);
    const double gy = sy + horizontal * std::sin(heading);
    const Vec3 start{lattice(sx), lattice(sy), scenario.start.z};
    const Vec3 goal{lattice(gx), lattice(gy), scenario.goal.z};
    if (!inside(start.x, start.y) || !inside(goal.x, goal.y) || start == goal) continue;
    spec.start = start;
    spec.goal = goal;
    placed = true;
  }
  // Fall back to the scenario's own endpoints on pathological maps.

  for (std::size_t redraw = 0;; ++redraw) {
    spec.seed = derive_seed(seed, static_cast<std::uint64_t>(redraw));
    CityMap map = generate_city(spec);
    if (redraw >= plan.line_of_sight_redraws || !map.is_segment_free(spec.start, spec.goal)) {
      return {spec, std::move(map)};
    }
  }
}

metrics::ConstraintSet constraints_for(const ScenarioSpec& spec) {
  metrics::ConstraintSet c;
  c.max_range = spec.max_range;
  return c;
}

PlanResult run_planner(Planner planner, const CityMap& map, const Vec3& start, const Vec3& goal,
                       const PlannerConfigs& configs, std::uint64_t seed,
                       const metrics::ConstraintSet& constraints) {
  switch (planner) {
    case Planner::AStar:
      return astar::plan_astar(map, start, goal, configs.astar).plan;
    case Planner::RrtStar: {
      rrt::RrtConfig cfg = configs.rrt;
      cfg.seed = seed;
      return rrt::plan_rrtstar(map, start, goal, cfg).plan;
    }
    case Planner::Pso: {
      pso::PsoConfig cfg = configs.pso;
      cfg.seed = seed;
      return pso::plan_pso(map, start, goal, cfg, constraints).plan;
    }
  }
  return {};
}

namespace {

const ScenarioSpec& scenario_by_id(const ExperimentPlan& plan, int id) {
  for (const auto& s : plan.scenarios) {
    if (s.scenario_id == id) return s;
  }
  throw std::invalid_argument("scenario " + std::to_string(id) + " is not in the plan");
}

void for_each_parallel(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ResultTable run(const ExperimentPlan& plan, const RunOptions& options) {
  plan.validate();
  const std::size_t n_scen = plan.scenarios.size();
  const std::size_t n_plan = plan.planners.size();
  const std::size_t n_trial = plan.trials_per_cell;

  std::vector<std::optional<TrialWorld>> worlds(n_scen * n_trial);
  for_each_parallel(worlds.size(), options.jobs, [&](std::size_t w) {
    worlds[w] = make_trial_world(plan, plan.scenarios[w / n_trial], w % n_trial);
  });

  ResultTable table;
  table.rows.resize(n_scen * n_plan * n_trial);
  std::mutex log_mutex;
  for_each_parallel(table.rows.size(), options.jobs, [&](std::size_t idx) {
    const std::size_t s = idx / (n_plan * n_trial);
    const std::size_t p = (idx / n_trial) % n_plan;
    const std::size_t t = idx % n_trial;
    const TrialWorld& world = *worlds[s * n_trial + t];
    const Planner planner = plan.planners[p];

    ResultRow& row = table.rows[idx];
    row.scenario_id = world.spec.scenario_id;
    row.planner = planner;
    row.trial = t;
    row.seed = trial_seed(plan.base_seed, row.scenario_id, planner, t);

    const auto constraints = constraints_for(world.spec);
    auto [result, seconds] = metrics::timed([&] {
      return run_planner(planner, world.map, world.spec.start, world.spec.goal, plan.configs, row.seed,
                         constraints);
    });
    row.status = result.status;
    row.path = std::move(result.path);
    if (!row.path.empty() &&
        (row.status == PlanStatus::Success || row.status == PlanStatus::NoFeasiblePath)) {
      metrics::MetricsRecord rec = metrics::validate(row.path, world.map, constraints);
      rec.planning_time = seconds;
      row.feasible = row.status == PlanStatus::Success && !rec.has(metrics::Violation::Clearance);
      row.metrics = std::move(rec);
    }

    if (options.log) {
      std::lock_guard lock(log_mutex);
      *options.log << "scenario " << row.scenario_id << " " << to_string(planner) << " trial " << t << ": "
                   << skybench::to_string(row.status);
      if (row.metrics) {
        *options.log << " length=" << row.metrics->path_length << " turning=" << row.metrics->turning_sum
                     << " time=" << row.metrics->planning_time;
      }
      *options.log << '\n';
    }
  });
  return table;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double percent_difference(double a, double b) {
  if (a == b) return 0.0;
  return (b - a) / b * 100.0;
}

namespace {

MetricStats describe(const std::vector<double>& v) {
  MetricStats s;
  s.median = median(v);
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

int planner_rank(Planner p) { return static_cast<int>(p); }

}  // namespace

const CellSummary& Summary::cell(int scenario_id, Planner planner) const {
  for (const auto& c : cells) {
    if (c.scenario_id == scenario_id && c.planner == planner) return c;
  }
  throw std::out_of_range("no summary cell for scenario " + std::to_string(scenario_id) + " / " +
                          std::string(to_string(planner)));
}

const MetricStats& Summary::stats(int scenario_id, Planner planner, Metric metric) const {
  const CellSummary& c = cell(scenario_id, planner);
  const std::optional<MetricStats>* s = nullptr;
  switch (metric) {
    case Metric::PathLength: s = &c.length; break;
    case Metric::TurningSum: s = &c.turning; break;
    case Metric::PlanningTime: s = &c.time; break;
  }
  if (!s || !*s) {
    throw AllInfeasible("no feasible trials for scenario " + std::to_string(scenario_id) + " / " +
                        std::string(to_string(planner)));
  }
  return **s;
}

Summary aggregate(const ResultTable& table) {
  if (table.rows.empty()) return {};
  struct Acc {
    std::size_t trials = 0;
    std::vector<double> length, turning, time;
  };
  std::map<std::pair<int, int>, Acc> acc;
  for (const auto& row : table.rows) {
    Acc& a = acc[{row.scenario_id, planner_rank(row.planner)}];
    ++a.trials;
    if (row.feasible && row.metrics) {
      a.length.push_back(row.metrics->path_length);
      a.turning.push_back(row.metrics->turning_sum);
      a.time.push_back(row.metrics->planning_time);
    }
  }

  Summary out;
  for (const auto& [key, a] : acc) {
    CellSummary c;
    c.scenario_id = key.first;
    c.planner = static_cast<Planner>(key.second);
    c.n_trials = a.trials;
    c.n_feasible = a.length.size();
    c.feasibility_rate = static_cast<double>(c.n_feasible) / static_cast<double>(c.n_trials);
    if (c.n_feasible > 0) {
      c.length = describe(a.length);
      c.turning = describe(a.turning);
      c.time = describe(a.time);
    }
    out.cells.push_back(c);
  }

  for (const auto& ca : out.cells) {
    for (const auto& cb : out.cells) {
      if (ca.scenario_id != cb.scenario_id || ca.planner == cb.planner) continue;
      if (!ca.length || !cb.length) continue;
      out.diffs.push_back({ca.scenario_id, Metric::PathLength, ca.planner, cb.planner,
                           percent_difference(ca.length->median, cb.length->median)});
      out.diffs.push_back({ca.scenario_id, Metric::TurningSum, ca.planner, cb.planner,
                           percent_difference(ca.turning->median, cb.turning->median)});
      out.diffs.push_back({ca.scenario_id, Metric::PlanningTime, ca.planner, cb.planner,
                           percent_difference(ca.time->median, cb.time->median)});
    }
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

constexpr const char* kRowsHeader =
    "scenario_id,planner,trial,seed,feasible,path_length_m,turning_sum_rad,planning_time_s,"
    "min_clearance_m,violations";
constexpr const char* kSummaryHeader =
    "scenario_id,planner,n_feasible,median_length_m,mean_length_m,std_length_m,median_turning_rad,"
    "median_time_s,feasibility_rate";

}  // namespace

std::vector<fs::path> emit_csv(const ResultTable& table, const Summary& summary, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream rows;
  rows << kRowsHeader << '\n';
  for (const auto& r : table.rows) {
    rows << r.scenario_id << ',' << to_string(r.planner) << ',' << r.trial << ',' << r.seed << ','
         << (r.feasible ? "true" : "false") << ',';
    if (r.metrics) {
      const auto& m = *r.metrics;
      rows << fmt(m.path_length) << ',' << fmt(m.turning_sum) << ',' << fmt(m.planning_time) << ','
           << fmt(m.min_clearance) << ',';
      for (std::size_t i = 0; i < m.violations.size(); ++i) {
        if (i) rows << ';';
        rows << metrics::to_string(m.violations[i]);
      }
    } else {
      rows << ",,,,";
    }
    rows << '\n';
  }

  std::ostringstream sum;
  sum << kSummaryHeader << '\n';
  for (const auto& c : summary.cells) {
    sum << c.scenario_id << ',' << to_string(c.planner) << ',' << c.n_feasible << ',';
    if (c.length) {
      sum << fmt(c.length->median) << ',' << fmt(c.length->mean) << ',' << fmt(c.length->stddev) << ','
          << fmt(c.turning->median) << ',' << fmt(c.time->median) << ',';
    } else {
      sum << ",,,,,";
    }
    sum << fmt(c.feasibility_rate) << '\n';
  }

  const fs::path rows_path = dir / "rows.csv";
  const fs::path summary_path = dir / "summary.csv";
  write_file(rows_path, rows.str());
  write_file(summary_path, sum.str());
  return {rows_path, summary_path};
}

ResultTable read_rows_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kRowsHeader) {
    throw std::invalid_argument("'" + file.string() + "' does not have the rows.csv header");
  }
  ResultTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw std::invalid_argument("rows.csv line has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.scenario_id = parse_int<int>(f[0]);
    const auto planner = parse_planner(f[1]);
    if (!planner) throw std::invalid_argument("unknown planner '" + f[1] + "'");
    r.planner = *planner;
    r.trial = parse_int<std::size_t>(f[2]);
    r.seed = parse_int<std::uint64_t>(f[3]);
    r.feasible = f[4] == "true";
    if (!f[5].empty()) {
      metrics::MetricsRecord m;
      m.path_length = parse_double(f[5]);
      m.turning_sum = parse_double(f[6]);
      m.planning_time = parse_double(f[7]);
      m.min_clearance = parse_double(f[8]);
      if (!f[9].empty()) {
        for (const auto& name : split(f[9], ';')) {
          bool known = false;
          for (auto v : {metrics::Violation::Clearance, metrics::Violation::SharpTurn,
                         metrics::Violation::RangeExceeded, metrics::Violation::AltitudeDelta}) {
            if (metrics::to_string(v) == name) {
              m.violations.push_back(v);
              known = true;
            }
          }
          if (!known) throw std::invalid_argument("unknown violation '" + name + "'");
        }
      }
      r.metrics = std::move(m);
      r.status = PlanStatus::Success;
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

void replay_first_trials(ResultTable& table, const ExperimentPlan& plan) {
  for (auto& row : table.rows) {
    if (row.trial != 0) continue;
    const TrialWorld world = make_trial_world(plan, scenario_by_id(plan, row.scenario_id), 0);
    PlanResult result = run_planner(row.planner, world.map, world.spec.start, world.spec.goal, plan.configs,
                                    row.seed, constraints_for(world.spec));
    row.status = result.status;
    row.path = std::move(result.path);
  }
}

namespace {

std::string_view planner_color(Planner p) {
  switch (p) {
    case Planner::AStar: return "#d62728";
    case Planner::RrtStar: return "#1f77b4";
    case Planner::Pso: return "#2ca02c";
  }
  return "#000000";
}

std::string_view planner_label(Planner p) {
  switch (p) {
    case Planner::AStar: return "A*";
    case Planner::RrtStar: return "RRT*";
    case Planner::Pso: return "PSO";
  }
  return "?";
}

fs::path scenario_figure(const ResultTable& table, const ExperimentPlan& plan, const ScenarioSpec& scenario,
                         const fs::path& dir) {
  const TrialWorld world = make_trial_world(plan, scenario, 0);
  const CityMap& map = world.map;

  std::vector<const ResultRow*> shown;
  for (const auto& row : table.rows) {
    if (row.scenario_id == scenario.scenario_id && row.trial == 0 && row.feasible && !row.path.empty()) {
      shown.push_back(&row);
    }
  }

  // View: endpoints and drawn paths with 100 m of context, clipped to the map.
  Aabb view{world.spec.start, world.spec.start};
  auto grow = [&](const Vec3& p) {
    view.min = {std::min(view.min.x, p.x), std::min(view.min.y, p.y), 0.0};
    view.max = {std::max(view.max.x, p.x), std::max(view.max.y, p.y), 0.0};
  };
  grow(world.spec.goal);
  for (const auto* row : shown) {
    for (const auto& p : row->path.waypoints) grow(p);
  }
  const double pad = 100.0;
  view.min = {std::max(map.bounds_min().x, view.min.x - pad), std::max(map.bounds_min().y, view.min.y - pad), 0.0};
  view.max = {std::min(map.bounds_max().x, view.max.x + pad), std::min(map.bounds_max().y, view.max.y + pad), 0.0};

  const double plot = 560.0;
  const double span = std::max(view.max.x - view.min.x, view.max.y - view.min.y);
  const double scale = plot / span;
  const double left = 20.0, top = 50.0;
  auto px = [&](double x) { return left + (x - view.min.x) * scale; };
  auto py = [&](double y) { return top + (view.max.y - y) * scale; };

  svg::Document doc(plot + 2 * left, plot + top + 70.0);
  std::ostringstream title;
  title << "Scenario " << scenario.scenario_id << ": " << scenario.map_width << " x " << scenario.map_depth
        << " m, density " << scenario.obstacle_density << ", climb " << (world.spec.goal.z - world.spec.start.z)
        << " m (trial 0, top-down)";
  doc.title(title.str());
  doc.text(left, 24.0, title.str(), 14.0);
  doc.text(left, 40.0, "Endpoints placed 80% of max range apart; shading darkens with building height", 10.0);
  doc.rect(px(view.min.x), py(view.max.y), (view.max.x - view.min.x) * scale, (view.max.y - view.min.y) * scale,
           "#ffffff", "#444444");

  for (const auto& o : map.obstacles()) {
    const double x0 = std::max(o.min_corner.x, view.min.x), x1 = std::min(o.max_corner.x, view.max.x);
    const double y0 = std::max(o.min_corner.y, view.min.y), y1 = std::min(o.max_corner.y, view.max.y);
    if (x0 >= x1 || y0 >= y1) continue;
    const double shade = std::clamp(o.max_corner.z / map.bounds_max().z, 0.0, 1.0);
    doc.rect(px(x0), py(y1), (x1 - x0) * scale, (y1 - y0) * scale, "#555555", "none", 0.15 + 0.6 * shade);
  }

  double legend_y = top + plot + 22.0;
  double legend_x = left;
  for (const auto* row : shown) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : row->path.waypoints) pts.emplace_back(px(p.x), py(p.y));
    doc.polyline(pts, planner_color(row->planner), 2.0);
    doc.line(legend_x, legend_y - 4.0, legend_x + 24.0, legend_y - 4.0, planner_color(row->planner), 3.0);
    doc.text(legend_x + 30.0, legend_y, planner_label(row->planner), 12.0);
    legend_x += 110.0;
  }
  doc.circle(px(world.spec.start.x), py(world.spec.start.y), 5.0, "#000000");
  doc.circle(px(world.spec.goal.x), py(world.spec.goal.y), 5.0, "#ff7f0e");
  doc.text(left, legend_y + 22.0, "black dot: start, orange dot: goal", 10.0);

  const fs::path out = dir / ("scenario_" + std::to_string(scenario.scenario_id) + ".svg");
  doc.save(out.string());
  return out;
}

double nice_ceiling(double v) {
  if (!(v > 0.0)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (step * mag >= v) return step * mag;
  }
  return 10.0 * mag;
}

fs::path metric_figure(const Summary& summary, const ExperimentPlan& plan, Metric metric, const fs::path& dir) {
  std::string_view unit = metric == Metric::PathLength ? "m" : (metric == Metric::TurningSum ? "rad" : "s");
  std::map<std::pair<int, int>, double> value;
  double vmax = 0.0;
  for (const auto& s : plan.scenarios) {
    for (Planner p : plan.planners) {
      try {
        const double v = summary.stats(s.scenario_id, p, metric).median;
        value[{s.scenario_id, static_cast<int>(p)}] = v;
        vmax = std::max(vmax, v);
      } catch (const std::exception&) {
        // no feasible trials or planner absent: no bar
      }
    }
  }
  const double ymax = nice_ceiling(vmax);

  const double left = 70.0, top = 50.0, plot_w = 600.0, plot_h = 320.0;
  svg::Document doc(left + plot_w + 30.0, top + plot_h + 80.0);
  const std::string title = "Median " + std::string(to_string(metric)) + " (" + std::string(unit) + ") per scenario";
  doc.title(title);
  doc.text(left, 28.0, title, 14.0);
  doc.line(left, top, left, top + plot_h, "#000000");
  doc.line(left, top + plot_h, left + plot_w, top + plot_h, "#000000");
  for (int tick = 0; tick <= 5; ++tick) {
    const double v = ymax * tick / 5.0;
    const double y = top + plot_h - plot_h * tick / 5.0;
    doc.line(left - 4.0, y, left, y, "#000000");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    doc.text(left - 8.0, y + 4.0, buf, 10.0, "end");
  }

  const double group_w = plot_w / static_cast<double>(plan.scenarios.size());
  const double bar_w = group_w * 0.8 / static_cast<double>(plan.planners.size());
  for (std::size_t g = 0; g < plan.scenarios.size(); ++g) {
    const int id = plan.scenarios[g].scenario_id;
    const double gx = left + g * group_w + group_w * 0.1;
    for (std::size_t b = 0; b < plan.planners.size(); ++b) {
      const Planner p = plan.planners[b];
      auto it = value.find({id, static_cast<int>(p)});
      if (it == value.end()) continue;
      const double h = plot_h * it->second / ymax;
      doc.rect(gx + b * bar_w, top + plot_h - h, bar_w * 0.9, h, planner_color(p));
    }
    doc.text(left + (g + 0.5) * group_w, top + plot_h + 16.0, "S" + std::to_string(id), 11.0, "middle");
  }
  double lx = left;
  for (Planner p : plan.planners) {
    doc.rect(lx, top + plot_h + 36.0, 12.0, 12.0, planner_color(p));
    doc.text(lx + 18.0, top + plot_h + 46.0, planner_label(p), 12.0);
    lx += 100.0;
  }

  const fs::path out = dir / ("metrics_" + std::string(to_string(metric)) + ".svg");
  doc.save(out.string());
  return out;
}

}  // namespace

std::vector<fs::path> emit_figures(const ResultTable& table, const ExperimentPlan& plan, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> out;
  for (const auto& s : plan.scenarios) out.push_back(scenario_figure(table, plan, s, dir));
  const Summary summary = aggregate(table);
  for (Metric m : {Metric::PathLength, Metric::TurningSum, Metric::PlanningTime}) {
    out.push_back(metric_figure(summary, plan, m, dir));
  }
  return out;
}

}  // namespace skybench::bench
