#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skybench/astar.hpp"
#include "skybench/env.hpp"
#include "skybench/metrics.hpp"
#include "skybench/pso.hpp"
#include "skybench/rrt_star.hpp"

namespace skybench::bench {

enum class Planner { AStar, RrtStar, Pso };

inline constexpr Planner kAllPlanners[] = {Planner::AStar, Planner::RrtStar, Planner::Pso};

std::string_view to_string(Planner p);
/// Lowercase tokens: astar, rrtstar, pso.
std::optional<Planner> parse_planner(std::string_view name);

struct PlannerConfigs {
  astar::AStarConfig astar;
  rrt::RrtConfig rrt;
  pso::PsoConfig pso;
};

struct ExperimentPlan {
  std::vector<ScenarioSpec> scenarios;
  std::vector<Planner> planners;
  std::size_t trials_per_cell = 10;
  std::uint64_t base_seed = 20240601;
  PlannerConfigs configs;
  /// Start-goal distance as a fraction of the scenario's max_range.
  double endpoint_range_fraction = 0.8;
  /// Redraw the city (up to this many times) while the straight start-goal
  /// segment is already collision-free. 0 accepts the first city.
  std::size_t line_of_sight_redraws = 0;

  void validate() const;
};

/// The six scenarios: density 60% / 10%, 2 km / 1 km map, 30 m / 0 m climb.
ExperimentPlan default_plan();

/// Stable per-run seed; drives the stochastic planners.
std::uint64_t trial_seed(std::uint64_t base_seed, int scenario_id, Planner planner, std::size_t trial);
/// Stable per-trial seed shared by all planners; drives endpoints and city.
std::uint64_t city_seed(std::uint64_t base_seed, int scenario_id, std::size_t trial);

struct TrialWorld {
  ScenarioSpec spec;  // endpoints and seed actually used
  CityMap map;
};

/// Endpoints sampled on the A* lattice at the scenario's climb and at
/// endpoint_range_fraction * max_range apart, then the city built around them.
TrialWorld make_trial_world(const ExperimentPlan& plan, const ScenarioSpec& scenario, std::size_t trial);

metrics::ConstraintSet constraints_for(const ScenarioSpec& spec);

PlanResult run_planner(Planner planner, const CityMap& map, const Vec3& start, const Vec3& goal,
                       const PlannerConfigs& configs, std::uint64_t seed,
                       const metrics::ConstraintSet& constraints);

struct ResultRow {
  int scenario_id = 0;
  Planner planner = Planner::AStar;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  PlanStatus status = PlanStatus::NoPath;
  std::optional<metrics::MetricsRecord> metrics;
  Path path;  // empty when rows are read back from CSV
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

struct RunOptions {
  std::size_t jobs = 1;
  std::ostream* log = nullptr;  // one line per cell when set
};

/// One row per (scenario, planner, trial), in that order. A row is feasible
/// when the planner returned a path that keeps the safety margin; failed runs
/// are recorded with feasible = false and no metrics.
ResultTable run(const ExperimentPlan& plan, const RunOptions& options = {});

struct MetricStats {
  double median = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one value
};

struct CellSummary {
  int scenario_id = 0;
  Planner planner = Planner::AStar;
  std::size_t n_trials = 0;
  std::size_t n_feasible = 0;
  std::optional<MetricStats> length;
  std::optional<MetricStats> turning;
  std::optional<MetricStats> time;
  double feasibility_rate = 0.0;
};

class AllInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Metric { PathLength, TurningSum, PlanningTime };
std::string_view to_string(Metric m);

struct PairwiseDiff {
  int scenario_id;
  Metric metric;
  Planner a;
  Planner b;
  double percent;  // (median_b - median_a) / median_b * 100: "a is X% lower than b"
};

struct Summary {
  std::vector<CellSummary> cells;
  std::vector<PairwiseDiff> diffs;

  const CellSummary& cell(int scenario_id, Planner planner) const;
  /// Stats of one metric; throws AllInfeasible for a cell without feasible trials.
  const MetricStats& stats(int scenario_id, Planner planner, Metric metric) const;
};

/// (b - a) / b in percent; 0 when a == b.
double percent_difference(double a, double b);

double median(std::vector<double> values);

Summary aggregate(const ResultTable& table);

/// Writes rows.csv and summary.csv; returns their paths.
std::vector<std::filesystem::path> emit_csv(const ResultTable& table, const Summary& summary,
                                            const std::filesystem::path& dir);

ResultTable read_rows_csv(const std::filesystem::path& file);

/// Re-runs trial 0 of every (scenario, planner) from its recorded seed and
/// stores the path in the row. Used when a table came back from CSV.
void replay_first_trials(ResultTable& table, const ExperimentPlan& plan);

/// scenario_<id>.svg per scenario (trial 0 map and paths, top-down) and
/// metrics_<name>.svg per metric (median bars per scenario and planner).
std::vector<std::filesystem::path> emit_figures(const ResultTable& table, const ExperimentPlan& plan,
                                                const std::filesystem::path& dir);

}  // namespace skybench::bench
