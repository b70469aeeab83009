#include "skybench/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace skybench::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw UsageError("--set " + key + ": '" + v + "' is not a number");
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw UsageError("--set " + key + ": '" + v + "' is not a non-negative integer");
  }
  return out;
}

struct Targets {
  ScenarioSpec* scenario;
  bench::PlannerConfigs* configs;
  bench::ExperimentPlan* plan;

  template <typename Fn>
  void each_scenario(Fn&& fn) const {
    if (scenario) fn(*scenario);
    if (plan) {
      for (auto& s : plan->scenarios) fn(s);
    }
  }
};

using Setter = std::function<void(const Targets&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& registry() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> r;
    auto scen_d = [&r](const std::string& name, double ScenarioSpec::*field) {
      r["scenario." + name] = [field](const Targets& t, const std::string& k, const std::string& v) {
        const double x = to_double(k, v);
        t.each_scenario([&](ScenarioSpec& s) { s.*field = x; });
      };
    };
    auto scen_v = [&r](const std::string& name, Vec3 ScenarioSpec::*point, double Vec3::*axis) {
      r["scenario." + name] = [point, axis](const Targets& t, const std::string& k, const std::string& v) {
        const double x = to_double(k, v);
        t.each_scenario([&](ScenarioSpec& s) { (s.*point).*axis = x; });
      };
    };
    scen_d("map_width", &ScenarioSpec::map_width);
    scen_d("map_depth", &ScenarioSpec::map_depth);
    scen_d("obstacle_density", &ScenarioSpec::obstacle_density);
    scen_d("max_building_height", &ScenarioSpec::max_building_height);
    scen_d("max_range", &ScenarioSpec::max_range);
    scen_d("max_altitude_delta", &ScenarioSpec::max_altitude_delta);
    scen_v("start.x", &ScenarioSpec::start, &Vec3::x);
    scen_v("start.y", &ScenarioSpec::start, &Vec3::y);
    scen_v("start.z", &ScenarioSpec::start, &Vec3::z);
    scen_v("goal.x", &ScenarioSpec::goal, &Vec3::x);
    scen_v("goal.y", &ScenarioSpec::goal, &Vec3::y);
    scen_v("goal.z", &ScenarioSpec::goal, &Vec3::z);
    r["scenario.seed"] = [](const Targets& t, const std::string& k, const std::string& v) {
      const auto x = to_int<std::uint64_t>(k, v);
      t.each_scenario([&](ScenarioSpec& s) { s.seed = x; });
    };

    auto cfg = [&r](const std::string& name, auto fn) {
      r[name] = [fn](const Targets& t, const std::string& k, const std::string& v) {
        if (t.configs) fn(*t.configs, k, v);
      };
    };
    cfg("astar.resolution", [](auto& c, auto& k, auto& v) { c.astar.resolution = to_double(k, v); });
    cfg("astar.cell_budget", [](auto& c, auto& k, auto& v) { c.astar.cell_budget = to_int<std::size_t>(k, v); });
    cfg("rrt.goal_bias", [](auto& c, auto& k, auto& v) { c.rrt.goal_bias = to_double(k, v); });
    cfg("rrt.step_size", [](auto& c, auto& k, auto& v) { c.rrt.step_size = to_double(k, v); });
    cfg("rrt.neighbor_radius", [](auto& c, auto& k, auto& v) { c.rrt.neighbor_radius = to_double(k, v); });
    cfg("rrt.max_iterations", [](auto& c, auto& k, auto& v) { c.rrt.max_iterations = to_int<std::size_t>(k, v); });
    cfg("rrt.goal_tolerance", [](auto& c, auto& k, auto& v) { c.rrt.goal_tolerance = to_double(k, v); });
    cfg("rrt.checkpoint_every", [](auto& c, auto& k, auto& v) { c.rrt.checkpoint_every = to_int<std::size_t>(k, v); });
    cfg("pso.population", [](auto& c, auto& k, auto& v) { c.pso.population = to_int<std::size_t>(k, v); });
    cfg("pso.iterations", [](auto& c, auto& k, auto& v) { c.pso.iterations = to_int<std::size_t>(k, v); });
    cfg("pso.c1", [](auto& c, auto& k, auto& v) { c.pso.c1 = to_double(k, v); });
    cfg("pso.c2", [](auto& c, auto& k, auto& v) { c.pso.c2 = to_double(k, v); });
    cfg("pso.inertia", [](auto& c, auto& k, auto& v) { c.pso.inertia = to_double(k, v); });
    cfg("pso.v_max", [](auto& c, auto& k, auto& v) { c.pso.v_max = to_double(k, v); });
    cfg("pso.waypoints", [](auto& c, auto& k, auto& v) { c.pso.waypoints = to_int<std::size_t>(k, v); });
    cfg("pso.penalties.collision", [](auto& c, auto& k, auto& v) { c.pso.penalties.collision = to_double(k, v); });
    cfg("pso.penalties.sharp_turn", [](auto& c, auto& k, auto& v) { c.pso.penalties.sharp_turn = to_double(k, v); });
    cfg("pso.penalties.range", [](auto& c, auto& k, auto& v) { c.pso.penalties.range = to_double(k, v); });

    r["bench.endpoint_range_fraction"] = [](const Targets& t, const std::string& k, const std::string& v) {
      const double x = to_double(k, v);
      if (t.plan) t.plan->endpoint_range_fraction = x;
    };
    r["bench.line_of_sight_redraws"] = [](const Targets& t, const std::string& k, const std::string& v) {
      const auto x = to_int<std::size_t>(k, v);
      if (t.plan) t.plan->line_of_sight_redraws = x;
    };
    return r;
  }();
  return table;
}

std::optional<std::string> getenv_string(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ScenarioSpec scenario_for(const CliInvocation& inv) {
  ScenarioSpec spec;
  if (inv.scenario_file) {
    spec = load_scenario(inv.scenario_file->string());
  } else {
    const auto plan = bench::default_plan();
    auto it = std::find_if(plan.scenarios.begin(), plan.scenarios.end(),
                           [&](const ScenarioSpec& s) { return s.scenario_id == *inv.default_scenario; });
    if (it == plan.scenarios.end()) {
      throw std::invalid_argument("no built-in scenario " + std::to_string(*inv.default_scenario));
    }
    spec = *it;
  }
  for (const auto& [k, v] : inv.overrides) apply_override(k, v, &spec, nullptr, nullptr);
  if (inv.seed) spec.seed = *inv.seed;
  spec.validate();
  return spec;
}

int do_generate(const CliInvocation& inv, std::ostream& err) {
  const ScenarioSpec spec = scenario_for(inv);
  const CityMap map = generate_city(spec);
  fs::create_directories(inv.output_dir);
  write_json(inv.output_dir / "city.json", json(map));
  save_scenario(spec, (inv.output_dir / "scenario.json").string());
  err << "generated " << map.obstacles().size() << " buildings, coverage " << coverage_density(map) << '\n';
  return kExitOk;
}

int do_plan(const CliInvocation& inv, std::ostream& err) {
  const ScenarioSpec spec = scenario_for(inv);
  const CityMap map = inv.map_file ? load_city(inv.map_file->string()) : generate_city(spec);
  const bench::Planner planner = inv.planners.front();
  const std::uint64_t seed = inv.seed.value_or(spec.seed);
  const auto configs = planner_configs(inv);
  const auto constraints = bench::constraints_for(spec);
  configs.rrt.validate();
  configs.pso.validate();

  auto [result, seconds] = metrics::timed(
      [&] { return bench::run_planner(planner, map, spec.start, spec.goal, configs, seed, constraints); });
  if (result.status != PlanStatus::Success) {
    err << bench::to_string(planner) << ": " << to_string(result.status) << ", no path written\n";
    return kExitNoPath;
  }
  metrics::MetricsRecord rec = metrics::validate(result.path, map, constraints);
  rec.planning_time = seconds;

  json violations = json::array();
  for (auto v : rec.violations) violations.push_back(std::string(metrics::to_string(v)));
  json doc = {
      {"planner", std::string(bench::to_string(planner))},
      {"seed", seed},
      {"start", spec.start},
      {"goal", spec.goal},
      {"waypoints", result.path.waypoints},
      {"metrics",
       {{"path_length_m", rec.path_length},
        {"turning_sum_rad", rec.turning_sum},
        {"planning_time_s", rec.planning_time},
        {"min_clearance_m", std::isfinite(rec.min_clearance) ? json(rec.min_clearance) : json("inf")},
        {"violations", violations}}},
      {"stats",
       {{"nodes_expanded", result.stats.nodes_expanded},
        {"open_peak", result.stats.open_peak},
        {"snap_distance_m", result.stats.snap_distance_m}}},
  };
  fs::create_directories(inv.output_dir);
  write_json(inv.output_dir / "path.json", doc);
  err << bench::to_string(planner) << ": length " << rec.path_length << " m, turning " << rec.turning_sum
      << " rad, " << rec.planning_time << " s\n";
  return kExitOk;
}

int do_bench(const CliInvocation& inv, std::ostream& err) {
  const auto plan = experiment_plan(inv);
  plan.validate();
  bench::RunOptions opts;
  opts.jobs = inv.jobs;
  opts.log = &err;
  const auto table = bench::run(plan, opts);
  const auto summary = bench::aggregate(table);
  auto files = bench::emit_csv(table, summary, inv.output_dir);
  for (auto& f : bench::emit_figures(table, plan, inv.output_dir)) files.push_back(f);
  err << "wrote " << files.size() << " files to " << inv.output_dir.string() << '\n';
  return kExitOk;
}

int do_figures(const CliInvocation& inv, std::ostream& err) {
  const auto plan = experiment_plan(inv);
  plan.validate();
  const fs::path rows = inv.rows_file.value_or(inv.output_dir / "rows.csv");
  auto table = bench::read_rows_csv(rows);
  if (table.rows.empty()) throw std::invalid_argument("'" + rows.string() + "' has no rows");
  bench::replay_first_trials(table, plan);
  const auto files = bench::emit_figures(table, plan, inv.output_dir);
  err << "wrote " << files.size() << " figures to " << inv.output_dir.string() << '\n';
  return kExitOk;
}

}  // namespace

void apply_override(const std::string& key, const std::string& value, ScenarioSpec* scenario,
                    bench::PlannerConfigs* configs, bench::ExperimentPlan* plan) {
  const auto& r = registry();
  auto it = r.find(key);
  if (it == r.end()) it = r.find("scenario." + key);
  if (it == r.end()) throw UsageError("--set: unknown key '" + key + "'");
  it->second(Targets{scenario, configs, plan}, key, value);
}

std::vector<std::string> override_keys() {
  std::vector<std::string> out;
  for (const auto& [k, _] : registry()) out.push_back(k);
  return out;
}

bench::PlannerConfigs planner_configs(const CliInvocation& inv) {
  bench::PlannerConfigs c;
  for (const auto& [k, v] : inv.overrides) apply_override(k, v, nullptr, &c, nullptr);
  return c;
}

bench::ExperimentPlan experiment_plan(const CliInvocation& inv) {
  auto plan = bench::default_plan();
  if (inv.seed) plan.base_seed = *inv.seed;
  if (inv.trials) plan.trials_per_cell = *inv.trials;
  if (!inv.planners.empty()) plan.planners = inv.planners;
  for (const auto& [k, v] : inv.overrides) {
    const bool scenario_key = !registry().count(k) || k.rfind("scenario.", 0) == 0;
    if (!scenario_key) {
      apply_override(k, v, nullptr, &plan.configs, &plan);
      continue;
    }
    // every scenario; start and goal are still drawn per trial
    for (auto& s : plan.scenarios) apply_override(k, v, &s, nullptr, nullptr);
  }
  return plan;
}

CliInvocation parse_args(const std::vector<std::string>& args) {
  return parse_args(args, getenv_string("SKYBENCH_OUT"));
}

CliInvocation parse_args(const std::vector<std::string>& args, const std::optional<std::string>& env_out) {
  CLI::App app{"Seeded benchmark of A*, RRT* and PSO path planners in synthetic cities", "skybench"};
  app.require_subcommand(1, 1);

  std::string scenario, map, out, rows;
  int scenario_id = 0;
  std::vector<std::string> planners, sets;
  std::uint64_t seed = 0;
  std::size_t jobs = 1, trials = 1;

  auto* gen = app.add_subcommand("generate", "Build a city for a scenario; writes city.json and scenario.json");
  auto* plan = app.add_subcommand("plan", "Run one planner; writes path.json");
  auto* bench_cmd = app.add_subcommand("bench", "Run the experiment plan; writes CSV tables and SVG figures");
  auto* figs = app.add_subcommand("figures", "Redraw the SVG figures from an existing rows.csv");

  for (auto* sub : {gen, plan, bench_cmd, figs}) {
    sub->add_option("--seed", seed, "Seed for every stochastic step (base seed for bench/figures)");
    sub->add_option("--out", out, "Output directory (default: $SKYBENCH_OUT)");
    sub->add_option("--set", sets, "key=value override, repeatable")->allow_extra_args(false);
  }
  for (auto* sub : {gen, plan}) {
    sub->add_option("--scenario", scenario, "Scenario file (JSON)");
    sub->add_option("--scenario-id", scenario_id, "Built-in scenario id instead of a file");
  }
  plan->add_option("--planner", planners, "astar, rrtstar or pso")->allow_extra_args(false);
  plan->add_option("--map", map, "Use a city.json from generate instead of building the city");
  bench_cmd->add_option("--planner", planners, "Restrict to these planners (repeatable)")->allow_extra_args(false);
  bench_cmd->add_option("--jobs", jobs, "Cells run in parallel (default 1)");
  bench_cmd->add_option("--trials", trials, "Trials per (scenario, planner) cell");
  figs->add_option("--rows", rows, "rows.csv to read (default: <out>/rows.csv)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream text;
    const int code = app.exit(e, text, text);
    if (code == 0) throw HelpRequested(text.str());
    throw UsageError(e.what());
  }

  CliInvocation inv;
  CLI::App* sub = app.get_subcommands().front();
  if (sub == gen) inv.subcommand = Subcommand::Generate;
  if (sub == plan) inv.subcommand = Subcommand::Plan;
  if (sub == bench_cmd) inv.subcommand = Subcommand::Bench;
  if (sub == figs) inv.subcommand = Subcommand::Figures;

  if (sub->count("--seed")) inv.seed = seed;
  if (sub->count("--out")) {
    inv.output_dir = out;
  } else if (env_out) {
    inv.output_dir = *env_out;
  } else {
    throw UsageError("no output directory: pass --out or set SKYBENCH_OUT");
  }
  if (inv.output_dir.empty()) throw UsageError("--out must not be empty");

  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
    inv.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  {
    // reject bad keys and unparsable values before anything runs
    ScenarioSpec s;
    bench::PlannerConfigs c;
    bench::ExperimentPlan p;
    for (const auto& [k, v] : inv.overrides) apply_override(k, v, &s, &c, &p);
  }

  for (const auto& name : planners) {
    const auto p = bench::parse_planner(name);
    if (!p) throw UsageError("unknown planner '" + name + "' (expected astar, rrtstar or pso)");
    if (std::find(inv.planners.begin(), inv.planners.end(), *p) == inv.planners.end()) inv.planners.push_back(*p);
  }

  if (inv.subcommand == Subcommand::Generate || inv.subcommand == Subcommand::Plan) {
    const bool has_file = sub->count("--scenario") > 0;
    const bool has_id = sub->count("--scenario-id") > 0;
    if (has_file == has_id) throw UsageError(sub->get_name() + " needs exactly one of --scenario or --scenario-id");
    if (has_file) inv.scenario_file = scenario;
    if (has_id) inv.default_scenario = scenario_id;
  }
  if (inv.subcommand == Subcommand::Plan) {
    if (inv.planners.size() != 1) throw UsageError("plan needs exactly one --planner");
    if (sub->count("--map")) inv.map_file = map;
  }
  if (inv.subcommand == Subcommand::Bench) {
    if (jobs < 1) throw UsageError("--jobs must be >= 1");
    inv.jobs = jobs;
    if (sub->count("--trials")) {
      if (trials < 1) throw UsageError("--trials must be >= 1");
      inv.trials = trials;
    }
  }
  if (inv.subcommand == Subcommand::Figures && sub->count("--rows")) inv.rows_file = rows;
  return inv;
}

int run(const CliInvocation& inv, std::ostream& err) {
  try {
    switch (inv.subcommand) {
      case Subcommand::Generate: return do_generate(inv, err);
      case Subcommand::Plan: return do_plan(inv, err);
      case Subcommand::Bench: return do_bench(inv, err);
      case Subcommand::Figures: return do_figures(inv, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GenerationError& e) {
    err << "bad config: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const GridBudgetError& e) {
    err << "bad config: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    err << "bad config: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::runtime_error& e) {
    // everything left in this family comes from file reads and writes
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CliInvocation inv;
  try {
    inv = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }
  return run(inv, err);
}

}  // namespace skybench::cli
