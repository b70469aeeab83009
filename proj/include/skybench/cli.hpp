#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skybench/bench.hpp"

namespace skybench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoPath = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitBadConfig = 5;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help / --version; carries the text to print and exit 0 with.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { Generate, Plan, Bench, Figures };

struct CliInvocation {
  Subcommand subcommand = Subcommand::Bench;
  std::optional<std::filesystem::path> scenario_file;
  std::optional<int> default_scenario;  // one of the built-in scenario ids
  std::optional<std::filesystem::path> map_file;
  std::vector<bench::Planner> planners;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir;
  std::vector<std::pair<std::string, std::string>> overrides;  // applied in order
  std::size_t jobs = 1;
  std::optional<std::size_t> trials;
  std::optional<std::filesystem::path> rows_file;
};

/// args excludes the program name. The output directory falls back to
/// env_out (normally $SKYBENCH_OUT). Throws UsageError or HelpRequested.
CliInvocation parse_args(const std::vector<std::string>& args, const std::optional<std::string>& env_out);
CliInvocation parse_args(const std::vector<std::string>& args);

/// Override keys: scenario.<field> (or the bare field name), astar.*, rrt.*,
/// pso.*, pso.penalties.*, bench.*. Null targets are skipped. Throws
/// UsageError for an unknown key or a value that does not parse.
void apply_override(const std::string& key, const std::string& value, ScenarioSpec* scenario,
                    bench::PlannerConfigs* configs, bench::ExperimentPlan* plan);
std::vector<std::string> override_keys();

bench::PlannerConfigs planner_configs(const CliInvocation& inv);
/// default_plan with seed, trials, planners and overrides applied.
bench::ExperimentPlan experiment_plan(const CliInvocation& inv);

/// Executes a parsed invocation; diagnostics go to err. Returns an exit code.
int run(const CliInvocation& inv, std::ostream& err);

/// parse_args + run with the documented exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skybench::cli
