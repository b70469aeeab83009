#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skybench/env.hpp"
#include "skybench/metrics.hpp"
#include "skybench/planning.hpp"
#include "skybench/rng.hpp"

namespace skybench::pso {

struct Penalties {
  double collision = 1e4;  // per colliding segment
  double sharp_turn = 1e2;  // per vertex with interior angle below the limit
  double range = 1e1;       // per meter beyond max_range
};

struct PsoConfig {
  std::size_t population = 150;
  std::size_t iterations = 200;
  double c1 = 1.9;  // cognitive (pbest) factor
  double c2 = 1.9;  // social (gbest) factor
  double inertia = 0.7;
  /// Per-dimension velocity limit; <= 0 selects 10% of the map diagonal.
  double v_max = 0.0;
  std::size_t waypoints = 5;  // interior waypoints K; the search space is R^{3K}
  std::uint64_t seed = 0;
  Penalties penalties;

  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> pbest_position;
  double pbest_fitness = 0.0;
};

struct SwarmState {
  std::vector<Particle> particles;
  std::vector<double> gbest_position;
  double gbest_fitness = 0.0;
  std::size_t iteration = 0;
};

/// [start, w_1 .. w_K, goal] with each w clamped into `bounds`.
Path decode(std::span<const double> position, const Vec3& start, const Vec3& goal, const Aabb& bounds);

/// Interior waypoints of `path` flattened as x, y, z triples.
std::vector<double> flatten_interior(const Path& path);

struct FitnessTerms {
  double length = 0.0;
  std::size_t colliding_segments = 0;
  std::size_t sharp_vertices = 0;
  double range_excess = 0.0;
};

FitnessTerms fitness_terms(const Path& path, const CityMap& map, const metrics::ConstraintSet& constraints);

/// length + P_col * collisions + P_turn * sharp vertices + P_range * meters over range.
double fitness(const Path& path, const CityMap& map, const metrics::ConstraintSet& constraints,
               const Penalties& penalties = {});

/// v' = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), clamped to +-v_max.
std::vector<double> update_velocity(const Particle& particle, std::span<const double> gbest,
                                    const PsoConfig& config, std::span<const double> r1,
                                    std::span<const double> r2, double v_max);

/// x' = x + v', clamped to [lower, upper]; clamped dimensions get zero velocity.
/// Updates the particle in place and returns the new position.
std::vector<double> update_position(Particle& particle, std::span<const double> lower,
                                    std::span<const double> upper);

/// Swarm over the waypoint encoding. Particle 0 starts on the straight line
/// start->goal, the others uniformly in bounds; velocities start at zero.
class Swarm {
 public:
  Swarm(const CityMap& map, const Vec3& start, const Vec3& goal, const PsoConfig& config,
        const metrics::ConstraintSet& constraints);

  /// One synchronous update of every particle, then the gbest refresh.
  void step();

  const SwarmState& state() const { return state_; }
  double v_max() const { return v_max_; }
  Path best_path() const;
  std::size_t evaluations() const { return evaluations_; }

 private:
  double evaluate(std::span<const double> position);

  const CityMap& map_;
  Vec3 start_, goal_;
  PsoConfig config_;
  metrics::ConstraintSet constraints_;
  Rng rng_;
  std::vector<double> lower_, upper_;
  double v_max_;
  SwarmState state_;
  std::size_t evaluations_ = 0;
};

struct PsoResult {
  PlanResult plan;
  double gbest_fitness = 0.0;
};

/// Runs config.iterations swarm updates and returns the decoded gbest.
/// stats.cost_history holds gbest fitness after each iteration. A gbest that
/// still collides is returned with status NoFeasiblePath.
PsoResult plan_pso(const CityMap& map, const Vec3& start, const Vec3& goal, const PsoConfig& config = {},
                   const metrics::ConstraintSet& constraints = {});

}  // namespace skybench::pso
