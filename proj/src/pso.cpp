#include "skybench/pso.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace skybench::pso {

void PsoConfig::validate() const {
  if (population < 2) throw std::invalid_argument("population must be >= 2");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw std::invalid_argument("c1 and c2 must be >= 0");
  if (!(inertia > 0.0 && inertia <= 1.0)) throw std::invalid_argument("inertia must lie in (0, 1]");
  if (waypoints < 1) throw std::invalid_argument("waypoint count K must be >= 1");
}

Path decode(std::span<const double> position, const Vec3& start, const Vec3& goal, const Aabb& bounds) {
  if (position.size() % 3 != 0 || position.empty()) {
    throw std::invalid_argument("particle dimension must be a positive multiple of 3");
  }
  Path path;
  path.waypoints.reserve(position.size() / 3 + 2);
  path.waypoints.push_back(start);
  for (std::size_t i = 0; i < position.size(); i += 3) {
    path.waypoints.push_back(bounds.clamp({position[i], position[i + 1], position[i + 2]}));
  }
  path.waypoints.push_back(goal);
  return path;
}

std::vector<double> flatten_interior(const Path& path) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < path.waypoints.size(); ++i) {
    const Vec3& w = path.waypoints[i];
    out.insert(out.end(), {w.x, w.y, w.z});
  }
  return out;
}

FitnessTerms fitness_terms(const Path& path, const CityMap& map, const metrics::ConstraintSet& constraints) {
  FitnessTerms t;
  const auto& w = path.waypoints;
  for (std::size_t i = 1; i < w.size(); ++i) {
    t.length += distance(w[i - 1], w[i]);
    if (!map.is_segment_free(w[i - 1], w[i])) ++t.colliding_segments;
  }
  const Path turns = metrics::collapse_duplicates(path);
  for (std::size_t v = 1; v + 1 < turns.size(); ++v) {
    if (metrics::is_sharp_turn(metrics::interior_angle(turns, v), constraints.sharp_turn_min_angle)) {
      ++t.sharp_vertices;
    }
  }
  t.range_excess = std::max(0.0, t.length - constraints.max_range);
  return t;
}

double fitness(const Path& path, const CityMap& map, const metrics::ConstraintSet& constraints,
               const Penalties& penalties) {
  if (path.size() < 2) throw std::invalid_argument("fitness needs at least two waypoints");
  const FitnessTerms t = fitness_terms(path, map, constraints);
  return t.length + penalties.collision * static_cast<double>(t.colliding_segments) +
         penalties.sharp_turn * static_cast<double>(t.sharp_vertices) + penalties.range * t.range_excess;
}

std::vector<double> update_velocity(const Particle& particle, std::span<const double> gbest,
                                    const PsoConfig& config, std::span<const double> r1,
                                    std::span<const double> r2, double v_max) {
  const std::size_t n = particle.position.size();
  std::vector<double> v(n);
  for (std::size_t d = 0; d < n; ++d) {
    const double x = particle.position[d];
    const double next = config.inertia * particle.velocity[d] +
                        config.c1 * r1[d] * (particle.pbest_position[d] - x) +
                        config.c2 * r2[d] * (gbest[d] - x);
    v[d] = std::clamp(next, -v_max, v_max);
  }
  return v;
}

std::vector<double> update_position(Particle& particle, std::span<const double> lower,
                                    std::span<const double> upper) {
  for (std::size_t d = 0; d < particle.position.size(); ++d) {
    const double x = particle.position[d] + particle.velocity[d];
    if (x < lower[d] || x > upper[d]) {
      particle.position[d] = std::clamp(x, lower[d], upper[d]);
      particle.velocity[d] = 0.0;
    } else {
      particle.position[d] = x;
    }
  }
  return particle.position;
}

Swarm::Swarm(const CityMap& map, const Vec3& start, const Vec3& goal, const PsoConfig& config,
             const metrics::ConstraintSet& constraints)
    : map_(map), start_(start), goal_(goal), config_(config), constraints_(constraints), rng_(config.seed) {
  config_.validate();
  const std::size_t dims = 3 * config_.waypoints;
  const Aabb& b = map_.bounds();
  for (std::size_t d = 0; d < dims; ++d) {
    lower_.push_back(b.min[static_cast<int>(d % 3)]);
    upper_.push_back(b.max[static_cast<int>(d % 3)]);
  }
  v_max_ = config_.v_max > 0.0 ? config_.v_max : 0.1 * norm(b.extent());

  state_.particles.resize(config_.population);
  for (std::size_t i = 0; i < config_.population; ++i) {
    Particle& p = state_.particles[i];
    p.position.resize(dims);
    p.velocity.assign(dims, 0.0);
    if (i == 0) {
      const double segments = static_cast<double>(config_.waypoints + 1);
      for (std::size_t k = 0; k < config_.waypoints; ++k) {
        const Vec3 w = start_ + (static_cast<double>(k + 1) / segments) * (goal_ - start_);
        for (int a = 0; a < 3; ++a) p.position[3 * k + a] = w[a];
      }
    } else {
      for (std::size_t d = 0; d < dims; ++d) p.position[d] = rng_.uniform(lower_[d], upper_[d]);
    }
    p.pbest_position = p.position;
    p.pbest_fitness = evaluate(p.position);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < state_.particles.size(); ++i) {
    if (state_.particles[i].pbest_fitness < state_.particles[best].pbest_fitness) best = i;
  }
  state_.gbest_position = state_.particles[best].pbest_position;
  state_.gbest_fitness = state_.particles[best].pbest_fitness;
}

double Swarm::evaluate(std::span<const double> position) {
  ++evaluations_;
  return fitness(decode(position, start_, goal_, map_.bounds()), map_, constraints_, config_.penalties);
}

void Swarm::step() {
  const std::size_t dims = lower_.size();
  std::vector<double> r1(dims), r2(dims);
  for (Particle& p : state_.particles) {
    for (std::size_t d = 0; d < dims; ++d) {
      r1[d] = rng_.uniform();
      r2[d] = rng_.uniform();
    }
    p.velocity = update_velocity(p, state_.gbest_position, config_, r1, r2, v_max_);
    update_position(p, lower_, upper_);
    const double f = evaluate(p.position);
    if (f < p.pbest_fitness) {
      p.pbest_fitness = f;
      p.pbest_position = p.position;
    }
  }
  // gbest moves only after every particle has used the previous one.
  for (const Particle& p : state_.particles) {
    if (p.pbest_fitness < state_.gbest_fitness) {
      state_.gbest_fitness = p.pbest_fitness;
      state_.gbest_position = p.pbest_position;
    }
  }
  ++state_.iteration;
}

Path Swarm::best_path() const { return decode(state_.gbest_position, start_, goal_, map_.bounds()); }

PsoResult plan_pso(const CityMap& map, const Vec3& start, const Vec3& goal, const PsoConfig& config,
                   const metrics::ConstraintSet& constraints) {
  config.validate();
  PsoResult out;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](PlanStatus status) {
    out.plan.status = status;
    out.plan.stats.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  };
  if (!map.is_point_free(start)) return finish(PlanStatus::StartBlocked);
  if (!map.is_point_free(goal)) return finish(PlanStatus::GoalBlocked);

  Swarm swarm(map, start, goal, config, constraints);
  out.plan.stats.cost_history.reserve(config.iterations);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    swarm.step();
    out.plan.stats.cost_history.push_back(swarm.state().gbest_fitness);
  }
  out.plan.stats.nodes_expanded = swarm.evaluations();
  out.plan.stats.open_peak = config.population;
  out.plan.path = metrics::collapse_duplicates(swarm.best_path());
  out.gbest_fitness = swarm.state().gbest_fitness;

  const FitnessTerms terms = fitness_terms(out.plan.path, map, constraints);
  return finish(terms.colliding_segments > 0 ? PlanStatus::NoFeasiblePath : PlanStatus::Success);
}

}  // namespace skybench::pso
