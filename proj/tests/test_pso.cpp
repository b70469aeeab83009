#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "skybench/metrics.hpp"
#include "skybench/pso.hpp"

using namespace skybench;
using namespace skybench::pso;

namespace {

const Aabb kBounds{{0, 0, 0}, {100, 100, 50}};

// Independent formula: length + penalties, from first principles.
double fitness_oracle(const Path& p, const CityMap& map, const metrics::ConstraintSet& c, const Penalties& pen) {
  const double len = oracle::length(p);
  int collisions = 0;
  for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
    bool hit = !map.in_bounds(p.waypoints[i - 1]) || !map.in_bounds(p.waypoints[i]);
    for (const auto& o : map.obstacles()) {
      hit = hit || segment_intersects(o.box().inflated(map.safety_margin()), p.waypoints[i - 1], p.waypoints[i]);
    }
    collisions += hit;
  }
  int sharp = 0;
  for (std::size_t i = 1; i + 1 < p.waypoints.size(); ++i) {
    const double defl = oracle::deflection(p.waypoints[i] - p.waypoints[i - 1], p.waypoints[i + 1] - p.waypoints[i]);
    sharp += 180.0 - defl * 180.0 / std::numbers::pi < c.sharp_turn_min_angle - 1e-9;
  }
  return len + pen.collision * collisions + pen.sharp_turn * sharp + pen.range * std::max(0.0, len - c.max_range);
}

}  // namespace

TEST(PsoDecode, Basics) {
  const std::vector<double> v{10, 20, 30};
  const Path p = decode(v, {1, 1, 1}, {90, 90, 40}, kBounds);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.waypoints[1], (Vec3{10, 20, 30}));
  EXPECT_EQ(p.waypoints.front(), (Vec3{1, 1, 1}));
  EXPECT_EQ(p.waypoints.back(), (Vec3{90, 90, 40}));

  const Aabb shifted{{5, 5, 5}, {100, 100, 50}};
  const std::vector<double> zeros(6, 0.0);
  const Path z = decode(zeros, {6, 6, 6}, {90, 90, 40}, shifted);
  EXPECT_EQ(z.waypoints[1], (Vec3{5, 5, 5}));
  EXPECT_EQ(z.waypoints[2], (Vec3{5, 5, 5}));
}

TEST(PsoDecode, RoundTrip) {
  Rng rng(3);
  for (int n = 0; n < 50; ++n) {
    std::vector<double> v(15);
    for (auto& x : v) x = rng.uniform(-20, 140);
    const Path p = decode(v, {1, 1, 1}, {2, 2, 2}, kBounds);
    const auto flat = flatten_interior(p);
    ASSERT_EQ(flat.size(), v.size());
    for (std::size_t d = 0; d < v.size(); ++d) EXPECT_EQ(flat[d], std::clamp(v[d], kBounds.min[d % 3], kBounds.max[d % 3]));
    EXPECT_EQ(decode(flat, {1, 1, 1}, {2, 2, 2}, kBounds), p);
  }
}

TEST(PsoFitness, StraightAndColliding) {
  const CityMap map({0, 0, 0}, {100, 100, 50}, {{{40, 40, 0}, {60, 60, 30}}});
  const metrics::ConstraintSet c;
  const Path free{{{5, 5, 40}, {95, 5, 40}}};
  EXPECT_EQ(fitness(free, map, c), 90.0);
  const Path hit{{{5, 50, 10}, {95, 50, 10}}};
  EXPECT_EQ(fitness(hit, map, c), 90.0 + 1e4);
  const auto t = fitness_terms(hit, map, c);
  EXPECT_EQ(t.colliding_segments, 1u);
  EXPECT_EQ(t.sharp_vertices, 0u);
}

TEST(PsoFitness, MatchesIndependentFormula) {
  ScenarioSpec s;
  s.map_width = 300;
  s.map_depth = 300;
  s.obstacle_density = 0.3;
  s.start = {10, 10, 20};
  s.goal = {290, 290, 20};
  s.seed = 4;
  const CityMap map = generate_city(s);
  metrics::ConstraintSet c;
  c.max_range = 400;
  Rng rng(8);
  for (int n = 0; n < 100; ++n) {
    Path p;
    const int k = static_cast<int>(rng.uniform_int(2, 8));
    for (int i = 0; i < k; ++i) p.waypoints.push_back({rng.uniform(0, 300), rng.uniform(0, 300), rng.uniform(0, 120)});
    const double a = fitness(p, map, c), b = fitness_oracle(p, map, c, {});
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(b))) << n;
  }
}

TEST(PsoUpdate, VelocityHandEvaluation) {
  Particle p;
  p.position = {0};
  p.velocity = {2};
  p.pbest_position = {1};
  PsoConfig cfg;
  cfg.inertia = 0.5;
  const std::vector<double> one{1.0}, gbest{3.0};
  const auto v = update_velocity(p, gbest, cfg, one, one, 100.0);
  EXPECT_NEAR(v[0], 8.6, 8.6 * 1e-12);
  p.velocity = v;
  const std::vector<double> lo{-100}, hi{100};
  const auto x = update_position(p, lo, hi);
  EXPECT_NEAR(x[0], 8.6, 8.6 * 1e-12);
}

TEST(PsoUpdate, VelocityIdentities) {
  Particle p;
  p.position = {1, 2, 3};
  p.velocity = {0.5, -1, 2};
  p.pbest_position = {4, 4, 4};
  const std::vector<double> gbest{9, 9, 9}, r{0.3, 0.6, 0.9};
  PsoConfig cfg;
  cfg.inertia = 1.0;
  cfg.c1 = cfg.c2 = 0.0;
  EXPECT_EQ(update_velocity(p, gbest, cfg, r, r, 100), p.velocity);

  cfg = PsoConfig{};
  p.pbest_position = p.position;
  const auto v = update_velocity(p, p.position, cfg, r, r, 100);
  for (int d = 0; d < 3; ++d) EXPECT_EQ(v[d], cfg.inertia * p.velocity[d]);

  const auto clamped = update_velocity(p, gbest, PsoConfig{}, r, r, 0.25);
  for (double c : clamped) EXPECT_LE(std::abs(c), 0.25);
}

TEST(PsoUpdate, PositionClamping) {
  Particle p;
  p.position = {5, 10, 0};
  p.velocity = {0, 0, 0};
  const std::vector<double> lo{0, 0, 0}, hi{10, 10, 10};
  EXPECT_EQ(update_position(p, lo, hi), (std::vector<double>{5, 10, 0}));
  p.velocity = {3, 4, -2};
  EXPECT_EQ(update_position(p, lo, hi), (std::vector<double>{8, 10, 0}));
  EXPECT_EQ(p.velocity, (std::vector<double>{3, 0, 0}));
}

TEST(PsoPlan, EmptyMapStraightLine) {
  const CityMap map({0, 0, 0}, {500, 500, 100}, {});
  PsoConfig cfg;
  cfg.waypoints = 3;
  cfg.seed = 77;
  const Vec3 start{50, 60, 20}, goal{210, 60, 20};
  const auto r = plan_pso(map, start, goal, cfg);
  ASSERT_TRUE(r.plan.ok());
  EXPECT_LE(metrics::path_length(r.plan.path), 1.02 * 160.0);
  EXPECT_EQ(r.plan.path.waypoints.front(), start);
  EXPECT_EQ(r.plan.path.waypoints.back(), goal);
  EXPECT_EQ(r.plan.stats.cost_history.size(), 200u);
}

TEST(PsoPlan, GbestAndPbestMonotone) {
  ScenarioSpec s;
  s.obstacle_density = 0.3;
  s.start = {300, 500, 25};
  s.goal = {460, 500, 25};
  s.seed = 5;
  const CityMap map = generate_city(s);
  PsoConfig cfg;
  cfg.population = 40;
  cfg.seed = 3;
  Swarm swarm(map, s.start, s.goal, cfg, {});
  std::vector<double> pbest;
  for (const auto& p : swarm.state().particles) pbest.push_back(p.pbest_fitness);
  double gbest = swarm.state().gbest_fitness;
  for (int it = 0; it < 60; ++it) {
    swarm.step();
    const auto& st = swarm.state();
    ASSERT_LE(st.gbest_fitness, gbest);
    gbest = st.gbest_fitness;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < st.particles.size(); ++i) {
      ASSERT_LE(st.particles[i].pbest_fitness, pbest[i]);
      pbest[i] = st.particles[i].pbest_fitness;
      lowest = std::min(lowest, pbest[i]);
    }
    EXPECT_EQ(st.gbest_fitness, lowest);
  }
  EXPECT_EQ(swarm.state().iteration, 60u);
}

TEST(PsoPlan, Deterministic) {
  ScenarioSpec s;
  s.obstacle_density = 0.3;
  s.start = {300, 500, 25};
  s.goal = {460, 500, 25};
  s.seed = 6;
  const CityMap map = generate_city(s);
  PsoConfig cfg;
  cfg.population = 30;
  cfg.iterations = 50;
  cfg.seed = 99;
  const auto a = plan_pso(map, s.start, s.goal, cfg);
  const auto b = plan_pso(map, s.start, s.goal, cfg);
  EXPECT_EQ(a.plan.path, b.plan.path);
  EXPECT_EQ(a.plan.stats.cost_history, b.plan.stats.cost_history);
}

TEST(PsoPlan, EnclosedGoalIsFlagged) {
  const CityMap map({0, 0, 0}, {200, 200, 100},
                    {{{140, 140, 0}, {142, 180, 60}},
                     {{178, 140, 0}, {180, 180, 60}},
                     {{140, 140, 0}, {180, 142, 60}},
                     {{140, 178, 0}, {180, 180, 60}},
                     {{140, 140, 58}, {180, 180, 60}}});
  PsoConfig cfg;
  cfg.population = 20;
  cfg.iterations = 20;
  const auto r = plan_pso(map, {20, 20, 20}, {160, 160, 20}, cfg);
  EXPECT_EQ(r.plan.status, PlanStatus::NoFeasiblePath);
  EXPECT_GE(r.gbest_fitness, 1e4);
}

TEST(PsoConfigCheck, Validation) {
  PsoConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.population, 150u);
  EXPECT_EQ(c.iterations, 200u);
  EXPECT_EQ(c.c1, 1.9);
  EXPECT_EQ(c.c2, 1.9);
  c.population = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = PsoConfig{};
  c.inertia = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = PsoConfig{};
  c.waypoints = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
