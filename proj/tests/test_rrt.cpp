#include <gtest/gtest.h>

#include "oracles.hpp"
#include "skybench/metrics.hpp"
#include "skybench/rrt_star.hpp"

using namespace skybench;
using namespace skybench::rrt;

namespace {

CityMap empty_map() { return CityMap({0, 0, 0}, {200, 200, 100}, {}); }

// goal enclosed by a closed box of walls
CityMap walled_goal_map() {
  return CityMap({0, 0, 0}, {200, 200, 100},
                 {{{140, 140, 0}, {142, 180, 60}},
                  {{178, 140, 0}, {180, 180, 60}},
                  {{140, 140, 0}, {180, 142, 60}},
                  {{140, 178, 0}, {180, 180, 60}},
                  {{140, 140, 58}, {180, 180, 60}}});
}

}  // namespace

TEST(Steer, Cases) {
  EXPECT_EQ(steer({0, 0, 0}, {1, 1, 0}, 5), (Vec3{1, 1, 0}));
  const Vec3 s = steer({0, 0, 0}, {10, 0, 0}, 2);
  EXPECT_NEAR(s.x, 2, 1e-12);
  EXPECT_EQ(s.y, 0);
  Rng rng(4);
  for (int n = 0; n < 500; ++n) {
    const Vec3 a{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Vec3 b{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Vec3 p = steer(a, b, 7.5);
    EXPECT_LE(distance(a, p), 7.5 + 1e-9);
    EXPECT_LT(norm(cross(p - a, b - a)), 1e-7 * norm(b - a));
    EXPECT_GE(dot(p - a, b - a), 0);
  }
}

TEST(Nearest, MatchesLinearScan) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    Tree tree({rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)});
    const int n = static_cast<int>(rng.uniform_int(0, 30));
    for (int i = 0; i < n; ++i) {
      tree.add({rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)}, rng.uniform_int(0, i));
    }
    const Vec3 q{rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)};
    NodeId best = 0;
    for (NodeId i = 1; i < tree.size(); ++i) {
      if (distance(tree.node(i).position, q) < distance(tree.node(best).position, q)) best = i;
    }
    ASSERT_EQ(nearest(tree, q), best);
  }
}

TEST(Nearest, TiesAndExactHits) {
  Tree tree({0, 0, 0});
  EXPECT_EQ(nearest(tree, {5, 5, 5}), 0u);
  tree.add({10, 0, 0}, 0);
  tree.add({-10, 0, 0}, 0);
  EXPECT_EQ(nearest(tree, {0, 0, 0}), 0u);
  EXPECT_EQ(nearest(tree, {10, 0, 0}), 1u);
  Tree tie({10, 0, 0});
  tie.add({-10, 0, 0}, 0);
  EXPECT_EQ(nearest(tie, {0, 0, 0}), 0u);
  const auto ids = near(tree, {0, 0, 0}, 10.0);
  EXPECT_EQ(ids, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(near(tree, {6, 0, 0}, 5.0), (std::vector<NodeId>{1}));
}

TEST(RrtSample, GoalBias) {
  const CityMap map = empty_map();
  const Vec3 goal{150, 150, 50};
  RrtConfig cfg;
  Rng rng(6);
  cfg.goal_bias = 1.0;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_point(map, goal, cfg, rng), goal);

  cfg.goal_bias = 0.5;
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += sample_point(map, goal, cfg, rng) == goal;
  EXPECT_NEAR(hits, 5000, 300);

  cfg.goal_bias = 0.0;
  const int n = 100000;
  Vec3 sum;
  for (int i = 0; i < n; ++i) sum = sum + sample_point(map, goal, cfg, rng);
  const double extents[3] = {200, 200, 100};
  for (int a = 0; a < 3; ++a) {
    const double sigma = extents[a] / std::sqrt(12.0) / std::sqrt(double(n));
    EXPECT_NEAR(sum[a] / n, extents[a] / 2, 3 * sigma) << a;
  }
}

TEST(RrtSample, AvoidsObstacles) {
  const CityMap map({0, 0, 0}, {100, 100, 100}, {{{0, 0, 0}, {100, 100, 80}}});
  RrtConfig cfg;
  cfg.goal_bias = 0;
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(map.is_point_free(sample_point(map, {}, cfg, rng)));
}

TEST(RrtExtend, FirstStepTowardGoal) {
  const CityMap map = empty_map();
  Tree tree({10, 10, 10});
  RrtConfig cfg;
  cfg.goal_bias = 1.0;
  const Vec3 goal{110, 10, 10};
  const auto out = extend(tree, map, goal, cfg);
  ASSERT_EQ(out.status, ExtendStatus::Added);
  const Vec3 p = tree.node(*out.node).position;
  EXPECT_NEAR(distance(p, {10, 10, 10}), cfg.step_size, 1e-12);
  EXPECT_NEAR(p.x, 35, 1e-12);
  EXPECT_EQ(p.y, 10);
}

TEST(RrtExtend, CollisionIsNoOp) {
  const CityMap map({0, 0, 0}, {100, 100, 100}, {{{20, 0, 0}, {30, 100, 100}}});
  Tree tree({10, 50, 50});
  RrtConfig cfg;
  const auto out = extend(tree, map, {40, 50, 50}, cfg);
  EXPECT_EQ(out.status, ExtendStatus::Collision);
  EXPECT_EQ(tree.size(), 1u);
}

TEST(RrtExtend, RewiresThroughNewNode) {
  // R -> n1 -> n2 costs 0, 20, 40. Inserting (20,5) gives n2 a route of 20.6 + 15.
  const CityMap map = empty_map();
  Tree tree({0, 0, 0});
  const NodeId n1 = tree.add({0, 20, 0}, 0);
  const NodeId n2 = tree.add({20, 20, 0}, n1);
  ASSERT_DOUBLE_EQ(tree.node(n2).cost, 40);
  RrtConfig cfg;
  cfg.step_size = 100;
  cfg.neighbor_radius = 50;
  const auto out = extend(tree, map, {20, 5, 0}, cfg);
  ASSERT_EQ(out.status, ExtendStatus::Added);
  const NodeId n = *out.node;
  EXPECT_EQ(tree.node(n).parent, std::optional<NodeId>(0));  // choose-parent picks the root
  EXPECT_EQ(out.rewired, 1u);
  EXPECT_EQ(tree.node(n2).parent, std::optional<NodeId>(n));
  EXPECT_NEAR(tree.node(n2).cost, std::hypot(20.0, 5.0) + 15.0, 1e-12);
  EXPECT_LT(tree.node(n2).cost, 40);
  EXPECT_EQ(tree.node(n1).parent, std::optional<NodeId>(0));
  EXPECT_TRUE(tree_consistent(tree));
}

TEST(RrtTree, InvariantsHoldUnderRandomExtension) {
  ScenarioSpec s;
  s.map_width = 300;
  s.map_depth = 300;
  s.obstacle_density = 0.3;
  s.start = {20, 20, 25};
  s.goal = {280, 280, 25};
  s.seed = 12;
  const CityMap map = generate_city(s);
  Tree tree(s.start);
  RrtConfig cfg;
  Rng rng(9);
  for (int i = 0; i < 1500; ++i) {
    extend(tree, map, sample_point(map, s.goal, cfg, rng), cfg);
    if (i % 100 == 0) ASSERT_TRUE(tree_consistent(tree)) << i;
  }
  EXPECT_TRUE(tree_consistent(tree));
  for (NodeId id = 1; id < tree.size(); ++id) {
    const auto& node = tree.node(id);
    ASSERT_TRUE(node.parent.has_value());
    EXPECT_TRUE(map.is_segment_free(tree.node(*node.parent).position, node.position));
    EXPECT_LE(distance(tree.node(*node.parent).position, node.position), cfg.neighbor_radius + 1e-9);
  }
}

TEST(RrtTree, AncestorGuard) {
  Tree tree({0, 0, 0});
  const NodeId a = tree.add({1, 0, 0}, 0);
  const NodeId b = tree.add({2, 0, 0}, a);
  EXPECT_TRUE(tree.is_ancestor(0, b));
  EXPECT_TRUE(tree.is_ancestor(a, b));
  EXPECT_FALSE(tree.is_ancestor(b, a));
  EXPECT_EQ(tree.trace(b), (std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}));
}

TEST(RrtPlan, EmptyMapConvergence) {
  const CityMap map = empty_map();
  RrtConfig cfg;
  cfg.seed = 2024;
  const Vec3 start{50, 50, 50}, goal{100, 50, 50};
  const auto r = plan_rrtstar(map, start, goal, cfg);
  ASSERT_TRUE(r.plan.ok());
  const double len = metrics::path_length(r.plan.path);
  EXPECT_GE(len, 50.0);
  EXPECT_LE(len, 55.0);
  EXPECT_EQ(r.plan.path.waypoints.front(), start);
  EXPECT_EQ(r.plan.path.waypoints.back(), goal);
  EXPECT_EQ(r.plan.stats.cost_history.size(), 50u);
  ASSERT_TRUE(r.tree.has_value());
  EXPECT_TRUE(tree_consistent(*r.tree));
}

TEST(RrtPlan, CheckpointsNonIncreasingAndDeterministic) {
  ScenarioSpec s;
  s.obstacle_density = 0.3;
  s.start = {300, 500, 25};
  s.goal = {460, 500, 25};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    s.seed = seed;
    const CityMap map = generate_city(s);
    RrtConfig cfg;
    cfg.seed = seed;
    const auto r = plan_rrtstar(map, s.start, s.goal, cfg);
    const auto& h = r.plan.stats.cost_history;
    for (std::size_t i = 1; i < h.size(); ++i) ASSERT_LE(h[i], h[i - 1]) << seed;
    const auto again = plan_rrtstar(map, s.start, s.goal, cfg);
    EXPECT_EQ(again.plan.path, r.plan.path);
    EXPECT_EQ(again.tree->size(), r.tree->size());
    if (r.plan.ok()) {
      const auto& w = r.plan.path.waypoints;
      for (std::size_t i = 1; i < w.size(); ++i) EXPECT_TRUE(map.is_segment_free(w[i - 1], w[i]));
    }
  }
}

TEST(RrtPlan, UnreachableGoal) {
  RrtConfig cfg;
  cfg.max_iterations = 1000;
  const auto r = plan_rrtstar(walled_goal_map(), {20, 20, 20}, {160, 160, 20}, cfg);
  EXPECT_EQ(r.plan.status, PlanStatus::NoPath);
  EXPECT_TRUE(r.plan.path.empty());
  EXPECT_EQ(plan_rrtstar(walled_goal_map(), {141, 150, 20}, {20, 20, 20}, cfg).plan.status,
            PlanStatus::StartBlocked);
}

TEST(RrtConfigCheck, Validation) {
  RrtConfig c;
  EXPECT_NO_THROW(c.validate());
  c.goal_bias = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = RrtConfig{};
  c.neighbor_radius = 10;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = RrtConfig{};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
