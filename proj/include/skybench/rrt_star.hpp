#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skybench/env.hpp"
#include "skybench/planning.hpp"
#include "skybench/rng.hpp"

namespace skybench::rrt {

struct RrtConfig {
  double goal_bias = 0.5;  // probability of sampling the goal itself
  double step_size = 25.0;
  double neighbor_radius = 50.0;
  std::size_t max_iterations = 5000;
  double goal_tolerance = 10.0;
  std::uint64_t seed = 0;
  std::size_t checkpoint_every = 100;

  /// Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

using NodeId = std::size_t;

struct TreeNode {
  Vec3 position;
  std::optional<NodeId> parent;
  double cost = 0.0;  // cost-to-come from the root
  std::vector<NodeId> children;
};

/// Search tree rooted at the start. Costs are kept consistent eagerly: a
/// rewire recomputes the whole affected subtree before returning.
class Tree {
 public:
  explicit Tree(const Vec3& root);

  const TreeNode& node(NodeId id) const { return nodes_[id]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  NodeId add(const Vec3& position, NodeId parent);
  /// Re-parent `id` under `new_parent` and refresh descendant costs.
  void reparent(NodeId id, NodeId new_parent);
  bool is_ancestor(NodeId maybe_ancestor, NodeId id) const;

  /// Root-to-node waypoint list.
  std::vector<Vec3> trace(NodeId id) const;

 private:
  void propagate(NodeId id);

  std::vector<TreeNode> nodes_;
};

Vec3 sample_point(const CityMap& map, const Vec3& goal, const RrtConfig& config, Rng& rng);

/// Closest node; ties resolve to the lowest id.
NodeId nearest(const Tree& tree, const Vec3& p);

/// Ids of all nodes within `radius` of p, ascending.
std::vector<NodeId> near(const Tree& tree, const Vec3& p, double radius);

/// `to` if within step_size of `from`, else the point step_size along from->to.
Vec3 steer(const Vec3& from, const Vec3& to, double step_size);

enum class ExtendStatus { Added, Collision, Degenerate };

struct ExtendOutcome {
  ExtendStatus status = ExtendStatus::Degenerate;
  std::optional<NodeId> node;
  std::size_t rewired = 0;
};

/// One RRT* step: steer, choose parent among near nodes, insert, rewire.
ExtendOutcome extend(Tree& tree, const CityMap& map, const Vec3& sample, const RrtConfig& config);

struct RrtResult {
  PlanResult plan;
  double cost = 0.0;
  std::optional<Tree> tree;
};

/// Runs all max_iterations, then returns the cheapest path reaching within
/// goal_tolerance of the goal, with the goal appended. Best cost is recorded
/// in stats.cost_history every checkpoint_every iterations (+inf before the
/// first solution).
RrtResult plan_rrtstar(const CityMap& map, const Vec3& start, const Vec3& goal,
                       const RrtConfig& config = {});

/// Sanity check used by tests: acyclic, single root, cost consistency.
bool tree_consistent(const Tree& tree, double tol = 1e-9);

}  // namespace skybench::rrt
