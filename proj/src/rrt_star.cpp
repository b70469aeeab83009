#include "skybench/rrt_star.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skybench::rrt {

void RrtConfig::validate() const {
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw std::invalid_argument("goal_bias must lie in [0, 1]");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
  if (!(neighbor_radius >= step_size)) throw std::invalid_argument("neighbor_radius must be >= step_size");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(goal_tolerance >= 0.0)) throw std::invalid_argument("goal_tolerance must be >= 0");
  if (checkpoint_every < 1) throw std::invalid_argument("checkpoint_every must be >= 1");
}

Tree::Tree(const Vec3& root) { nodes_.push_back({root, std::nullopt, 0.0, {}}); }

NodeId Tree::add(const Vec3& position, NodeId parent) {
  const NodeId id = nodes_.size();
  const double cost = nodes_[parent].cost + distance(nodes_[parent].position, position);
  nodes_.push_back({position, parent, cost, {}});
  nodes_[parent].children.push_back(id);
  return id;
}

void Tree::reparent(NodeId id, NodeId new_parent) {
  auto& old_children = nodes_[*nodes_[id].parent].children;
  old_children.erase(std::find(old_children.begin(), old_children.end(), id));
  nodes_[id].parent = new_parent;
  nodes_[new_parent].children.push_back(id);
  propagate(id);
}

void Tree::propagate(NodeId id) {
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId at = stack.back();
    stack.pop_back();
    TreeNode& n = nodes_[at];
    const TreeNode& p = nodes_[*n.parent];
    n.cost = p.cost + distance(p.position, n.position);
    stack.insert(stack.end(), n.children.begin(), n.children.end());
  }
}

bool Tree::is_ancestor(NodeId maybe_ancestor, NodeId id) const {
  for (std::optional<NodeId> at = id; at; at = nodes_[*at].parent) {
    if (*at == maybe_ancestor) return true;
  }
  return false;
}

std::vector<Vec3> Tree::trace(NodeId id) const {
  std::vector<Vec3> out;
  for (std::optional<NodeId> at = id; at; at = nodes_[*at].parent) out.push_back(nodes_[*at].position);
  std::reverse(out.begin(), out.end());
  return out;
}

Vec3 sample_point(const CityMap& map, const Vec3& goal, const RrtConfig& config, Rng& rng) {
  if (rng.uniform() < config.goal_bias) return goal;
  const Aabb& b = map.bounds();
  Vec3 p;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    p = {rng.uniform(b.min.x, b.max.x), rng.uniform(b.min.y, b.max.y), rng.uniform(b.min.z, b.max.z)};
    if (map.is_point_free(p)) break;
  }
  return p;
}

NodeId nearest(const Tree& tree, const Vec3& p) {
  NodeId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (NodeId id = 0; id < tree.size(); ++id) {
    const Vec3 d = tree.node(id).position - p;
    const double dd = dot(d, d);
    if (dd < best_d) {
      best_d = dd;
      best = id;
    }
  }
  return best;
}

std::vector<NodeId> near(const Tree& tree, const Vec3& p, double radius) {
  std::vector<NodeId> out;
  const double r2 = radius * radius;
  for (NodeId id = 0; id < tree.size(); ++id) {
    const Vec3 d = tree.node(id).position - p;
    if (dot(d, d) <= r2) out.push_back(id);
  }
  return out;
}

Vec3 steer(const Vec3& from, const Vec3& to, double step_size) {
  const double d = distance(from, to);
  if (d <= step_size) return to;
  return from + (step_size / d) * (to - from);
}

ExtendOutcome extend(Tree& tree, const CityMap& map, const Vec3& sample, const RrtConfig& config) {
  ExtendOutcome out;
  const NodeId closest = nearest(tree, sample);
  const Vec3& from = tree.node(closest).position;
  if (from == sample) return out;

  const Vec3 fresh = steer(from, sample, config.step_size);
  if (!map.is_segment_free(from, fresh)) {
    out.status = ExtendStatus::Collision;
    return out;
  }

  const std::vector<NodeId> neighbours = near(tree, fresh, config.neighbor_radius);
  for (NodeId id : neighbours) {
    if (tree.node(id).position == fresh) return out;
  }

  // Choose parent.
  NodeId parent = closest;
  double best_cost = tree.node(closest).cost + distance(from, fresh);
  for (NodeId id : neighbours) {
    if (id == closest) continue;
    const TreeNode& n = tree.node(id);
    const double c = n.cost + distance(n.position, fresh);
    if (c < best_cost && map.is_segment_free(n.position, fresh)) {
      best_cost = c;
      parent = id;
    }
  }
  const NodeId added = tree.add(fresh, parent);
  out.status = ExtendStatus::Added;
  out.node = added;

  // Rewire.
  for (NodeId id : neighbours) {
    if (id == parent) continue;
    const TreeNode& n = tree.node(id);
    const double via = tree.node(added).cost + distance(fresh, n.position);
    if (via < n.cost && !tree.is_ancestor(id, added) && map.is_segment_free(fresh, n.position)) {
      tree.reparent(id, added);
      ++out.rewired;
    }
  }
  return out;
}

namespace {

struct GoalLink {
  NodeId node;
  double cost;
};

std::optional<GoalLink> best_goal_link(const Tree& tree, const CityMap& map, const Vec3& goal,
                                       double tolerance) {
  std::optional<GoalLink> best;
  for (NodeId id = 0; id < tree.size(); ++id) {
    const TreeNode& n = tree.node(id);
    const double d = distance(n.position, goal);
    if (d > tolerance) continue;
    const double c = n.cost + d;
    if (best && c >= best->cost) continue;
    if (d > 0.0 && !map.is_segment_free(n.position, goal)) continue;
    best = GoalLink{id, c};
  }
  return best;
}

}  // namespace

RrtResult plan_rrtstar(const CityMap& map, const Vec3& start, const Vec3& goal, const RrtConfig& config) {
  config.validate();
  RrtResult out;
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](PlanStatus status) {
    out.plan.status = status;
    out.plan.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::move(out);
  };
  if (!map.is_point_free(start)) return finish(PlanStatus::StartBlocked);
  if (!map.is_point_free(goal)) return finish(PlanStatus::GoalBlocked);

  Tree tree(start);
  Rng rng(config.seed);
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    const Vec3 sample = sample_point(map, goal, config, rng);
    extend(tree, map, sample, config);
    ++out.plan.stats.nodes_expanded;
    if (it % config.checkpoint_every == 0) {
      const auto link = best_goal_link(tree, map, goal, config.goal_tolerance);
      out.plan.stats.cost_history.push_back(link ? link->cost
                                                 : std::numeric_limits<double>::infinity());
    }
  }
  out.plan.stats.open_peak = tree.size();

  const auto link = best_goal_link(tree, map, goal, config.goal_tolerance);
  out.tree = std::move(tree);
  if (!link) return finish(PlanStatus::NoPath);

  out.plan.path.waypoints = out.tree->trace(link->node);
  if (out.plan.path.waypoints.back() != goal) out.plan.path.waypoints.push_back(goal);
  out.cost = link->cost;
  return finish(PlanStatus::Success);
}

bool tree_consistent(const Tree& tree, double tol) {
  const auto& nodes = tree.nodes();
  if (nodes.empty() || nodes[0].parent || nodes[0].cost != 0.0) return false;
  for (NodeId id = 1; id < nodes.size(); ++id) {
    const TreeNode& n = nodes[id];
    if (!n.parent || *n.parent >= nodes.size()) return false;
    const TreeNode& p = nodes[*n.parent];
    if (std::find(p.children.begin(), p.children.end(), id) == p.children.end()) return false;
    if (std::abs(n.cost - (p.cost + distance(p.position, n.position))) > tol) return false;
    // Reaching the root within |nodes| steps rules out cycles.
    std::size_t steps = 0;
    for (std::optional<NodeId> at = id; at; at = nodes[*at].parent) {
      if (++steps > nodes.size()) return false;
    }
  }
  return true;
}

}  // namespace skybench::rrt
