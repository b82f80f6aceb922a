#pragma once

#include "ast/random.hpp"
#include "ast/reward.hpp"
#include "ast/simulator.hpp"
#include "ast/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ast::mcts {

/// Search parameters. Widening admits a new child action while
/// |children| < k_action * max(1, N(s))^alpha_action.
struct MctsConfig {
  double exploration = 100.0;
  double k_action = 1.0;
  double alpha_action = 0.5;
  // State widening is inert: transitions are deterministic given the action
  // history, so every edge has exactly one child state.
  double k_state = 1.0;
  double alpha_state = 0.5;
  bool progressive_widening = true;
  /// When widening is disabled, every node expands exactly this action set.
  std::vector<EnvironmentAction> discrete_actions;
  /// Maximum number of random rollout steps after leaving the tree.
  int rollout_depth = 50;
  int iterations = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TreeNode;

struct Edge {
  EnvironmentAction action;
  double q = 0.0;  // mean of returns backed up through this edge
  long long visits = 0;
  int child = -1;  // index into Tree::nodes, -1 until expanded
};

struct TreeNode {
  long long visits = 0;
  std::vector<Edge> edges;
};

/// Nodes are keyed by action history: node 0 is the root, each edge owns at
/// most one child.
struct Tree {
  std::vector<TreeNode> nodes;

  const TreeNode& root() const { return nodes.front(); }
};

/// Child index maximizing Q + c * sqrt(log N(s) / N(s,a)). Unvisited edges
/// win outright; ties go to the lowest index. Throws ContractViolation on a
/// node without children.
std::size_t select_action(const TreeNode& node, double c);

/// True when the node may admit another child under the widening rule.
bool widening_allowed(const TreeNode& node, const MctsConfig& config);

/// Sample and append a new edge if widening is allowed; returns its action.
std::optional<EnvironmentAction> widen(TreeNode& node, const MctsConfig& config, const ActionModel& model, Rng& rng);

struct SearchResult {
  Trajectory best;
  /// Best total reward seen after each iteration (cumulative maximum).
  std::vector<double> trace;
  Tree tree;
  long long simulated_steps = 0;
};

/// Select / widen / rollout / backup for config.iterations iterations from s0.
/// Returns the highest-reward trajectory met anywhere (tree or rollout).
SearchResult search(Simulator& sim, const InitialCondition& s0, const RewardSpec& spec, const MctsConfig& config);

}  // namespace ast::mcts
