#pragma once

#include "ast/action.hpp"
#include "ast/initial_condition.hpp"

#include <vector>

namespace ast {

/// The unit of solver output: an initial condition, the disturbances applied,
/// and the reward earned at each step.
struct Trajectory {
  InitialCondition initial_condition;
  std::vector<EnvironmentAction> actions;
  std::vector<double> rewards;
  bool found_event = false;
  double final_distance = 0.0;
  double total_reward = 0.0;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }

  /// Append one step; total_reward accumulates in step order.
  void append(const EnvironmentAction& action, double reward, bool event, double distance);

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Evaluation ordering: any trajectory that reached the event outranks every
/// one that did not; ties broken by total reward.
bool ranks_above(const Trajectory& a, const Trajectory& b);

}  // namespace ast
