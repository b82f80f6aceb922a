#pragma once

#include "ast/action.hpp"

namespace ast {

/// What the simulator reports after one step.
struct StepResult {
  double reward_contribution = 0.0;  // Mahalanobis distance of the action
  bool event = false;                // entered the failure set
  double distance = 0.0;             // car/pedestrian separation, m
  bool terminal = false;
};

/// Terminal-penalty magnitudes and horizon. alpha and beta are stored as
/// positive magnitudes; the horizon branch emits -(alpha + beta * distance).
struct RewardSpec {
  double alpha = 1e5;
  double beta = 1e4;
  int horizon = 50;

  void validate() const;
};

/// Per-step AST reward.
///   event                      -> 0
///   no event, t >= horizon     -> -(alpha + beta * distance)
///   otherwise                  -> -mahalanobis(action, model)
/// `t` is the time index of the state reached by the step (1 after the first
/// step). Throws ContractViolation if t exceeds the horizon.
double step_reward(const StepResult& step, const EnvironmentAction& action,
                   const ActionModel& model, const RewardSpec& spec, int t);

}  // namespace ast
