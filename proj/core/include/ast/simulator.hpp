#pragma once

#include "ast/action.hpp"
#include "ast/initial_condition.hpp"
#include "ast/reward.hpp"

#include <memory>
#include <vector>

namespace ast {

/// Black-box simulator contract. Implementations must be deterministic in the
/// applied action sequence: the same (initial condition, actions) pair always
/// produces the same step results.
class Simulator {
 public:
  virtual ~Simulator() = default;

  /// Reset to the given initial state.
  virtual void initialize(const InitialCondition& s0) = 0;

  /// Advance one step. The returned reward_contribution is the likelihood
  /// proxy (Mahalanobis distance) of the action.
  virtual StepResult step(const EnvironmentAction& action) = 0;

  /// True once the event occurred or the horizon was reached.
  virtual bool is_terminal() const = 0;

  virtual int horizon() const = 0;
  virtual int time_step() const = 0;

  virtual const ActionModel& action_model() const = 0;

  virtual std::unique_ptr<Simulator> clone() const = 0;

  /// White-box escape hatch; only the state-fed MLP baseline uses it.
  virtual std::vector<double> expose_state() const = 0;
  virtual std::size_t state_dim() const = 0;
};

}  // namespace ast
