#include "ast/reward.hpp"

#include "ast/errors.hpp"

#include <cmath>
#include <string>

namespace ast {

void RewardSpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("reward alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("reward beta must be > 0");
  if (horizon < 1) throw InvalidInput("reward horizon must be >= 1");
}

double step_reward(const StepResult& step, const EnvironmentAction& action, const ActionModel& model,
                   const RewardSpec& spec, int t) {
  if (t > spec.horizon)
    throw ContractViolation("step_reward: t = " + std::to_string(t) + " exceeds horizon " +
                            std::to_string(spec.horizon));
  if (!std::isfinite(step.distance) || step.distance < 0.0)
    throw InvalidInput("step_reward: distance must be finite and non-negative");
  if (step.event) return 0.0;
  if (t >= spec.horizon) return -(spec.alpha + spec.beta * step.distance);
  return -mahalanobis(action, model);
}

}  // namespace ast
