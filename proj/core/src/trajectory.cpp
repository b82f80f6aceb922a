#include "ast/trajectory.hpp"

namespace ast {

void Trajectory::append(const EnvironmentAction& action, double reward, bool event, double distance) {
  actions.push_back(action);
  rewards.push_back(reward);
  total_reward += reward;
  found_event = event;
  final_distance = distance;
}

bool ranks_above(const Trajectory& a, const Trajectory& b) {
  if (a.found_event != b.found_event) return a.found_event;
  return a.total_reward > b.total_reward;
}

}  // namespace ast
