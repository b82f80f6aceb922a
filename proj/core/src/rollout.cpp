#include "ast/rollout.hpp"

#include "ast/errors.hpp"

#include <random>
#include <string>

namespace ast {
namespace {

void check_horizon(const Simulator& sim, const RewardSpec& spec) {
  spec.validate();
  if (sim.horizon() != spec.horizon)
    throw InvalidInput("simulator horizon " + std::to_string(sim.horizon()) + " != reward horizon " +
                       std::to_string(spec.horizon));
}

// One step with failures tagged by step index; appends to the trajectory.
void advance(Simulator& sim, const EnvironmentAction& action, const RewardSpec& spec, Trajectory& traj) {
  const int t = sim.time_step();
  StepResult result;
  try {
    result = sim.step(action);
  } catch (const SimulationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SimulationError(t, e.what());
  }
  const double r = step_reward(result, action, sim.action_model(), spec, sim.time_step());
  traj.append(action, r, result.event, result.distance);
}

}  // namespace

Trajectory rollout(Simulator& sim, const ActionSource& source, const InitialCondition& s0, const RewardSpec& spec,
                   std::uint64_t seed) {
  check_horizon(sim, spec);
  Rng rng(seed);
  sim.initialize(s0);
  Trajectory traj;
  traj.initial_condition = s0;
  while (!sim.is_terminal()) {
    const EnvironmentAction action = source(sim.time_step(), sim, rng);
    advance(sim, action, spec, traj);
  }
  return traj;
}

Trajectory replay(Simulator& sim, const InitialCondition& s0, std::span<const EnvironmentAction> actions,
                  const RewardSpec& spec) {
  check_horizon(sim, spec);
  sim.initialize(s0);
  Trajectory traj;
  traj.initial_condition = s0;
  for (const auto& action : actions) {
    if (sim.is_terminal()) break;
    advance(sim, action, spec, traj);
  }
  return traj;
}

ActionSource mean_action_source() {
  return [](int, const Simulator& sim, Rng&) { return EnvironmentAction(sim.action_model().mean); };
}

ActionSource model_sampling_source() {
  return [](int, const Simulator& sim, Rng& rng) {
    std::normal_distribution<double> normal;
    Vector6 z;
    for (Eigen::Index i = 0; i < 6; ++i) z[i] = normal(rng);
    return sim.action_model().denormalize(z);
  };
}

}  // namespace ast
