#pragma once

#include "ast/random.hpp"
#include "ast/simulator.hpp"
#include "ast/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace ast {

/// Chooses the action for time-step t. The simulator is passed read-only so
/// that state-fed policies can query it; black-box sources ignore it.
using ActionSource = std::function<EnvironmentAction(int t, const Simulator& sim, Rng& rng)>;

/// Initialize the simulator at s0 and step it until terminal, drawing actions
/// from `source`. The RNG handed to the source is seeded from `seed` alone.
/// Throws InvalidInput if the simulator horizon disagrees with spec.horizon;
/// simulator failures are rethrown as SimulationError with the step index.
Trajectory rollout(Simulator& sim, const ActionSource& source, const InitialCondition& s0,
                   const RewardSpec& spec, std::uint64_t seed);

/// Re-execute a recorded action sequence. Stops early if the simulator
/// terminates before the actions run out.
Trajectory replay(Simulator& sim, const InitialCondition& s0, std::span<const EnvironmentAction> actions,
                  const RewardSpec& spec);

/// Always emits the model mean (the no-disturbance baseline).
ActionSource mean_action_source();

/// Samples each action from the simulator's Gaussian action model.
ActionSource model_sampling_source();

}  // namespace ast
