#pragma once

#include "ast/harness/bin_grid.hpp"
#include "ast/policy/policy.hpp"
#include "ast/policy/policy_input.hpp"
#include "ast/reward.hpp"
#include "ast/simulator.hpp"
#include "ast/trajectory.hpp"

#include <cstdint>
#include <optional>

namespace ast::harness {

/// A trained policy plus what it needs to build its inputs.
struct PolicyRunner {
  const policy::GaussianPolicy& policy;
  policy::InputEncoding encoding;
  InitialConditionSupport input_support;  // range used to normalize s0 inputs
};

/// One rollout of the policy from s0. Without `sample_seed` every action is
/// the policy mean; with it, actions are drawn from the policy.
Trajectory policy_rollout(Simulator& sim, const PolicyRunner& runner, const InitialCondition& s0,
                          const RewardSpec& reward, std::optional<std::uint64_t> sample_seed = std::nullopt);

enum class EvalMode { kMean, kSample };

struct Evaluation {
  Trajectory best;
  long long steps = 0;
};

/// kMean: one deterministic mean-action rollout. kSample: n stochastic
/// rollouts seeded derive_seed(seed, {k}); the best by ranks_above wins.
Evaluation evaluate_policy(Simulator& sim, const PolicyRunner& runner, const InitialCondition& s0,
                           const RewardSpec& reward, EvalMode mode, int samples = 100, std::uint64_t seed = 0);

/// Bin evaluation: the mean rollout from the bin centre plus `samples`
/// rollouts, each from an initial condition drawn uniformly in the bin,
/// acting with the policy mean (kMean) or sampled actions (kSample).
/// Returns the best by ranks_above.
Evaluation evaluate_bin(Simulator& sim, const PolicyRunner& runner, const Bin& bin, const RewardSpec& reward,
                        int samples, std::uint64_t seed, EvalMode actions = EvalMode::kMean);

}  // namespace ast::harness
