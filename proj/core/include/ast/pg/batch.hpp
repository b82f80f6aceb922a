#pragma once

#include "ast/pg/train_config.hpp"
#include "ast/policy/policy.hpp"
#include "ast/reward.hpp"
#include "ast/simulator.hpp"
#include "ast/trajectory.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace ast::pg {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// One iteration's worth of experience, laid out step-major: every per-step
/// matrix is steps x trajectories (or dim x trajectories per step), with
/// entries past a trajectory's end zeroed.
struct Batch {
  std::vector<Trajectory> trajectories;
  policy::SequenceBatch inputs;
  std::vector<Eigen::MatrixXd> actions;  // sampled actions in sigma units, 6 x B per step
  Eigen::MatrixXd rewards;
  Eigen::MatrixXd log_probs;  // under the collecting policy
  Eigen::MatrixXd values;
  Eigen::MatrixXd advantages;
  Eigen::MatrixXd returns;
  long long total_steps = 0;

  Mask mask() const;
  int collisions() const;
};

/// Roll out the policy until at least batch_size_timesteps steps are
/// collected. Rollout k uses RNG stream derive_seed(batch_seed, {k}); the
/// hidden state is reset per rollout. In generalized mode each rollout draws
/// s0 uniformly from the support. Rollouts are run in lockstep waves so the
/// network evaluates a whole wave per call.
Batch collect_batch(const Simulator& prototype, const policy::GaussianPolicy& policy, const TrainConfig& config,
                    const RewardSpec& reward, std::uint64_t batch_seed);

/// Fill values (from the fitted baseline), GAE advantages, discounted
/// returns, and the collecting policy's log-probs.
void annotate_batch(Batch& batch, const policy::GaussianPolicy& policy, const Eigen::MatrixXd& values,
                    const TrainConfig& config);

}  // namespace ast::pg
