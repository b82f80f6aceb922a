#pragma once

#include "ast/pg/train_config.hpp"
#include "ast/pg/trust_region.hpp"
#include "ast/policy/checkpoint.hpp"
#include "ast/policy/policy.hpp"
#include "ast/reward.hpp"
#include "ast/simulator.hpp"
#include "ast/trajectory.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace ast::pg {

struct IterationStats {
  int iteration = 0;
  double best_reward = 0.0;  // best total reward seen so far
  double mean_kl = 0.0;
  double explained_variance = 0.0;
  int collisions = 0;  // collision trajectories in this iteration's batch
  int trajectories = 0;
  long long steps = 0;
  double mean_total_reward = 0.0;
  UpdateDiagnostics update;
};

struct TrainResult {
  policy::PolicyCheckpoint policy;
  Trajectory best;
  /// best_reward after each iteration; non-decreasing.
  std::vector<double> trace;
  std::vector<IterationStats> iterations;
  long long total_steps = 0;
};

/// Called after each iteration; returning false stops training early.
using IterationCallback = std::function<bool(const IterationStats&)>;

/// Iterate collect -> fit baseline -> GAE -> trust-region update. Batch i
/// is seeded from derive_seed(config.seed, {i}), so resuming from a
/// checkpoint replays exactly the run that wrote it.
TrainResult train(const Simulator& prototype, const RewardSpec& reward, const TrainConfig& config,
                  const IterationCallback& on_iteration = {});

/// Continue a run from the state saved in `checkpoint_dir`.
TrainResult resume(const Simulator& prototype, const RewardSpec& reward, const TrainConfig& config,
                   const std::filesystem::path& checkpoint_dir, const IterationCallback& on_iteration = {});

/// Policy construction for a config (shape derived from the encoding).
policy::PolicyShape policy_shape(const TrainConfig& config, std::size_t state_dim);

}  // namespace ast::pg
