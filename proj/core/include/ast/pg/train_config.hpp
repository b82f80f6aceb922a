#pragma once

#include "ast/config_file.hpp"
#include "ast/initial_condition.hpp"
#include "ast/policy/policy.hpp"
#include "ast/policy/policy_input.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace ast::pg {

enum class TrainingMode {
  kDiscrete,     // every rollout starts from one fixed initial condition
  kGeneralized,  // each rollout draws its initial condition from the support
};

struct TrainConfig {
  long long batch_size_timesteps = 10'000;
  int max_path_length = 50;
  double kl_step = 0.1;  // trust-region radius delta on the mean KL
  double discount = 0.99;
  double gae_lambda = 0.97;
  int iterations = 100;

  TrainingMode mode = TrainingMode::kGeneralized;
  InitialCondition initial_condition{};  // used in discrete mode
  InitialConditionSupport support = InitialConditionSupport::crosswalk_default();

  policy::Architecture architecture = policy::Architecture::kLstm;
  policy::InputEncoding encoding = policy::InputEncoding::kPreviousActionAndInitialCondition;
  int hidden_dim = 64;
  int hidden_layers = 1;

  int cg_iterations = 10;
  double cg_damping = 1e-5;
  double backtrack_ratio = 0.8;
  int max_backtracks = 15;
  double kl_accept_factor = 1.5;  // line search accepts KL <= factor * kl_step
  bool normalize_advantages = true;

  int checkpoint_every = 0;  // 0 disables checkpointing
  std::filesystem::path checkpoint_dir;
  std::filesystem::path log_csv;  // empty disables the CSV log

  std::uint64_t seed = 0;

  /// Recurrent solver fed [previous action, s0], trained over the support.
  static TrainConfig generalized_recurrent();
  /// Recurrent solver fed the previous action only, from one s0.
  static TrainConfig discrete_recurrent(const InitialCondition& s0);
  /// Feed-forward solver fed the exposed simulator state, from one s0.
  static TrainConfig discrete_mlp(const InitialCondition& s0);
  /// 5e5 timesteps per batch, as in the original large-scale runs.
  TrainConfig with_paper_batch() const;

  /// Checks ranges and the mode/encoding pairing: generalized mode requires
  /// the [a, s0] encoding, discrete mode forbids it.
  void validate() const;

  /// Overrides from a key-value section (batch_size, iterations, kl_step,
  /// discount, gae_lambda, hidden, cg_iterations, ...).
  void apply(const KeyValueConfig& cfg, const std::string& section);
};

}  // namespace ast::pg
