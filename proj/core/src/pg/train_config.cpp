#include "ast/pg/train_config.hpp"

#include "ast/errors.hpp"

#include <cmath>
#include <string>

namespace ast::pg {

TrainConfig TrainConfig::generalized_recurrent() { return TrainConfig{}; }

TrainConfig TrainConfig::discrete_recurrent(const InitialCondition& s0) {
  TrainConfig c;
  c.mode = TrainingMode::kDiscrete;
  c.initial_condition = s0;
  c.encoding = policy::InputEncoding::kPreviousAction;
  return c;
}

TrainConfig TrainConfig::discrete_mlp(const InitialCondition& s0) {
  TrainConfig c = discrete_recurrent(s0);
  c.architecture = policy::Architecture::kMlp;
  c.encoding = policy::InputEncoding::kSimulationState;
  c.hidden_layers = 2;
  return c;
}

TrainConfig TrainConfig::with_paper_batch() const {
  TrainConfig c = *this;
  c.batch_size_timesteps = 500'000;
  return c;
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidInput("train config: " + what);
  };
  require(batch_size_timesteps > 0, "batch_size must be positive");
  require(max_path_length > 0, "max_path_length must be positive");
  require(std::isfinite(kl_step) && kl_step > 0, "kl_step must be positive");
  require(discount >= 0 && discount <= 1, "discount must lie in [0, 1]");
  require(gae_lambda >= 0 && gae_lambda <= 1, "gae_lambda must lie in [0, 1]");
  require(iterations >= 0, "iterations must be non-negative");
  require(hidden_dim > 0 && hidden_layers > 0, "network size must be positive");
  require(cg_iterations > 0, "cg_iterations must be positive");
  require(cg_damping >= 0, "cg_damping must be non-negative");
  require(backtrack_ratio > 0 && backtrack_ratio < 1, "backtrack_ratio must lie in (0, 1)");
  require(max_backtracks > 0, "max_backtracks must be positive");
  require(kl_accept_factor >= 1, "kl_accept_factor must be >= 1");
  require(checkpoint_every >= 0, "checkpoint_every must be non-negative");
  require(checkpoint_every == 0 || !checkpoint_dir.empty(), "checkpointing needs a checkpoint_dir");
  support.validate();

  const bool sees_s0 = encoding == policy::InputEncoding::kPreviousActionAndInitialCondition;
  if (mode == TrainingMode::kGeneralized) {
    require(sees_s0, "generalized mode requires the previous_action_and_initial_condition encoding");
    require(architecture == policy::Architecture::kLstm, "generalized mode requires the recurrent policy");
  } else {
    require(!sees_s0, "discrete mode must not feed the initial condition to the policy");
    require(support.contains(initial_condition), "discrete initial condition lies outside the support");
  }
  if (encoding == policy::InputEncoding::kSimulationState)
    require(architecture == policy::Architecture::kMlp, "state input is only supported for the MLP policy");
}

void TrainConfig::apply(const KeyValueConfig& cfg, const std::string& section) {
  const std::string p = section + ".";
  batch_size_timesteps = cfg.get_int(p + "batch_size", batch_size_timesteps);
  max_path_length = static_cast<int>(cfg.get_int(p + "max_path_length", max_path_length));
  kl_step = cfg.get_double(p + "kl_step", kl_step);
  discount = cfg.get_double(p + "discount", discount);
  gae_lambda = cfg.get_double(p + "gae_lambda", gae_lambda);
  iterations = static_cast<int>(cfg.get_int(p + "iterations", iterations));
  hidden_dim = static_cast<int>(cfg.get_int(p + "hidden", hidden_dim));
  hidden_layers = static_cast<int>(cfg.get_int(p + "hidden_layers", hidden_layers));
  cg_iterations = static_cast<int>(cfg.get_int(p + "cg_iterations", cg_iterations));
  cg_damping = cfg.get_double(p + "cg_damping", cg_damping);
  backtrack_ratio = cfg.get_double(p + "backtrack_ratio", backtrack_ratio);
  max_backtracks = static_cast<int>(cfg.get_int(p + "max_backtracks", max_backtracks));
  kl_accept_factor = cfg.get_double(p + "kl_accept_factor", kl_accept_factor);
  normalize_advantages = cfg.get_bool(p + "normalize_advantages", normalize_advantages);
  checkpoint_every = static_cast<int>(cfg.get_int(p + "checkpoint_every", checkpoint_every));
}

}  // namespace ast::pg
