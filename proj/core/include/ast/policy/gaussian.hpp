#pragma once

#include "ast/action.hpp"
#include "ast/policy/policy.hpp"
#include "ast/random.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace ast::policy {

/// log N(action; mean, diag(exp(log_std))^2)
double log_prob(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std, const Eigen::VectorXd& action);

struct SampledAction {
  Vector6 action;  // mean + std * draw
  Vector6 draw;    // the standard-normal draw
};

SampledAction sample_action(const Vector6& mean, const Vector6& std, Rng& rng);

/// KL(old || new) between diagonal Gaussians.
double kl_divergence(const Eigen::VectorXd& mean_old, const Eigen::VectorXd& log_std_old,
                     const Eigen::VectorXd& mean_new, const Eigen::VectorXd& log_std_new);

struct LogProbResult {
  /// log_probs[t](b); entries for padded steps are 0.
  std::vector<Eigen::VectorXd> log_probs;
  /// Gradient of sum over valid (t, b) of weight(t, b) * log_prob(t, b).
  Eigen::VectorXd gradient;
};

/// Per-step log-probabilities of `actions` under the policy, and the BPTT
/// gradient of their (optionally weighted) sum. actions[t] is
/// output_dim x batch; weights[t] (if given) has one entry per sequence.
LogProbResult log_prob_and_grad(const GaussianPolicy& policy, const SequenceBatch& batch,
                                const std::vector<Eigen::MatrixXd>& actions,
                                const std::optional<std::vector<Eigen::VectorXd>>& weights = std::nullopt);

}  // namespace ast::policy
