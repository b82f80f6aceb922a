#include "ast/policy/gaussian.hpp"

#include "ast/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ast::policy {

double log_prob(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std, const Eigen::VectorXd& action) {
  const Eigen::ArrayXd z = (action - mean).array() * (-log_std.array()).exp();
  return -0.5 * z.square().sum() - log_std.sum() -
         0.5 * static_cast<double>(mean.size()) * std::log(2.0 * std::numbers::pi);
}

SampledAction sample_action(const Vector6& mean, const Vector6& std, Rng& rng) {
  if ((std.array() < 0.0).any()) throw InvalidInput("sample_action: std must be non-negative");
  std::normal_distribution<double> normal;
  SampledAction s;
  for (Eigen::Index i = 0; i < 6; ++i) s.draw[i] = normal(rng);
  s.action = mean + std.cwiseProduct(s.draw);
  return s;
}

double kl_divergence(const Eigen::VectorXd& mean_old, const Eigen::VectorXd& log_std_old,
                     const Eigen::VectorXd& mean_new, const Eigen::VectorXd& log_std_new) {
  const Eigen::ArrayXd var_old = (2.0 * log_std_old.array()).exp();
  const Eigen::ArrayXd var_new = (2.0 * log_std_new.array()).exp();
  const Eigen::ArrayXd dm = (mean_old - mean_new).array();
  return ((log_std_new - log_std_old).array() + (var_old + dm.square()) / (2.0 * var_new) - 0.5).sum();
}

LogProbResult log_prob_and_grad(const GaussianPolicy& policy, const SequenceBatch& batch,
                                const std::vector<Eigen::MatrixXd>& actions,
                                const std::optional<std::vector<Eigen::VectorXd>>& weights) {
  const int steps = batch.steps(), n = batch.batch();
  if (static_cast<int>(actions.size()) != steps) throw InvalidInput("log_prob_and_grad: actions misaligned with inputs");
  if (weights && static_cast<int>(weights->size()) != steps)
    throw InvalidInput("log_prob_and_grad: weights misaligned with inputs");

  const ForwardTrace trace = policy.forward(batch);
  const Eigen::VectorXd log_std = policy.log_std();
  const Eigen::ArrayXd inv_var = (-2.0 * log_std.array()).exp();
  const double norm = log_std.sum() + 0.5 * static_cast<double>(log_std.size()) * std::log(2.0 * std::numbers::pi);

  LogProbResult out;
  out.log_probs.resize(static_cast<std::size_t>(steps));
  std::vector<Eigen::MatrixXd> dmeans(static_cast<std::size_t>(steps));
  Eigen::ArrayXd dlog_std = Eigen::ArrayXd::Zero(log_std.size());

  for (int t = 0; t < steps; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const Eigen::MatrixXd& a = actions[ts];
    if (a.rows() != log_std.size() || a.cols() != n) throw InvalidInput("log_prob_and_grad: action shape mismatch");
    const Eigen::ArrayXXd diff = (a - trace.means[ts]).array();
    const Eigen::ArrayXXd z2 = diff.square().colwise() * inv_var;
    out.log_probs[ts] = Eigen::VectorXd::Zero(n);
    dmeans[ts] = Eigen::MatrixXd::Zero(log_std.size(), n);
    for (int b = 0; b < n; ++b) {
      if (!batch.valid(t, b)) continue;
      out.log_probs[ts][b] = -0.5 * z2.col(b).sum() - norm;
      const double w = weights ? (*weights)[ts][b] : 1.0;
      dmeans[ts].col(b) = (w * diff.col(b) * inv_var).matrix();
      dlog_std += w * (z2.col(b) - 1.0);
    }
  }
  out.gradient = policy.backward(batch, trace, dmeans);
  out.gradient.tail(log_std.size()) = dlog_std.matrix();
  return out;
}

}  // namespace ast::policy
