#include "ast/pg/trust_region.hpp"

#include "ast/errors.hpp"
#include "ast/policy/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace ast::pg {
namespace {

double valid_count(const Batch& batch) {
  const auto n = batch.inputs.valid_steps();
  if (n <= 0) throw ContractViolation("trust region: batch has no valid steps");
  return static_cast<double>(n);
}

// log pi(a|x) for every valid (t, b) given precomputed means.
Eigen::MatrixXd log_probs_from_means(const std::vector<Eigen::MatrixXd>& means, const Eigen::VectorXd& log_std,
                                     const Batch& batch) {
  const Eigen::ArrayXd inv_var = (-2.0 * log_std.array()).exp();
  const double norm = log_std.sum() + 0.5 * static_cast<double>(log_std.size()) * std::log(2.0 * std::numbers::pi);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(batch.inputs.steps(), batch.inputs.batch());
  for (int t = 0; t < batch.inputs.steps(); ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const Eigen::RowVectorXd quad =
        ((batch.actions[ts] - means[ts]).array().square().colwise() * inv_var).colwise().sum().matrix();
    for (int b = 0; b < batch.inputs.batch(); ++b)
      if (batch.inputs.valid(t, b)) out(t, b) = -0.5 * quad[b] - norm;
  }
  return out;
}

double surrogate_from_means(const std::vector<Eigen::MatrixXd>& means, const Eigen::VectorXd& log_std,
                            const Batch& batch) {
  const Eigen::MatrixXd lp = log_probs_from_means(means, log_std, batch);
  const Mask mask = batch.mask();
  const Eigen::ArrayXXd ratio = (lp - batch.log_probs).array().exp();
  return (batch.advantages.array() * ratio * mask.cast<double>()).sum() / valid_count(batch);
}

double mean_kl_from_means(const std::vector<Eigen::MatrixXd>& new_means, const Eigen::VectorXd& new_log_std,
                          const std::vector<Eigen::MatrixXd>& old_means, const Eigen::VectorXd& old_log_std,
                          const Batch& batch) {
  const Eigen::ArrayXd var_old = (2.0 * old_log_std.array()).exp();
  const Eigen::ArrayXd inv_var_new = (-2.0 * new_log_std.array()).exp();
  // The log-std part of the KL is the same for every step.
  const double constant = ((new_log_std - old_log_std).array() + 0.5 * var_old * inv_var_new - 0.5).sum();
  double total = 0.0;
  for (int t = 0; t < batch.inputs.steps(); ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const Eigen::RowVectorXd quad =
        ((old_means[ts] - new_means[ts]).array().square().colwise() * inv_var_new).colwise().sum().matrix();
    for (int b = 0; b < batch.inputs.batch(); ++b)
      if (batch.inputs.valid(t, b)) total += 0.5 * quad[b];
  }
  return constant + total / valid_count(batch);
}

}  // namespace

double surrogate(const policy::GaussianPolicy& policy, const Batch& batch) {
  return surrogate_from_means(policy.forward(batch.inputs).means, policy.log_std(), batch);
}

std::pair<double, Eigen::VectorXd> surrogate_and_gradient(const policy::GaussianPolicy& policy, const Batch& batch) {
  const double n = valid_count(batch);
  const auto trace = policy.forward(batch.inputs);
  const Eigen::MatrixXd lp = log_probs_from_means(trace.means, policy.log_std(), batch);
  // d/dtheta of A * ratio = A * ratio * dlogp.
  const Eigen::MatrixXd w = (batch.advantages.array() * (lp - batch.log_probs).array().exp() *
                             batch.mask().cast<double>()).matrix() / n;
  std::vector<Eigen::VectorXd> weights(static_cast<std::size_t>(batch.inputs.steps()));
  for (int t = 0; t < batch.inputs.steps(); ++t) weights[static_cast<std::size_t>(t)] = w.row(t).transpose();
  auto res = policy::log_prob_and_grad(policy, batch.inputs, batch.actions, weights);
  return {surrogate_from_means(trace.means, policy.log_std(), batch), std::move(res.gradient)};
}

double mean_kl(const policy::GaussianPolicy& policy, const Batch& batch, const std::vector<Eigen::MatrixXd>& old_means,
               const Eigen::VectorXd& old_log_std) {
  return mean_kl_from_means(policy.forward(batch.inputs).means, policy.log_std(), old_means, old_log_std, batch);
}

FisherOperator::FisherOperator(const policy::GaussianPolicy& policy, const Batch& batch, double damping)
    : policy_(policy),
      batch_(batch),
      trace_(policy.forward(batch.inputs)),
      inv_var_((-2.0 * policy.log_std().array()).exp()),
      damping_(damping),
      inv_count_(1.0 / valid_count(batch)) {}

Eigen::VectorXd FisherOperator::operator()(const Eigen::VectorXd& v) const {
  std::vector<Eigen::MatrixXd> jv = policy_.jvp(batch_.inputs, trace_, v);
  for (int t = 0; t < batch_.inputs.steps(); ++t) {
    auto& m = jv[static_cast<std::size_t>(t)];
    m = (m.array().colwise() * inv_var_).matrix() * inv_count_;
    for (int b = 0; b < batch_.inputs.batch(); ++b)
      if (!batch_.inputs.valid(t, b)) m.col(b).setZero();
  }
  Eigen::VectorXd out = policy_.backward(batch_.inputs, trace_, jv);
  const Eigen::Index k = policy_.shape().output_dim;
  out.tail(k) = 2.0 * v.tail(k);
  out += damping_ * v;
  return out;
}

CgResult conjugate_gradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, const Eigen::VectorXd& b,
                            int max_iterations, double tolerance) {
  CgResult res;
  res.x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b, p = b;
  double rr = r.squaredNorm();
  for (int i = 0; i < max_iterations && rr > tolerance; ++i) {
    const Eigen::VectorXd ap = apply(p);
    const double pap = p.dot(ap);
    if (!(pap > 0)) break;  // operator not positive along p
    const double alpha = rr / pap;
    res.x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    res.iterations = i + 1;
  }
  res.residual_norm = std::sqrt(rr);
  return res;
}

UpdateDiagnostics trust_region_update(policy::GaussianPolicy& policy, const Batch& batch, const TrainConfig& config) {
  UpdateDiagnostics d;
  const Eigen::VectorXd theta_old = policy.theta();
  const Eigen::VectorXd log_std_old = policy.log_std();
  const auto old_trace = policy.forward(batch.inputs);
  d.surrogate_before = surrogate_from_means(old_trace.means, log_std_old, batch);
  d.surrogate_after = d.surrogate_before;

  const auto [_, g] = surrogate_and_gradient(policy, batch);
  d.gradient_norm = g.norm();
  if (!(d.gradient_norm > 1e-12) || !g.allFinite()) {
    d.note = g.allFinite() ? "zero gradient" : "non-finite gradient";
    return d;
  }

  const FisherOperator fisher(policy, batch, config.cg_damping);
  const CgResult cg = conjugate_gradient(std::cref(fisher), g, config.cg_iterations);
  d.cg_iterations = cg.iterations;
  d.cg_residual = cg.residual_norm;
  const double shs = 0.5 * cg.x.dot(fisher(cg.x));
  if (!(shs > 0) || !std::isfinite(shs)) {
    d.note = "degenerate search direction";
    return d;
  }
  const Eigen::VectorXd full_step = cg.x * std::sqrt(config.kl_step / shs);
  const double max_kl = config.kl_accept_factor * config.kl_step;

  double fraction = 1.0;
  for (int k = 0; k < config.max_backtracks; ++k, fraction *= config.backtrack_ratio) {
    d.backtracks = k;
    const Eigen::VectorXd candidate = theta_old + fraction * full_step;
    policy.set_theta(candidate);
    const auto trace = policy.forward(batch.inputs);
    const Eigen::VectorXd log_std = policy.log_std();
    const double surr = surrogate_from_means(trace.means, log_std, batch);
    const double kl = mean_kl_from_means(trace.means, log_std, old_trace.means, log_std_old, batch);
    d.mean_kl = kl;
    d.surrogate_after = surr;
    d.improvement = surr - d.surrogate_before;
    if (std::isfinite(surr) && std::isfinite(kl) && d.improvement > 0 && kl <= max_kl) {
      d.accepted = true;
      d.step_norm = (fraction * full_step).norm();
      return d;
    }
  }
  policy.set_theta(theta_old);
  d.note = "line search exhausted";
  d.step_norm = 0.0;
  return d;
}

}  // namespace ast::pg
