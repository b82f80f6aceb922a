#pragma once

#include "ast/pg/batch.hpp"
#include "ast/pg/train_config.hpp"
#include "ast/policy/policy.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>

namespace ast::pg {

/// (1/N) * sum over valid steps of A * exp(log pi_theta(a|x) - log pi_old(a|x)).
double surrogate(const policy::GaussianPolicy& policy, const Batch& batch);

/// Surrogate value and its gradient with respect to theta.
std::pair<double, Eigen::VectorXd> surrogate_and_gradient(const policy::GaussianPolicy& policy, const Batch& batch);

/// Mean over valid steps of KL(old || new), where `old_means` were produced by
/// the collecting policy with log-stds `old_log_std`.
double mean_kl(const policy::GaussianPolicy& policy, const Batch& batch, const std::vector<Eigen::MatrixXd>& old_means,
               const Eigen::VectorXd& old_log_std);

/// Fisher-vector product of the mean-KL Hessian at the current parameters
/// (Gauss-Newton through the mean network, exact 2 on each log-std), plus
/// damping * v.
class FisherOperator {
 public:
  FisherOperator(const policy::GaussianPolicy& policy, const Batch& batch, double damping);
  Eigen::VectorXd operator()(const Eigen::VectorXd& v) const;

 private:
  const policy::GaussianPolicy& policy_;
  const Batch& batch_;
  policy::ForwardTrace trace_;
  Eigen::ArrayXd inv_var_;
  double damping_;
  double inv_count_;
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Solve A x = b for symmetric positive definite A given only products.
CgResult conjugate_gradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, const Eigen::VectorXd& b,
                            int max_iterations, double tolerance = 1e-10);

struct UpdateDiagnostics {
  bool accepted = false;
  double mean_kl = 0.0;  // measured at the accepted (or last tried) step
  double surrogate_before = 0.0;
  double surrogate_after = 0.0;
  double improvement = 0.0;
  double step_norm = 0.0;
  double gradient_norm = 0.0;
  int backtracks = 0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  std::string note;
};

/// Natural-gradient step on the surrogate, scaled to the kl_step boundary,
/// followed by exponential backtracking. A step is accepted only if it
/// improves the surrogate and keeps the measured mean KL at or below
/// kl_accept_factor * kl_step; otherwise the policy is left unchanged.
UpdateDiagnostics trust_region_update(policy::GaussianPolicy& policy, const Batch& batch, const TrainConfig& config);

}  // namespace ast::pg
