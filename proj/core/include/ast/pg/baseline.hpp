#pragma once

#include "ast/policy/policy.hpp"

#include <Eigen/Core>

#include <utility>

namespace ast::pg {

/// Linear value function over [policy input, tau, tau^2, 1] with tau = t / horizon,
/// refit from scratch every iteration by ridge-regularized least squares.
class LinearBaseline {
 public:
  explicit LinearBaseline(int horizon) : horizon_(horizon) {}

  /// Fit to `returns` (steps x batch, valid entries only).
  void fit(const policy::SequenceBatch& inputs, const Eigen::MatrixXd& returns);

  /// Predictions, steps x batch; padded entries are 0.
  Eigen::MatrixXd predict(const policy::SequenceBatch& inputs) const;

  bool fitted() const { return coefficients_.size() > 0; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  /// Restore a previous fit (empty = unfitted).
  void set_coefficients(Eigen::VectorXd w) { coefficients_ = std::move(w); }
  /// Ridge strength used by the last fit (grows when the system is singular).
  double ridge() const { return ridge_; }

  Eigen::VectorXd features(const Eigen::VectorXd& input, int t) const;

 private:
  int horizon_;
  double ridge_ = 0.0;
  Eigen::VectorXd coefficients_;
};

/// 1 - Var(target - prediction) / Var(target) over valid entries. Returns 0
/// when the target has zero variance.
double explained_variance(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target,
                          const policy::SequenceBatch& layout);

}  // namespace ast::pg
