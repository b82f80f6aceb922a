#include "ast/pg/baseline.hpp"

#include "ast/errors.hpp"

#include <Eigen/Cholesky>

namespace ast::pg {

Eigen::VectorXd LinearBaseline::features(const Eigen::VectorXd& input, int t) const {
  const double tau = static_cast<double>(t) / horizon_;
  Eigen::VectorXd f(input.size() + 3);
  f << input, tau, tau * tau, 1.0;
  return f;
}

void LinearBaseline::fit(const policy::SequenceBatch& inputs, const Eigen::MatrixXd& returns) {
  if (inputs.steps() == 0 || inputs.batch() == 0) throw ContractViolation("baseline: empty batch");
  if (returns.rows() != inputs.steps() || returns.cols() != inputs.batch())
    throw ContractViolation("baseline: returns shape mismatch");
  const Eigen::Index d = inputs.inputs.front().rows() + 3;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (int t = 0; t < inputs.steps(); ++t) {
    // Gather the valid columns of this step and accumulate in one GEMM.
    int n = 0;
    Eigen::MatrixXd f(d, inputs.batch());
    Eigen::VectorXd y(inputs.batch());
    for (int b = 0; b < inputs.batch(); ++b) {
      if (!inputs.valid(t, b)) continue;
      f.col(n) = features(inputs.inputs[static_cast<std::size_t>(t)].col(b), t);
      y[n] = returns(t, b);
      ++n;
    }
    if (n == 0) continue;
    gram.noalias() += f.leftCols(n) * f.leftCols(n).transpose();
    rhs.noalias() += f.leftCols(n) * y.head(n);
  }
  // Start with a small ridge and grow it until the solve is clean.
  double ridge = 1e-5;
  for (int attempt = 0; attempt < 8; ++attempt, ridge *= 10) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) continue;
    Eigen::VectorXd w = ldlt.solve(rhs);
    if (!w.allFinite()) continue;
    coefficients_ = std::move(w);
    ridge_ = ridge;
    return;
  }
  coefficients_ = Eigen::VectorXd::Zero(d);
  ridge_ = ridge;
}

Eigen::MatrixXd LinearBaseline::predict(const policy::SequenceBatch& inputs) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(inputs.steps(), inputs.batch());
  if (!fitted()) return out;
  for (int t = 0; t < inputs.steps(); ++t)
    for (int b = 0; b < inputs.batch(); ++b)
      if (inputs.valid(t, b))
        out(t, b) = coefficients_.dot(features(inputs.inputs[static_cast<std::size_t>(t)].col(b), t));
  return out;
}

double explained_variance(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target,
                          const policy::SequenceBatch& layout) {
  double n = 0, sum_y = 0, sum_r = 0;
  for (int t = 0; t < layout.steps(); ++t)
    for (int b = 0; b < layout.batch(); ++b)
      if (layout.valid(t, b)) {
        n += 1;
        sum_y += target(t, b);
        sum_r += target(t, b) - prediction(t, b);
      }
  if (n < 2) return 0.0;
  const double mean_y = sum_y / n, mean_r = sum_r / n;
  double var_y = 0, var_r = 0;
  for (int t = 0; t < layout.steps(); ++t)
    for (int b = 0; b < layout.batch(); ++b)
      if (layout.valid(t, b)) {
        var_y += (target(t, b) - mean_y) * (target(t, b) - mean_y);
        const double r = target(t, b) - prediction(t, b) - mean_r;
        var_r += r * r;
      }
  if (var_y <= 0) return 0.0;
  return 1.0 - var_r / var_y;
}

}  // namespace ast::pg
