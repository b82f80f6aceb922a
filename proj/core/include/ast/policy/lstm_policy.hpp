#pragma once

#include "ast/policy/policy.hpp"

namespace ast::policy {

/// Single-cell LSTM with a linear mean head.
///
///   z_t = W x_t + U h_{t-1} + b,   gates stacked as [input, forget, cell, output]
///   c_t = f * c_{t-1} + i * g,     h_t = o * tanh(c_t)
///   mean_t = V h_t + d
class LstmPolicy final : public GaussianPolicy {
 public:
  explicit LstmPolicy(PolicyParams params);

  HiddenState initial_hidden(int batch) const override;
  Eigen::MatrixXd step(const Eigen::MatrixXd& input, HiddenState& hidden) const override;
  ForwardTrace forward(const SequenceBatch& batch) const override;
  Eigen::VectorXd backward(const SequenceBatch& batch, const ForwardTrace& trace,
                           const std::vector<Eigen::MatrixXd>& dmeans) const override;
  std::vector<Eigen::MatrixXd> jvp(const SequenceBatch& batch, const ForwardTrace& trace,
                                   const Eigen::VectorXd& direction) const override;
  std::unique_ptr<GaussianPolicy> clone() const override;
};

/// Offsets of each parameter block inside theta.
struct LstmLayout {
  Eigen::Index w = 0, u = 0, b = 0, v = 0, d = 0, log_std = 0, total = 0;
  static LstmLayout of(const PolicyShape& shape);
};

}  // namespace ast::policy
