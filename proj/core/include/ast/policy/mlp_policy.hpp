#pragma once

#include "ast/policy/policy.hpp"

namespace ast::policy {

/// Feed-forward tanh network with a linear mean head. Stateless: every step
/// is independent of the ones before it.
class MlpPolicy final : public GaussianPolicy {
 public:
  explicit MlpPolicy(PolicyParams params);

  HiddenState initial_hidden(int batch) const override;
  Eigen::MatrixXd step(const Eigen::MatrixXd& input, HiddenState& hidden) const override;
  ForwardTrace forward(const SequenceBatch& batch) const override;
  Eigen::VectorXd backward(const SequenceBatch& batch, const ForwardTrace& trace,
                           const std::vector<Eigen::MatrixXd>& dmeans) const override;
  std::vector<Eigen::MatrixXd> jvp(const SequenceBatch& batch, const ForwardTrace& trace,
                                   const Eigen::VectorXd& direction) const override;
  std::unique_ptr<GaussianPolicy> clone() const override;

 private:
  Eigen::MatrixXd layer_forward(const Eigen::MatrixXd& input, std::vector<Eigen::MatrixXd>* acts) const;
};

}  // namespace ast::policy
