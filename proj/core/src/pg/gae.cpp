#include "ast/pg/gae.hpp"

#include "ast/errors.hpp"

#include <cmath>
#include <string>

namespace ast::pg {

std::vector<double> gae_advantages(std::span<const double> rewards, std::span<const double> values, double gamma,
                                   double lambda) {
  if (values.size() != rewards.size() + 1)
    throw ContractViolation("gae: expected " + std::to_string(rewards.size() + 1) + " values, got " +
                            std::to_string(values.size()));
  std::vector<double> adv(rewards.size());
  double running = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    const double delta = rewards[i] + gamma * values[i + 1] - values[i];
    running = delta + gamma * lambda * running;
    adv[i] = running;
  }
  return adv;
}

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma) {
  std::vector<double> out(rewards.size());
  double running = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    running = rewards[i] + gamma * running;
    out[i] = running;
  }
  return out;
}

void normalize_masked(Eigen::MatrixXd& values, const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask) {
  if (values.rows() != mask.rows() || values.cols() != mask.cols())
    throw ContractViolation("normalize_masked: mask shape mismatch");
  const auto n = mask.count();
  if (n == 0) return;
  const Eigen::ArrayXXd m = mask.cast<double>();
  const double mean = (values.array() * m).sum() / static_cast<double>(n);
  // Two-pass variance for accuracy on large-offset rewards.
  const double var = ((values.array() - mean).square() * m).sum() / static_cast<double>(n);
  const double sd = std::sqrt(var);
  for (Eigen::Index j = 0; j < values.cols(); ++j)
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      if (!mask(i, j)) continue;
      values(i, j) -= mean;
      if (sd > 0) values(i, j) /= sd;
    }
}

}  // namespace ast::pg
