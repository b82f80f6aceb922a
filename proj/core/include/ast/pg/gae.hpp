#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace ast::pg {

/// A_t = sum_l (gamma * lambda)^l * delta_{t+l}, delta_t = r_t + gamma V_{t+1} - V_t,
/// by backward recursion. `values` holds one more entry than `rewards` (the
/// bootstrap, 0 for a terminal state). Throws ContractViolation on a length
/// mismatch.
std::vector<double> gae_advantages(std::span<const double> rewards, std::span<const double> values, double gamma,
                                   double lambda);

/// Discounted reward-to-go.
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma);

/// Shift and scale the entries where mask is set to zero mean and unit
/// population variance. Masked-out entries are left untouched. If the
/// entries are constant they are only centred.
void normalize_masked(Eigen::MatrixXd& values, const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask);

}  // namespace ast::pg
