#include "ast/action.hpp"

#include "ast/errors.hpp"

#include <cmath>

namespace ast {

EnvironmentAction::EnvironmentAction(const Eigen::Vector2d& ped_accel, const Eigen::Vector2d& obs_noise_pos,
                                     const Eigen::Vector2d& obs_noise_vel) {
  values_ << ped_accel, obs_noise_pos, obs_noise_vel;
}

Vector6 ActionModel::default_variance() {
  Vector6 v;
  v << 1.0, 1.0, 0.01, 0.01, 0.01, 0.01;
  return v;
}

ActionModel ActionModel::from_std(const Vector6& mean, const Vector6& std) {
  ActionModel m;
  m.mean = mean;
  m.variance = std.cwiseProduct(std);
  m.validate();
  return m;
}

void ActionModel::validate() const {
  if (!mean.allFinite()) throw InvalidInput("action model mean must be finite");
  for (Eigen::Index i = 0; i < variance.size(); ++i) {
    if (!std::isfinite(variance[i]) || variance[i] <= 0.0)
      throw InvalidInput("action model variances must be finite and strictly positive");
  }
}

Vector6 ActionModel::normalize(const EnvironmentAction& action) const {
  return (action.values() - mean).cwiseQuotient(std());
}

EnvironmentAction ActionModel::denormalize(const Vector6& normalized) const {
  return EnvironmentAction(mean + std().cwiseProduct(normalized));
}

double mahalanobis(const EnvironmentAction& action, const ActionModel& model) {
  if (!action.all_finite()) throw InvalidInput("mahalanobis: action has non-finite components");
  model.validate();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < 6; ++i) {
    const double d = action.values()[i] - model.mean[i];
    sum += d * d / model.variance[i];
  }
  return std::sqrt(sum);
}

}  // namespace ast
