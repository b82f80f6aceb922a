#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace ast {

inline constexpr std::size_t kActionDim = 6;

using Vector6 = Eigen::Matrix<double, 6, 1>;

/// One time-step of environment disturbance: pedestrian acceleration plus the
/// noise injected into the SUT's observation of the pedestrian.
///
/// Layout of the underlying 6-vector:
///   [0,1] pedestrian acceleration (m/s^2)
///   [2,3] observation noise on pedestrian position (m)
///   [4,5] observation noise on pedestrian velocity (m/s)
class EnvironmentAction {
 public:
  EnvironmentAction() : values_(Vector6::Zero()) {}
  explicit EnvironmentAction(const Vector6& values) : values_(values) {}
  EnvironmentAction(const Eigen::Vector2d& ped_accel, const Eigen::Vector2d& obs_noise_pos,
                    const Eigen::Vector2d& obs_noise_vel);

  static EnvironmentAction zero() { return EnvironmentAction(); }

  Eigen::Vector2d ped_accel() const { return values_.segment<2>(0); }
  Eigen::Vector2d obs_noise_pos() const { return values_.segment<2>(2); }
  Eigen::Vector2d obs_noise_vel() const { return values_.segment<2>(4); }

  const Vector6& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  bool all_finite() const { return values_.allFinite(); }

  friend bool operator==(const EnvironmentAction& a, const EnvironmentAction& b) {
    return a.values_ == b.values_;
  }

 private:
  Vector6 values_;
};

/// Diagonal Gaussian disturbance model: the expected action and per-axis
/// variance used by the likelihood proxy.
struct ActionModel {
  Vector6 mean = Vector6::Zero();
  Vector6 variance = default_variance();

  /// sigma = 1 m/s^2 per acceleration axis, 0.1 m per position-noise axis,
  /// 0.1 m/s per velocity-noise axis.
  static Vector6 default_variance();
  static ActionModel from_std(const Vector6& mean, const Vector6& std);

  Vector6 std() const { return variance.cwiseSqrt(); }

  /// Throws InvalidInput unless every variance is finite and > 0.
  void validate() const;

  /// Map a physical action to units of sigma around the mean, and back.
  Vector6 normalize(const EnvironmentAction& action) const;
  EnvironmentAction denormalize(const Vector6& normalized) const;
};

/// sqrt(sum_i (a_i - mu_i)^2 / sigma_i^2). Throws InvalidInput on non-finite
/// action components or a model with non-positive variances.
double mahalanobis(const EnvironmentAction& action, const ActionModel& model);

}  // namespace ast
