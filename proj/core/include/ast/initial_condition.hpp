#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <random>
#include <string_view>

namespace ast {

inline constexpr std::size_t kInitialConditionDim = 5;

using Vector5 = Eigen::Matrix<double, 5, 1>;

/// Starting configuration of a scenario: pedestrian position, car position
/// along the road, pedestrian northward speed, car speed.
struct InitialCondition {
  double ped_x = 0.0;
  double ped_y = 0.0;
  double car_x = 0.0;
  double ped_vy = 0.0;
  double car_vx = 0.0;

  Vector5 to_vector() const;
  static InitialCondition from_vector(const Vector5& v);

  double operator[](std::size_t i) const;

  friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

/// Names of the five coordinates, in vector order.
std::string_view initial_condition_name(std::size_t i);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Axis-aligned box of admissible initial conditions.
struct InitialConditionSupport {
  std::array<Interval, kInitialConditionDim> dims{};

  /// The crosswalk ranges: ped x [-1,1], ped y [-6,-2], car x [-43.75,-26.25],
  /// ped vy [0,2], car vx [8.34,13.96].
  static InitialConditionSupport crosswalk_default();

  bool contains(const InitialCondition& s0) const;
  InitialCondition center() const;

  /// Uniform draw over the box.
  template <class Rng>
  InitialCondition sample(Rng& rng) const {
    Vector5 v;
    for (std::size_t i = 0; i < kInitialConditionDim; ++i) {
      std::uniform_real_distribution<double> dist(dims[i].lo, dims[i].hi);
      v[static_cast<Eigen::Index>(i)] = dist(rng);
    }
    return InitialCondition::from_vector(v);
  }

  /// Affine map of each coordinate onto [-1, 1].
  Vector5 normalize(const InitialCondition& s0) const;

  /// Throws InvalidInput when any interval is empty or non-finite.
  void validate() const;
};

}  // namespace ast
