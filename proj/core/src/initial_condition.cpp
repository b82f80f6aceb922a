#include "ast/initial_condition.hpp"

#include "ast/errors.hpp"

#include <cmath>

namespace ast {

Vector5 InitialCondition::to_vector() const {
  Vector5 v;
  v << ped_x, ped_y, car_x, ped_vy, car_vx;
  return v;
}

InitialCondition InitialCondition::from_vector(const Vector5& v) {
  return InitialCondition{v[0], v[1], v[2], v[3], v[4]};
}

double InitialCondition::operator[](std::size_t i) const {
  switch (i) {
    case 0: return ped_x;
    case 1: return ped_y;
    case 2: return car_x;
    case 3: return ped_vy;
    case 4: return car_vx;
    default: throw InvalidInput("initial condition index out of range");
  }
}

std::string_view initial_condition_name(std::size_t i) {
  static constexpr std::string_view names[] = {"ped_x", "ped_y", "car_x", "ped_vy", "car_vx"};
  if (i >= kInitialConditionDim) throw InvalidInput("initial condition index out of range");
  return names[i];
}

InitialConditionSupport InitialConditionSupport::crosswalk_default() {
  InitialConditionSupport s;
  s.dims = {Interval{-1.0, 1.0}, Interval{-6.0, -2.0}, Interval{-43.75, -26.25}, Interval{0.0, 2.0},
            Interval{8.34, 13.96}};
  return s;
}

bool InitialConditionSupport::contains(const InitialCondition& s0) const {
  for (std::size_t i = 0; i < kInitialConditionDim; ++i)
    if (!dims[i].contains(s0[i])) return false;
  return true;
}

InitialCondition InitialConditionSupport::center() const {
  Vector5 v;
  for (std::size_t i = 0; i < kInitialConditionDim; ++i) v[static_cast<Eigen::Index>(i)] = dims[i].center();
  return InitialCondition::from_vector(v);
}

Vector5 InitialConditionSupport::normalize(const InitialCondition& s0) const {
  Vector5 v;
  for (std::size_t i = 0; i < kInitialConditionDim; ++i) {
    const double w = dims[i].width();
    v[static_cast<Eigen::Index>(i)] = w > 0.0 ? 2.0 * (s0[i] - dims[i].lo) / w - 1.0 : 0.0;
  }
  return v;
}

void InitialConditionSupport::validate() const {
  for (std::size_t i = 0; i < kInitialConditionDim; ++i) {
    const auto& d = dims[i];
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi))
      throw InvalidInput("support interval for " + std::string(initial_condition_name(i)) + " is invalid");
  }
}

}  // namespace ast
