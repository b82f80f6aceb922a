#pragma once

#include "ast/action.hpp"
#include "ast/initial_condition.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string_view>

namespace ast::policy {

/// What the policy sees at each step.
enum class InputEncoding : std::uint32_t {
  kPreviousAction = 0,                     // x_t = a_{t-1}
  kPreviousActionAndInitialCondition = 1,  // x_t = [a_{t-1}, s0]
  kSimulationState = 2,                    // x_t = exposed simulator state
};

std::string_view to_string(InputEncoding e);
InputEncoding input_encoding_from_string(std::string_view s);

/// Input width for an encoding; `state_dim` matters only for kSimulationState.
int input_dim(InputEncoding e, std::size_t state_dim = 0);

/// Scale applied to raw simulator state before it reaches the network.
inline constexpr double kStateInputScale = 0.1;

/// Build x_t. The previous action is in sigma units (zero at t = 0); the
/// initial condition is mapped onto [-1, 1] over `support`.
Eigen::VectorXd encode_input(InputEncoding e, const Vector6& previous_action, const InitialCondition& s0,
                             const InitialConditionSupport& support, std::span<const double> sim_state = {});

}  // namespace ast::policy
