#include "ast/policy/policy_input.hpp"

#include "ast/errors.hpp"

#include <string>

namespace ast::policy {

std::string_view to_string(InputEncoding e) {
  switch (e) {
    case InputEncoding::kPreviousAction: return "previous_action";
    case InputEncoding::kPreviousActionAndInitialCondition: return "previous_action_and_initial_condition";
    case InputEncoding::kSimulationState: return "simulation_state";
  }
  return "unknown";
}

InputEncoding input_encoding_from_string(std::string_view s) {
  if (s == "previous_action") return InputEncoding::kPreviousAction;
  if (s == "previous_action_and_initial_condition") return InputEncoding::kPreviousActionAndInitialCondition;
  if (s == "simulation_state") return InputEncoding::kSimulationState;
  throw InvalidInput("unknown input encoding '" + std::string(s) + "'");
}

int input_dim(InputEncoding e, std::size_t state_dim) {
  switch (e) {
    case InputEncoding::kPreviousAction: return static_cast<int>(kActionDim);
    case InputEncoding::kPreviousActionAndInitialCondition:
      return static_cast<int>(kActionDim + kInitialConditionDim);
    case InputEncoding::kSimulationState:
      if (state_dim == 0) throw InvalidInput("simulation-state encoding needs the state dimension");
      return static_cast<int>(state_dim);
  }
  throw InvalidInput("unknown input encoding");
}

Eigen::VectorXd encode_input(InputEncoding e, const Vector6& previous_action, const InitialCondition& s0,
                             const InitialConditionSupport& support, std::span<const double> sim_state) {
  switch (e) {
    case InputEncoding::kPreviousAction: return previous_action;
    case InputEncoding::kPreviousActionAndInitialCondition: {
      Eigen::VectorXd x(kActionDim + kInitialConditionDim);
      x << previous_action, support.normalize(s0);
      return x;
    }
    case InputEncoding::kSimulationState: {
      if (sim_state.empty()) throw InvalidInput("simulation-state encoding needs the exposed state");
      Eigen::VectorXd x(static_cast<Eigen::Index>(sim_state.size()));
      for (std::size_t i = 0; i < sim_state.size(); ++i) x[static_cast<Eigen::Index>(i)] = kStateInputScale * sim_state[i];
      return x;
    }
  }
  throw InvalidInput("unknown input encoding");
}

}  // namespace ast::policy
