#pragma once

#include "ast/trajectory.hpp"

#include <string>
#include <string_view>

namespace ast {

/// One-line JSON object:
///   {"initial_condition":[5], "actions":[[6],...], "rewards":[...],
///    "found_event":bool, "final_distance":x, "total_reward":x}
/// Doubles are written with enough digits to round-trip exactly.
std::string trajectory_to_json(const Trajectory& trajectory);

/// Inverse of trajectory_to_json. Throws InvalidInput on malformed input.
Trajectory trajectory_from_json(std::string_view text);

}  // namespace ast
