#include "ast/trajectory_io.hpp"

#include "ast/errors.hpp"

#include <json.hpp>

namespace ast {

using nlohmann::json;

std::string trajectory_to_json(const Trajectory& trajectory) {
  json j;
  const Vector5 s0 = trajectory.initial_condition.to_vector();
  j["initial_condition"] = std::vector<double>(s0.data(), s0.data() + s0.size());
  json actions = json::array();
  for (const auto& a : trajectory.actions) actions.push_back(std::vector<double>(a.values().data(), a.values().data() + 6));
  j["actions"] = std::move(actions);
  j["rewards"] = trajectory.rewards;
  j["found_event"] = trajectory.found_event;
  j["final_distance"] = trajectory.final_distance;
  j["total_reward"] = trajectory.total_reward;
  return j.dump();
}

Trajectory trajectory_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Trajectory t;
    const auto s0 = j.at("initial_condition").get<std::vector<double>>();
    if (s0.size() != kInitialConditionDim) throw InvalidInput("trajectory: initial_condition needs 5 entries");
    t.initial_condition = InitialCondition::from_vector(Vector5(s0.data()));
    for (const auto& a : j.at("actions")) {
      const auto v = a.get<std::vector<double>>();
      if (v.size() != kActionDim) throw InvalidInput("trajectory: actions need 6 entries");
      t.actions.emplace_back(Vector6(v.data()));
    }
    t.rewards = j.at("rewards").get<std::vector<double>>();
    if (t.rewards.size() != t.actions.size()) throw InvalidInput("trajectory: rewards and actions differ in length");
    t.found_event = j.at("found_event").get<bool>();
    t.final_distance = j.at("final_distance").get<double>();
    t.total_reward = j.at("total_reward").get<double>();
    return t;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("trajectory: ") + e.what());
  }
}

}  // namespace ast
