#pragma once

#include "ast/action.hpp"
#include "ast/config_file.hpp"
#include "ast/initial_condition.hpp"
#include "ast/reward.hpp"
#include "ast/simulator.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <utility>
#include <vector>

namespace ast::crosswalk {

/// Scene geometry, integration step, and parameters of the rule-based driver.
///
/// Coordinates: x runs along the road in the car's direction of travel, y is
/// across the road with the origin at the centre of the crosswalk. The car
/// drives in the lane centred on y = car_lane_y.
struct ScenarioConfig {
  double dt = 0.1;
  int horizon = 50;

  double car_half_length = 2.4;
  double car_half_width = 0.9;
  double ped_radius = 0.3;
  double lane_width = 3.5;
  double car_lane_y = 1.75;

  // Pedestrian accelerations are clamped to mean +/- this many sigma before
  // integration. The reward still sees the unclamped action.
  double accel_clamp_sigmas = 3.0;

  // Driver: alpha-filter tracker, then brake when the tracked pedestrian is
  // predicted inside the lane corridor while the car passes.
  double tracker_gain = 0.4;
  double brake_decel = 6.0;
  double resume_accel = 1.5;
  double ttc_threshold = 3.5;
  double corridor_margin = 0.5;
  double prediction_buffer = 1.0;
  double stopped_speed = 0.1;

  InitialConditionSupport support = InitialConditionSupport::crosswalk_default();

  /// Reject out-of-support initial conditions (training). When false they
  /// are accepted with a warning on stderr (evaluation).
  bool strict_support = true;

  void validate() const;

  /// Overrides from the [scenario] section of a key-value file.
  static ScenarioConfig from_config(const KeyValueConfig& cfg, const std::string& section = "scenario");
  static ScenarioConfig load(const std::filesystem::path& path);
  /// Key/value pairs that `from_config` reads back to an identical config.
  std::vector<std::pair<std::string, std::string>> to_entries() const;
};

struct SimState {
  Eigen::Vector2d ped_pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d ped_vel = Eigen::Vector2d::Zero();
  Eigen::Vector2d car_pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d car_vel = Eigen::Vector2d::Zero();
  Eigen::Vector4d tracker_estimate = Eigen::Vector4d::Zero();  // est. ped x, y, vx, vy
  double car_target_speed = 0.0;
  int t = 0;
  bool event = false;
};

struct Box {
  Eigen::Vector2d center;
  Eigen::Vector2d half_extent;
};

struct Disc {
  Eigen::Vector2d center;
  double radius;
};

/// Signed gap between the bodies: negative or zero means they overlap.
double separation(const Box& box, const Disc& disc);
double separation(const Disc& disc, const Box& box);

Box car_body(const ScenarioConfig& config, const SimState& state);
Disc pedestrian_body(const ScenarioConfig& config, const SimState& state);

/// Place the car and pedestrian. Throws DomainError for out-of-support s0
/// when config.strict_support is set.
SimState initialize(const ScenarioConfig& config, const InitialCondition& s0);

/// Advance one dt. Throws ContractViolation if the state is already terminal.
std::pair<SimState, StepResult> step(const ScenarioConfig& config, const ActionModel& model, const SimState& state,
                                     const EnvironmentAction& action);

bool is_terminal(const ScenarioConfig& config, const SimState& state);

/// Fixed-order flattening: ped pos, ped vel, car pos, car vel, tracker (4),
/// car target speed, t.
std::vector<double> expose_state(const SimState& state);
inline constexpr std::size_t kExposedStateDim = 14;

/// Acceleration the driver commands for the current state.
double driver_command(const ScenarioConfig& config, const SimState& state);

class CrosswalkSimulator final : public Simulator {
 public:
  explicit CrosswalkSimulator(ScenarioConfig config = {}, ActionModel model = {});

  void initialize(const InitialCondition& s0) override;
  StepResult step(const EnvironmentAction& action) override;
  bool is_terminal() const override;
  int horizon() const override { return config_.horizon; }
  int time_step() const override { return state_.t; }
  const ActionModel& action_model() const override { return model_; }
  std::unique_ptr<Simulator> clone() const override;
  std::vector<double> expose_state() const override;
  std::size_t state_dim() const override { return kExposedStateDim; }

  const SimState& state() const { return state_; }
  const ScenarioConfig& config() const { return config_; }
  ScenarioConfig& mutable_config() { return config_; }

 private:
  ScenarioConfig config_;
  ActionModel model_;
  SimState state_;
  bool initialized_ = false;
};

}  // namespace ast::crosswalk
