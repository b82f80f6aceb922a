#include "ast/crosswalk/crosswalk.hpp"

#include "ast/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace ast::crosswalk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

struct Window {
  double enter = kInf;
  double exit = -kInf;
  bool empty() const { return enter > exit; }
};

// Times at which a point moving along y at speed vy lies inside [lo, hi].
Window occupancy(double y, double vy, double lo, double hi) {
  if (y >= lo && y <= hi) {
    if (vy > 0.0) return {0.0, (hi - y) / vy};
    if (vy < 0.0) return {0.0, (y - lo) / -vy};
    return {0.0, kInf};
  }
  if (y < lo && vy > 0.0) return {(lo - y) / vy, (hi - y) / vy};
  if (y > hi && vy < 0.0) return {(y - hi) / -vy, (y - lo) / -vy};
  return {};
}

}  // namespace

void ScenarioConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string("scenario: ") + name + " must be > 0");
  };
  positive(dt, "dt");
  positive(car_half_length, "car_half_length");
  positive(car_half_width, "car_half_width");
  positive(ped_radius, "ped_radius");
  positive(lane_width, "lane_width");
  positive(accel_clamp_sigmas, "accel_clamp_sigmas");
  positive(brake_decel, "brake_decel");
  positive(resume_accel, "resume_accel");
  positive(ttc_threshold, "ttc_threshold");
  positive(stopped_speed, "stopped_speed");
  if (horizon < 1) throw InvalidInput("scenario: horizon must be >= 1");
  if (!(tracker_gain > 0.0 && tracker_gain <= 1.0)) throw InvalidInput("scenario: tracker_gain must be in (0, 1]");
  if (corridor_margin < 0.0 || prediction_buffer < 0.0)
    throw InvalidInput("scenario: corridor_margin and prediction_buffer must be >= 0");
  support.validate();
}

ScenarioConfig ScenarioConfig::from_config(const KeyValueConfig& cfg, const std::string& section) {
  ScenarioConfig c;
  const auto key = [&](const char* name) { return section + "." + name; };
  c.dt = cfg.get_double(key("dt"), c.dt);
  c.horizon = static_cast<int>(cfg.get_int(key("horizon"), c.horizon));
  c.car_half_length = cfg.get_double(key("car_half_length"), c.car_half_length);
  c.car_half_width = cfg.get_double(key("car_half_width"), c.car_half_width);
  c.ped_radius = cfg.get_double(key("ped_radius"), c.ped_radius);
  c.lane_width = cfg.get_double(key("lane_width"), c.lane_width);
  c.car_lane_y = cfg.get_double(key("car_lane_y"), c.car_lane_y);
  c.accel_clamp_sigmas = cfg.get_double(key("accel_clamp_sigmas"), c.accel_clamp_sigmas);
  c.tracker_gain = cfg.get_double(key("tracker_gain"), c.tracker_gain);
  c.brake_decel = cfg.get_double(key("brake_decel"), c.brake_decel);
  c.resume_accel = cfg.get_double(key("resume_accel"), c.resume_accel);
  c.ttc_threshold = cfg.get_double(key("ttc_threshold"), c.ttc_threshold);
  c.corridor_margin = cfg.get_double(key("corridor_margin"), c.corridor_margin);
  c.prediction_buffer = cfg.get_double(key("prediction_buffer"), c.prediction_buffer);
  c.stopped_speed = cfg.get_double(key("stopped_speed"), c.stopped_speed);
  c.strict_support = cfg.get_bool(key("strict_support"), c.strict_support);
  for (std::size_t i = 0; i < kInitialConditionDim; ++i) {
    const std::string k = section + ".support." + std::string(initial_condition_name(i));
    const auto range = cfg.get_doubles(k, {c.support.dims[i].lo, c.support.dims[i].hi});
    if (range.size() != 2) throw ConfigError("config key '" + k + "': expected 'min, max'");
    c.support.dims[i] = Interval{range[0], range[1]};
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path));
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::to_entries() const {
  std::vector<std::pair<std::string, std::string>> out = {
      {"dt", format_double(dt)},
      {"horizon", std::to_string(horizon)},
      {"car_half_length", format_double(car_half_length)},
      {"car_half_width", format_double(car_half_width)},
      {"ped_radius", format_double(ped_radius)},
      {"lane_width", format_double(lane_width)},
      {"car_lane_y", format_double(car_lane_y)},
      {"accel_clamp_sigmas", format_double(accel_clamp_sigmas)},
      {"tracker_gain", format_double(tracker_gain)},
      {"brake_decel", format_double(brake_decel)},
      {"resume_accel", format_double(resume_accel)},
      {"ttc_threshold", format_double(ttc_threshold)},
      {"corridor_margin", format_double(corridor_margin)},
      {"prediction_buffer", format_double(prediction_buffer)},
      {"stopped_speed", format_double(stopped_speed)},
      {"strict_support", strict_support ? "true" : "false"},
  };
  for (std::size_t i = 0; i < kInitialConditionDim; ++i)
    out.emplace_back("support." + std::string(initial_condition_name(i)),
                     format_double(support.dims[i].lo) + ", " + format_double(support.dims[i].hi));
  return out;
}

double separation(const Box& box, const Disc& disc) {
  const Eigen::Vector2d d = (disc.center - box.center).cwiseAbs() - box.half_extent;
  const double outside = d.cwiseMax(0.0).norm();
  const double inside = std::min(std::max(d.x(), d.y()), 0.0);
  return outside + inside - disc.radius;
}

double separation(const Disc& disc, const Box& box) {
  // Work in the disc frame: distance from the origin to the translated box.
  const Eigen::Vector2d lo = box.center - box.half_extent - disc.center;
  const Eigen::Vector2d hi = box.center + box.half_extent - disc.center;
  const Eigen::Vector2d nearest = Eigen::Vector2d::Zero().cwiseMax(lo).cwiseMin(hi);
  double gap = nearest.norm();
  if (gap == 0.0) {
    // Origin inside the box: negative depth to the closest face.
    gap = -std::min({-lo.x(), hi.x(), -lo.y(), hi.y()});
  }
  return gap - disc.radius;
}

Box car_body(const ScenarioConfig& config, const SimState& state) {
  return Box{state.car_pos, Eigen::Vector2d(config.car_half_length, config.car_half_width)};
}

Disc pedestrian_body(const ScenarioConfig& config, const SimState& state) {
  return Disc{state.ped_pos, config.ped_radius};
}

SimState initialize(const ScenarioConfig& config, const InitialCondition& s0) {
  if (!s0.to_vector().allFinite()) throw InvalidInput("initial condition must be finite");
  if (!config.support.contains(s0)) {
    if (config.strict_support) throw DomainError("initial condition outside the scenario support");
    std::cerr << "warning: initial condition outside the scenario support\n";
  }
  SimState s;
  s.ped_pos = Eigen::Vector2d(s0.ped_x, s0.ped_y);
  s.ped_vel = Eigen::Vector2d(0.0, s0.ped_vy);
  s.car_pos = Eigen::Vector2d(s0.car_x, config.car_lane_y);
  s.car_vel = Eigen::Vector2d(s0.car_vx, 0.0);
  s.tracker_estimate << s.ped_pos, s.ped_vel;
  s.car_target_speed = s0.car_vx;
  s.t = 0;
  s.event = false;
  return s;
}

double driver_command(const ScenarioConfig& c, const SimState& s) {
  const Eigen::Vector2d p(s.tracker_estimate[0], s.tracker_estimate[1]);
  const Eigen::Vector2d v(s.tracker_estimate[2], s.tracker_estimate[3]);
  const double speed = s.car_vel.x();
  const double front = s.car_pos.x() + c.car_half_length;
  const double rear = s.car_pos.x() - c.car_half_length;
  const double reach = c.car_half_width + c.ped_radius + c.corridor_margin;

  bool threat = false;
  if (p.x() + c.ped_radius >= rear) {
    const double gap = std::max(0.0, p.x() - c.ped_radius - front);
    const bool stopped = speed <= c.stopped_speed;
    const double arrive = stopped ? 0.0 : gap / speed;
    const double clear = stopped ? kInf : (p.x() + c.ped_radius - rear) / speed;
    const Window w = occupancy(p.y(), v.y(), c.car_lane_y - reach, c.car_lane_y + reach);
    if (!w.empty() && arrive <= c.ttc_threshold) {
      threat = w.enter <= clear + c.prediction_buffer && w.exit >= arrive - c.prediction_buffer;
    }
  }
  if (threat) return -c.brake_decel;
  return speed < s.car_target_speed ? c.resume_accel : 0.0;
}

std::pair<SimState, StepResult> step(const ScenarioConfig& config, const ActionModel& model, const SimState& state,
                                     const EnvironmentAction& action) {
  if (is_terminal(config, state)) throw ContractViolation("step called on a terminal crosswalk state");
  if (!action.all_finite()) throw InvalidInput("action has non-finite components");

  SimState next = state;
  const double dt = config.dt;

  // Pedestrian: semi-implicit Euler on the clamped acceleration.
  const Eigen::Vector2d mean_acc = model.mean.segment<2>(0);
  const Eigen::Vector2d bound = config.accel_clamp_sigmas * model.variance.segment<2>(0).cwiseSqrt();
  const Eigen::Vector2d acc = action.ped_accel().cwiseMax(mean_acc - bound).cwiseMin(mean_acc + bound);
  next.ped_vel = state.ped_vel + acc * dt;
  next.ped_pos = state.ped_pos + next.ped_vel * dt;

  // Driver observes the new pedestrian state through the injected noise.
  Eigen::Vector4d observed;
  observed << next.ped_pos + action.obs_noise_pos(), next.ped_vel + action.obs_noise_vel();
  next.tracker_estimate = state.tracker_estimate + config.tracker_gain * (observed - state.tracker_estimate);

  const double command = driver_command(config, next);
  next.car_vel.x() = std::max(0.0, state.car_vel.x() + command * dt);
  next.car_pos.x() = state.car_pos.x() + next.car_vel.x() * dt;

  next.t = state.t + 1;
  const double gap = separation(car_body(config, next), pedestrian_body(config, next));
  next.event = gap <= 0.0;

  StepResult result;
  result.reward_contribution = mahalanobis(action, model);
  result.event = next.event;
  result.distance = std::max(0.0, gap);
  result.terminal = is_terminal(config, next);
  return {next, result};
}

bool is_terminal(const ScenarioConfig& config, const SimState& state) {
  return state.event || state.t >= config.horizon;
}

std::vector<double> expose_state(const SimState& s) {
  return {s.ped_pos.x(),
          s.ped_pos.y(),
          s.ped_vel.x(),
          s.ped_vel.y(),
          s.car_pos.x(),
          s.car_pos.y(),
          s.car_vel.x(),
          s.car_vel.y(),
          s.tracker_estimate[0],
          s.tracker_estimate[1],
          s.tracker_estimate[2],
          s.tracker_estimate[3],
          s.car_target_speed,
          static_cast<double>(s.t)};
}

CrosswalkSimulator::CrosswalkSimulator(ScenarioConfig config, ActionModel model)
    : config_(std::move(config)), model_(std::move(model)) {
  config_.validate();
  model_.validate();
}

void CrosswalkSimulator::initialize(const InitialCondition& s0) {
  state_ = crosswalk::initialize(config_, s0);
  initialized_ = true;
}

StepResult CrosswalkSimulator::step(const EnvironmentAction& action) {
  if (!initialized_) throw ContractViolation("crosswalk simulator stepped before initialize");
  auto [next, result] = crosswalk::step(config_, model_, state_, action);
  state_ = next;
  return result;
}

bool CrosswalkSimulator::is_terminal() const { return initialized_ && crosswalk::is_terminal(config_, state_); }

std::unique_ptr<Simulator> CrosswalkSimulator::clone() const { return std::make_unique<CrosswalkSimulator>(*this); }

std::vector<double> CrosswalkSimulator::expose_state() const { return crosswalk::expose_state(state_); }

}  // namespace ast::crosswalk
