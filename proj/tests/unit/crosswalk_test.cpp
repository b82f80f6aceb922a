#include "ast/crosswalk/crosswalk.hpp"
#include "ast/errors.hpp"
#include "ast/random.hpp"
#include "ast/rollout.hpp"

#include <gtest/gtest.h>

#include <random>

namespace ast::crosswalk {
namespace {

TEST(Crosswalk, InitializePlacesBodies) {
  ScenarioConfig c;
  const SimState s = initialize(c, InitialCondition{0, -4, -35, 1, 11.17});
  EXPECT_EQ(s.car_pos, Eigen::Vector2d(-35, c.car_lane_y));
  EXPECT_EQ(s.car_vel, Eigen::Vector2d(11.17, 0));
  EXPECT_EQ(s.ped_pos, Eigen::Vector2d(0, -4));
  EXPECT_EQ(s.ped_vel, Eigen::Vector2d(0, 1));
  EXPECT_EQ(s.t, 0);
  EXPECT_FALSE(is_terminal(c, s));
}

TEST(Crosswalk, BoundaryInitialConditions) {
  ScenarioConfig c;
  EXPECT_EQ(initialize(c, InitialCondition{0, -4, -35, 0, 11}).ped_vel, Eigen::Vector2d::Zero());
  EXPECT_EQ(initialize(c, InitialCondition{0, -4, -43.75, 1, 11}).car_pos.x(), -43.75);
}

TEST(Crosswalk, OutOfSupportPolicy) {
  ScenarioConfig c;
  const InitialCondition outside{0, -4, -60, 1, 11};
  EXPECT_THROW(initialize(c, outside), DomainError);
  c.strict_support = false;
  EXPECT_NO_THROW(initialize(c, outside));
}

TEST(Crosswalk, SemiImplicitEulerStep) {
  ScenarioConfig c;
  const SimState s = initialize(c, InitialCondition{0, -6, -43.75, 1, 8.34});
  const auto [next, r] = step(c, ActionModel{}, s, EnvironmentAction(Eigen::Vector2d(0, 1), {0, 0}, {0, 0}));
  EXPECT_DOUBLE_EQ(next.ped_vel.y(), 1.1);
  EXPECT_DOUBLE_EQ(next.ped_pos.y(), -6 + 0.11);
  EXPECT_EQ(next.t, 1);
  EXPECT_FALSE(r.event);
  EXPECT_EQ(r.reward_contribution, 1.0);
}

TEST(Crosswalk, AccelerationIsClampedButRewardIsNot) {
  ScenarioConfig c;
  const SimState s = initialize(c, InitialCondition{0, -6, -43.75, 1, 8.34});
  const auto [next, r] = step(c, ActionModel{}, s, EnvironmentAction(Eigen::Vector2d(0, 10), {0, 0}, {0, 0}));
  EXPECT_DOUBLE_EQ(next.ped_vel.y(), 1.3);
  EXPECT_EQ(r.reward_contribution, 10.0);
}

TEST(Crosswalk, PedestrianInsideCarIsEvent) {
  ScenarioConfig c;
  SimState s = initialize(c, InitialCondition{0, -4, -35, 1, 11});
  s.ped_pos = s.car_pos + Eigen::Vector2d(2.0, 0.0);
  s.ped_vel.setZero();
  s.tracker_estimate << s.ped_pos, s.ped_vel;
  const auto [next, r] = step(c, ActionModel{}, s, EnvironmentAction{});
  EXPECT_TRUE(r.event);
  EXPECT_TRUE(r.terminal);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_TRUE(is_terminal(c, next));
  EXPECT_THROW(step(c, ActionModel{}, next, EnvironmentAction{}), ContractViolation);
}

TEST(Crosswalk, TerminalAtHorizon) {
  ScenarioConfig c;
  SimState s = initialize(c, InitialCondition{0, -4, -35, 1, 11});
  s.t = 50;
  EXPECT_TRUE(is_terminal(c, s));
}

TEST(Crosswalk, ZeroActionsPassingCarDistanceFallsThenRises) {
  ScenarioConfig c;
  CrosswalkSimulator sim(c);
  sim.initialize(InitialCondition{0, -6, -35, 0, 11});
  std::vector<double> d;
  while (!sim.is_terminal()) d.push_back(sim.step(EnvironmentAction{}).distance);
  const auto min_it = std::min_element(d.begin(), d.end());
  EXPECT_GT(min_it - d.begin(), 0);
  EXPECT_LT(min_it - d.begin(), static_cast<long>(d.size()) - 1);
  EXPECT_GT(d.back(), *min_it);
}

TEST(Crosswalk, SeparationIsSymmetric) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 20000; ++i) {
    Box b{{u(rng), u(rng)}, {2.4, 0.9}};
    Disc d{{u(rng), u(rng)}, 0.3};
    EXPECT_NEAR(separation(b, d), separation(d, b), 1e-12);
    EXPECT_EQ(separation(b, d) <= 0.0, separation(d, b) <= 0.0);
  }
}

TEST(Crosswalk, SeparationKnownValues) {
  Box b{{0, 0}, {2.4, 0.9}};
  EXPECT_DOUBLE_EQ(separation(b, Disc{{0, 3}, 0.3}), 3 - 0.9 - 0.3);
  EXPECT_DOUBLE_EQ(separation(b, Disc{{2.4 + 3, 0.9 + 4}, 0.3}), 5 - 0.3);
  EXPECT_DOUBLE_EQ(separation(b, Disc{{0, 0}, 0.3}), -0.9 - 0.3);
}

TEST(Crosswalk, NoEventWithoutDisturbance) {
  CrosswalkSimulator sim;
  const auto support = InitialConditionSupport::crosswalk_default();
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const Trajectory t = rollout(sim, mean_action_source(), support.sample(rng), RewardSpec{}, 0);
    EXPECT_FALSE(t.found_event);
  }
}

TEST(Crosswalk, ExposedStateIsReconstructibleFromHistory) {
  CrosswalkSimulator a, b;
  const auto support = InitialConditionSupport::crosswalk_default();
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const InitialCondition s0 = support.sample(rng);
    const Trajectory t = rollout(a, model_sampling_source(), s0, RewardSpec{}, trial);
    a.initialize(s0);
    b.initialize(s0);
    EXPECT_EQ(a.expose_state().size(), kExposedStateDim);
    for (const auto& act : t.actions) {
      a.step(act);
      b.step(act);
      EXPECT_EQ(a.expose_state(), b.expose_state());
      EXPECT_EQ(a.expose_state().size(), kExposedStateDim);
    }
  }
}

TEST(Crosswalk, DriverBrakesForPedestrianInLane) {
  ScenarioConfig c;
  CrosswalkSimulator sim(c);
  // Pedestrian already standing mid-lane ahead of the car.
  sim.initialize(InitialCondition{0, -2, -30, 0, 11});
  crosswalk::SimState s = sim.state();
  s.ped_pos = Eigen::Vector2d(0, c.car_lane_y);
  s.tracker_estimate << s.ped_pos, 0, 0;
  EXPECT_EQ(driver_command(c, s), -c.brake_decel);

  // The driver brakes whenever contact is imminent (it may creep forward
  // again when the gap grows), so a pedestrian pinned in the lane is never hit.
  SimState cur = s;
  double slowest = cur.car_vel.x();
  while (!is_terminal(c, cur)) {
    const Eigen::Vector2d acc = -cur.ped_vel / c.dt;
    cur = step(c, ActionModel{}, cur, EnvironmentAction(acc, {0, 0}, {0, 0})).first;
    slowest = std::min(slowest, cur.car_vel.x());
  }
  EXPECT_FALSE(cur.event);
  EXPECT_LT(slowest, 0.5 * s.car_vel.x());
}

TEST(Crosswalk, NonFiniteActionRejected) {
  CrosswalkSimulator sim;
  sim.initialize(InitialConditionSupport::crosswalk_default().center());
  Vector6 v = Vector6::Zero();
  v[1] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(sim.step(EnvironmentAction(v)), InvalidInput);
}

}  // namespace
}  // namespace ast::crosswalk
