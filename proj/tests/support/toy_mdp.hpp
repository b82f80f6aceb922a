#pragma once

// Tiny deterministic simulator with a discrete action set, small enough to
// enumerate every action sequence.

#include "ast/rollout.hpp"
#include "ast/simulator.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

namespace ast::testing {

class ToySimulator final : public Simulator {
 public:
  explicit ToySimulator(int horizon, double target = 1.7) : horizon_(horizon), target_(target) {}

  void initialize(const InitialCondition& s0) override {
    x_ = s0.ped_x;
    t_ = 0;
  }
  StepResult step(const EnvironmentAction& action) override {
    // Mildly non-linear so greedy choices are not optimal.
    x_ = -0.5 * x_ + action[0] + 0.3 * t_ + 0.1 * action[0] * action[0] * t_;
    ++t_;
    StepResult r;
    r.distance = std::abs(x_ - target_);
    r.terminal = t_ >= horizon_;
    return r;
  }
  bool is_terminal() const override { return t_ >= horizon_; }
  int horizon() const override { return horizon_; }
  int time_step() const override { return t_; }
  const ActionModel& action_model() const override { return model_; }
  std::unique_ptr<Simulator> clone() const override { return std::make_unique<ToySimulator>(*this); }
  std::vector<double> expose_state() const override { return {x_, static_cast<double>(t_)}; }
  std::size_t state_dim() const override { return 2; }

 private:
  int horizon_;
  double target_;
  double x_ = 0.0;
  int t_ = 0;
  ActionModel model_;
};

inline std::vector<EnvironmentAction> scalar_actions(const std::vector<double>& values) {
  std::vector<EnvironmentAction> out;
  for (double v : values) {
    Vector6 a = Vector6::Zero();
    a[0] = v;
    out.emplace_back(a);
  }
  return out;
}

/// Exhaustive oracle: the best trajectory over every action sequence.
inline Trajectory brute_force_best(Simulator& sim, const InitialCondition& s0, const RewardSpec& spec,
                                   const std::vector<EnvironmentAction>& actions) {
  Trajectory best;
  bool have = false;
  std::vector<EnvironmentAction> seq;
  std::function<void()> recurse = [&] {
    if (static_cast<int>(seq.size()) == sim.horizon()) {
      Trajectory t = replay(sim, s0, seq, spec);
      if (!have || t.total_reward > best.total_reward) {
        best = t;
        have = true;
      }
      return;
    }
    for (const auto& a : actions) {
      seq.push_back(a);
      recurse();
      seq.pop_back();
    }
  };
  recurse();
  return best;
}

}  // namespace ast::testing
