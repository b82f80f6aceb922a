#include "ast/harness/evaluation.hpp"

#include "ast/errors.hpp"
#include "ast/random.hpp"

#include <random>

namespace ast::harness {

Trajectory policy_rollout(Simulator& sim, const PolicyRunner& runner, const InitialCondition& s0,
                          const RewardSpec& reward, std::optional<std::uint64_t> sample_seed) {
  reward.validate();
  if (sim.horizon() != reward.horizon) throw InvalidInput("policy_rollout: simulator and reward horizons disagree");
  const auto& pol = runner.policy;
  if (pol.shape().input_dim != policy::input_dim(runner.encoding, sim.state_dim()))
    throw InvalidInput("policy_rollout: policy input width does not match its encoding");

  std::optional<Rng> rng;
  if (sample_seed) rng = make_rng(*sample_seed);
  std::normal_distribution<double> normal;
  const Vector6 sd = pol.std();
  const ActionModel& model = sim.action_model();

  sim.initialize(s0);
  Trajectory traj;
  traj.initial_condition = s0;
  policy::HiddenState hidden = pol.initial_hidden(1);
  Vector6 previous = Vector6::Zero();
  while (!sim.is_terminal()) {
    const std::vector<double> state =
        runner.encoding == policy::InputEncoding::kSimulationState ? sim.expose_state() : std::vector<double>{};
    const Eigen::MatrixXd x = policy::encode_input(runner.encoding, previous, s0, runner.input_support, state);
    const Eigen::MatrixXd mean = pol.step(x, hidden);
    Vector6 u = mean.col(0);
    if (rng)
      for (Eigen::Index i = 0; i < 6; ++i) u[i] += sd[i] * normal(*rng);
    const EnvironmentAction action = model.denormalize(u);
    const int t = sim.time_step();
    StepResult result;
    try {
      result = sim.step(action);
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationError(t, e.what());
    }
    traj.append(action, step_reward(result, action, model, reward, sim.time_step()), result.event, result.distance);
    previous = u;
  }
  return traj;
}

Evaluation evaluate_policy(Simulator& sim, const PolicyRunner& runner, const InitialCondition& s0,
                           const RewardSpec& reward, EvalMode mode, int samples, std::uint64_t seed) {
  Evaluation ev;
  if (mode == EvalMode::kMean) {
    ev.best = policy_rollout(sim, runner, s0, reward);
    ev.steps = static_cast<long long>(ev.best.size());
    return ev;
  }
  if (samples < 1) throw InvalidInput("evaluate_policy: sample mode needs at least one rollout");
  for (int k = 0; k < samples; ++k) {
    Trajectory t = policy_rollout(sim, runner, s0, reward, derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    ev.steps += static_cast<long long>(t.size());
    if (k == 0 || ranks_above(t, ev.best)) ev.best = std::move(t);
  }
  return ev;
}

Evaluation evaluate_bin(Simulator& sim, const PolicyRunner& runner, const Bin& bin, const RewardSpec& reward,
                        int samples, std::uint64_t seed, EvalMode actions) {
  if (samples < 0) throw InvalidInput("evaluate_bin: negative sample count");
  Evaluation ev = evaluate_policy(sim, runner, bin.center, reward, EvalMode::kMean);
  Rng s0_rng = make_rng(derive_seed(seed, {0}));
  for (int k = 0; k < samples; ++k) {
    const InitialCondition s0 = bin.support.sample(s0_rng);
    const auto action_seed = actions == EvalMode::kSample
                                 ? std::optional(derive_seed(seed, {1, static_cast<std::uint64_t>(k)}))
                                 : std::nullopt;
    Trajectory t = policy_rollout(sim, runner, s0, reward, action_seed);
    ev.steps += static_cast<long long>(t.size());
    if (ranks_above(t, ev.best)) ev.best = std::move(t);
  }
  return ev;
}

}  // namespace ast::harness
