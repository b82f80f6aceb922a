#include "ast/pg/batch.hpp"

#include "ast/errors.hpp"
#include "ast/pg/gae.hpp"
#include "ast/policy/gaussian.hpp"
#include "ast/policy/policy_input.hpp"
#include "ast/random.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <string>

namespace ast::pg {
namespace {

struct Lane {
  std::unique_ptr<Simulator> sim;
  Rng rng;
  Trajectory traj;
  Vector6 previous = Vector6::Zero();
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Vector6> actions;
  bool done = false;
};

StepResult checked_step(Simulator& sim, const EnvironmentAction& action) {
  const int t = sim.time_step();
  try {
    return sim.step(action);
  } catch (const SimulationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SimulationError(t, e.what());
  }
}

}  // namespace

Mask Batch::mask() const {
  Mask m(inputs.steps(), inputs.batch());
  for (int t = 0; t < inputs.steps(); ++t)
    for (int b = 0; b < inputs.batch(); ++b) m(t, b) = inputs.valid(t, b);
  return m;
}

int Batch::collisions() const {
  return static_cast<int>(std::count_if(trajectories.begin(), trajectories.end(),
                                        [](const Trajectory& tr) { return tr.found_event; }));
}

Batch collect_batch(const Simulator& prototype, const policy::GaussianPolicy& policy, const TrainConfig& config,
                    const RewardSpec& reward, std::uint64_t batch_seed) {
  config.validate();
  reward.validate();
  if (prototype.horizon() != reward.horizon || config.max_path_length != reward.horizon)
    throw InvalidInput("collect_batch: simulator, reward and max_path_length horizons disagree");
  const int want_dim = policy::input_dim(config.encoding, prototype.state_dim());
  if (policy.shape().input_dim != want_dim)
    throw InvalidInput("collect_batch: policy input_dim " + std::to_string(policy.shape().input_dim) +
                       " does not match the encoding (" + std::to_string(want_dim) + ")");

  const int horizon = config.max_path_length;
  const ActionModel& model = prototype.action_model();
  const Vector6 std_dev = policy.std();
  std::vector<Lane> finished;
  long long collected = 0;
  std::uint64_t next_rollout = 0;

  while (collected < config.batch_size_timesteps) {
    // Size each wave as if every rollout ran to the horizon; short rollouts
    // just trigger another, smaller wave.
    const long long missing = config.batch_size_timesteps - collected;
    const int width = static_cast<int>(std::max<long long>(1, (missing + horizon - 1) / horizon));
    std::vector<Lane> lanes(static_cast<std::size_t>(width));
    for (auto& lane : lanes) {
      lane.sim = prototype.clone();
      lane.rng = make_rng(derive_seed(batch_seed, {next_rollout++}));
      const InitialCondition s0 =
          config.mode == TrainingMode::kGeneralized ? config.support.sample(lane.rng) : config.initial_condition;
      lane.sim->initialize(s0);
      lane.traj.initial_condition = s0;
      lane.done = lane.sim->is_terminal();
    }

    policy::HiddenState hidden = policy.initial_hidden(width);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(want_dim, width);
    std::normal_distribution<double> normal;
    for (int t = 0; t < horizon; ++t) {
      bool any = false;
      for (int b = 0; b < width; ++b) {
        Lane& lane = lanes[static_cast<std::size_t>(b)];
        if (lane.done) continue;
        any = true;
        const std::vector<double> state =
            config.encoding == policy::InputEncoding::kSimulationState ? lane.sim->expose_state() : std::vector<double>{};
        x.col(b) = policy::encode_input(config.encoding, lane.previous, lane.traj.initial_condition, config.support,
                                        state);
      }
      if (!any) break;
      const Eigen::MatrixXd means = policy.step(x, hidden);
      for (int b = 0; b < width; ++b) {
        Lane& lane = lanes[static_cast<std::size_t>(b)];
        if (lane.done) continue;
        Vector6 u;
        for (Eigen::Index i = 0; i < 6; ++i) u[i] = means(i, b) + std_dev[i] * normal(lane.rng);
        const EnvironmentAction action = model.denormalize(u);
        const StepResult result = checked_step(*lane.sim, action);
        const double r = step_reward(result, action, model, reward, lane.sim->time_step());
        lane.traj.append(action, r, result.event, result.distance);
        lane.inputs.push_back(x.col(b));
        lane.actions.push_back(u);
        lane.previous = u;
        lane.done = lane.sim->is_terminal();
      }
    }
    for (auto& lane : lanes) {
      collected += static_cast<long long>(lane.traj.size());
      lane.sim.reset();
      finished.push_back(std::move(lane));
    }
  }

  // Pack into the padded step-major layout.
  Batch batch;
  const int count = static_cast<int>(finished.size());
  int steps = 0;
  for (const auto& lane : finished) steps = std::max(steps, static_cast<int>(lane.traj.size()));
  batch.inputs.inputs.assign(static_cast<std::size_t>(steps), Eigen::MatrixXd::Zero(want_dim, count));
  batch.actions.assign(static_cast<std::size_t>(steps), Eigen::MatrixXd::Zero(6, count));
  batch.rewards = Eigen::MatrixXd::Zero(steps, count);
  batch.inputs.lengths.resize(static_cast<std::size_t>(count));
  for (int b = 0; b < count; ++b) {
    Lane& lane = finished[static_cast<std::size_t>(b)];
    const int len = static_cast<int>(lane.traj.size());
    batch.inputs.lengths[static_cast<std::size_t>(b)] = len;
    for (int t = 0; t < len; ++t) {
      const auto ts = static_cast<std::size_t>(t);
      batch.inputs.inputs[ts].col(b) = lane.inputs[ts];
      batch.actions[ts].col(b) = lane.actions[ts];
      batch.rewards(t, b) = lane.traj.rewards[ts];
    }
    batch.trajectories.push_back(std::move(lane.traj));
  }
  batch.total_steps = collected;
  batch.values = batch.advantages = batch.returns = batch.log_probs = Eigen::MatrixXd::Zero(steps, count);
  return batch;
}

void annotate_batch(Batch& batch, const policy::GaussianPolicy& policy, const Eigen::MatrixXd& values,
                    const TrainConfig& config) {
  const int steps = batch.inputs.steps(), count = batch.inputs.batch();
  if (values.rows() != steps || values.cols() != count) throw ContractViolation("annotate_batch: values shape");
  batch.values = values;
  batch.advantages = Eigen::MatrixXd::Zero(steps, count);
  batch.returns = Eigen::MatrixXd::Zero(steps, count);
  for (int b = 0; b < count; ++b) {
    const auto& traj = batch.trajectories[static_cast<std::size_t>(b)];
    const int len = static_cast<int>(traj.size());
    std::vector<double> v(static_cast<std::size_t>(len) + 1, 0.0);  // episodes always terminate: bootstrap 0
    for (int t = 0; t < len; ++t) v[static_cast<std::size_t>(t)] = values(t, b);
    const auto adv = gae_advantages(traj.rewards, v, config.discount, config.gae_lambda);
    const auto ret = discounted_returns(traj.rewards, config.discount);
    for (int t = 0; t < len; ++t) {
      batch.advantages(t, b) = adv[static_cast<std::size_t>(t)];
      batch.returns(t, b) = ret[static_cast<std::size_t>(t)];
    }
  }
  if (config.normalize_advantages) normalize_masked(batch.advantages, batch.mask());

  const auto lp = policy::log_prob_and_grad(policy, batch.inputs, batch.actions).log_probs;
  batch.log_probs = Eigen::MatrixXd::Zero(steps, count);
  for (int t = 0; t < steps; ++t) batch.log_probs.row(t) = lp[static_cast<std::size_t>(t)].transpose();
}

}  // namespace ast::pg
