#include "ast/pg/trainer.hpp"

#include "ast/errors.hpp"
#include "ast/pg/baseline.hpp"
#include "ast/pg/batch.hpp"
#include "ast/random.hpp"
#include "ast/trajectory_io.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <string>

namespace ast::pg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kInitStream = std::numeric_limits<std::uint64_t>::max();
constexpr const char* kPolicyFile = "policy.bin";
constexpr const char* kStateFile = "trainer_state.json";

struct RunState {
  int next_iteration = 0;
  std::optional<Trajectory> best;
  std::vector<double> trace;
  long long total_steps = 0;
  Eigen::VectorXd baseline;
};

void write_state(const fs::path& dir, const policy::GaussianPolicy& policy, const TrainConfig& config,
                 const RunState& state) {
  fs::create_directories(dir);
  policy::save_checkpoint(dir / kPolicyFile, {policy.params(), config.encoding});
  json j;
  j["next_iteration"] = state.next_iteration;
  j["total_steps"] = state.total_steps;
  j["trace"] = state.trace;
  j["seed"] = config.seed;
  j["baseline"] = std::vector<double>(state.baseline.data(), state.baseline.data() + state.baseline.size());
  if (state.best) j["best"] = json::parse(trajectory_to_json(*state.best));
  const fs::path tmp = dir / (std::string(kStateFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << j.dump(1) << '\n';
    if (!out) throw ConfigError("short write to " + tmp.string());
  }
  fs::rename(tmp, dir / kStateFile);
}

RunState read_state(const fs::path& dir, const TrainConfig& config) {
  std::ifstream in(dir / kStateFile);
  if (!in) throw ConfigError("no trainer state in " + dir.string());
  try {
    const json j = json::parse(in);
    if (j.at("seed").get<std::uint64_t>() != config.seed)
      throw ConfigError("checkpoint was written with a different seed");
    RunState s;
    s.next_iteration = j.at("next_iteration").get<int>();
    s.total_steps = j.at("total_steps").get<long long>();
    s.trace = j.at("trace").get<std::vector<double>>();
    const auto w = j.at("baseline").get<std::vector<double>>();
    s.baseline = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    if (j.contains("best")) s.best = trajectory_from_json(j.at("best").dump());
    return s;
  } catch (const json::exception& e) {
    throw ConfigError("corrupt trainer state: " + std::string(e.what()));
  }
}

void open_log(const fs::path& path, bool append) {
  if (path.empty()) return;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (append && fs::exists(path)) return;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "iteration,best_reward,mean_kl,explained_variance,collisions,trajectories,steps,mean_total_reward,"
         "accepted,surrogate_improvement\n";
}

void log_row(const fs::path& path, const IterationStats& s) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  out.precision(17);
  out << s.iteration << ',' << s.best_reward << ',' << s.mean_kl << ',' << s.explained_variance << ','
      << s.collisions << ',' << s.trajectories << ',' << s.steps << ',' << s.mean_total_reward << ','
      << (s.update.accepted ? 1 : 0) << ',' << s.update.improvement << '\n';
}

TrainResult run(const Simulator& prototype, const RewardSpec& reward, const TrainConfig& config,
                std::unique_ptr<policy::GaussianPolicy> policy, RunState state, const IterationCallback& on_iteration) {
  LinearBaseline baseline(config.max_path_length);
  TrainResult result;
  result.trace = state.trace;

  baseline.set_coefficients(state.baseline);

  for (int it = state.next_iteration; it < config.iterations; ++it) {
    Batch batch = collect_batch(prototype, *policy, config, reward, derive_seed(config.seed, {static_cast<std::uint64_t>(it)}));
    const Eigen::MatrixXd values = baseline.predict(batch.inputs);
    annotate_batch(batch, *policy, values, config);

    IterationStats stats;
    stats.iteration = it;
    stats.explained_variance = explained_variance(values, batch.returns, batch.inputs);
    baseline.fit(batch.inputs, batch.returns);

    stats.update = trust_region_update(*policy, batch, config);
    stats.mean_kl = stats.update.accepted ? stats.update.mean_kl : 0.0;

    double sum_reward = 0.0;
    for (auto& traj : batch.trajectories) {
      sum_reward += traj.total_reward;
      if (!state.best || traj.total_reward > state.best->total_reward) state.best = traj;
    }
    state.total_steps += batch.total_steps;
    stats.collisions = batch.collisions();
    stats.trajectories = static_cast<int>(batch.trajectories.size());
    stats.steps = batch.total_steps;
    stats.mean_total_reward = sum_reward / static_cast<double>(batch.trajectories.size());
    stats.best_reward = state.best->total_reward;
    state.trace.push_back(stats.best_reward);
    result.trace.push_back(stats.best_reward);
    result.iterations.push_back(stats);
    log_row(config.log_csv, stats);

    state.next_iteration = it + 1;
    state.baseline = baseline.coefficients();
    const bool last = it + 1 == config.iterations;
    if (config.checkpoint_every > 0 && ((it + 1) % config.checkpoint_every == 0 || last))
      write_state(config.checkpoint_dir, *policy, config, state);
    if (on_iteration && !on_iteration(stats)) break;
  }

  result.policy = {policy->params(), config.encoding};
  if (state.best) result.best = *state.best;
  result.total_steps = state.total_steps;
  return result;
}

}  // namespace

policy::PolicyShape policy_shape(const TrainConfig& config, std::size_t state_dim) {
  policy::PolicyShape shape;
  shape.architecture = config.architecture;
  shape.input_dim = policy::input_dim(config.encoding, state_dim);
  shape.hidden_dim = config.hidden_dim;
  shape.hidden_layers = config.hidden_layers;
  shape.output_dim = static_cast<int>(kActionDim);
  return shape;
}

TrainResult train(const Simulator& prototype, const RewardSpec& reward, const TrainConfig& config,
                  const IterationCallback& on_iteration) {
  config.validate();
  Rng init = make_rng(derive_seed(config.seed, {kInitStream}));
  auto policy = policy::make_policy(policy::initialize_params(policy_shape(config, prototype.state_dim()), init));
  open_log(config.log_csv, false);
  return run(prototype, reward, config, std::move(policy), RunState{}, on_iteration);
}

TrainResult resume(const Simulator& prototype, const RewardSpec& reward, const TrainConfig& config,
                   const std::filesystem::path& checkpoint_dir, const IterationCallback& on_iteration) {
  config.validate();
  RunState state = read_state(checkpoint_dir, config);
  const policy::PolicyCheckpoint ckpt = policy::load_checkpoint(checkpoint_dir / kPolicyFile);
  if (ckpt.encoding != config.encoding || ckpt.params.shape != policy_shape(config, prototype.state_dim()))
    throw ConfigError("checkpoint policy does not match the training configuration");
  open_log(config.log_csv, true);
  return run(prototype, reward, config, policy::make_policy(ckpt.params), std::move(state), on_iteration);
}

}  // namespace ast::pg
