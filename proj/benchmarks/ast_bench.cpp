#include "ast/crosswalk/crosswalk.hpp"
#include "ast/mcts/mcts.hpp"
#include "ast/pg/batch.hpp"
#include "ast/pg/trainer.hpp"
#include "ast/pg/trust_region.hpp"
#include "ast/policy/gaussian.hpp"
#include "ast/rollout.hpp"

#include <benchmark/benchmark.h>

using namespace ast;

namespace {

policy::SequenceBatch sequences(int dim, int steps, int batch) {
  Rng rng(1);
  std::normal_distribution<double> n;
  policy::SequenceBatch b;
  b.lengths.assign(static_cast<std::size_t>(batch), steps);
  for (int t = 0; t < steps; ++t) b.inputs.push_back(Eigen::MatrixXd::NullaryExpr(dim, batch, [&] { return n(rng); }));
  return b;
}

std::unique_ptr<policy::GaussianPolicy> lstm(int hidden) {
  policy::PolicyShape s;
  s.input_dim = 11;
  s.hidden_dim = hidden;
  Rng rng(2);
  return policy::make_policy(policy::initialize_params(s, rng));
}

}  // namespace

static void BM_SimulatorStep(benchmark::State& state) {
  crosswalk::CrosswalkSimulator sim;
  const auto s0 = InitialConditionSupport::crosswalk_default().center();
  const EnvironmentAction a(Eigen::Vector2d(0.1, 0.2), {0.01, 0.0}, {0.0, 0.01});
  sim.initialize(s0);
  for (auto _ : state) {
    if (sim.is_terminal()) sim.initialize(s0);
    benchmark::DoNotOptimize(sim.step(a));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep);

static void BM_Rollout(benchmark::State& state) {
  crosswalk::CrosswalkSimulator sim;
  const auto s0 = InitialConditionSupport::crosswalk_default().center();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rollout(sim, model_sampling_source(), s0, RewardSpec{}, seed++));
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_Rollout);

static void BM_LstmForward(benchmark::State& state) {
  auto pol = lstm(64);
  const auto b = sequences(11, 50, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pol->forward(b));
  state.SetItemsProcessed(state.iterations() * 50 * state.range(0));
}
BENCHMARK(BM_LstmForward)->Arg(1)->Arg(32)->Arg(200);

static void BM_LstmBackward(benchmark::State& state) {
  auto pol = lstm(64);
  const auto b = sequences(11, 50, static_cast<int>(state.range(0)));
  const auto trace = pol->forward(b);
  for (auto _ : state) benchmark::DoNotOptimize(pol->backward(b, trace, trace.means));
  state.SetItemsProcessed(state.iterations() * 50 * state.range(0));
}
BENCHMARK(BM_LstmBackward)->Arg(1)->Arg(32)->Arg(200);

static void BM_LstmJvp(benchmark::State& state) {
  auto pol = lstm(64);
  const auto b = sequences(11, 50, 200);
  const auto trace = pol->forward(b);
  const Eigen::VectorXd v = Eigen::VectorXd::Ones(pol->theta().size());
  for (auto _ : state) benchmark::DoNotOptimize(pol->jvp(b, trace, v));
  state.SetItemsProcessed(state.iterations() * 50 * 200);
}
BENCHMARK(BM_LstmJvp);

static void BM_CollectBatch(benchmark::State& state) {
  pg::TrainConfig c = pg::TrainConfig::generalized_recurrent();
  c.batch_size_timesteps = state.range(0);
  crosswalk::CrosswalkSimulator sim;
  Rng rng(3);
  auto pol = policy::make_policy(policy::initialize_params(pg::policy_shape(c, sim.state_dim()), rng));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(pg::collect_batch(sim, *pol, c, RewardSpec{}, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CollectBatch)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_TrustRegionUpdate(benchmark::State& state) {
  pg::TrainConfig c = pg::TrainConfig::generalized_recurrent();
  c.batch_size_timesteps = 2000;
  crosswalk::CrosswalkSimulator sim;
  Rng rng(4);
  auto pol = policy::make_policy(policy::initialize_params(pg::policy_shape(c, sim.state_dim()), rng));
  pg::Batch batch = pg::collect_batch(sim, *pol, c, RewardSpec{}, 5);
  pg::annotate_batch(batch, *pol, Eigen::MatrixXd::Zero(batch.rewards.rows(), batch.rewards.cols()), c);
  const Eigen::VectorXd theta = pol->theta();
  for (auto _ : state) {
    pol->set_theta(theta);
    benchmark::DoNotOptimize(pg::trust_region_update(*pol, batch, c));
  }
}
BENCHMARK(BM_TrustRegionUpdate)->Unit(benchmark::kMillisecond);

static void BM_MctsSearch(benchmark::State& state) {
  crosswalk::CrosswalkSimulator sim;
  mcts::MctsConfig c;
  c.iterations = static_cast<int>(state.range(0));
  const auto s0 = InitialConditionSupport::crosswalk_default().center();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcts::search(sim, s0, RewardSpec{}, c));
    ++c.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MctsSearch)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
