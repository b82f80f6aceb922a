#include "ast/crosswalk/crosswalk.hpp"
#include "ast/errors.hpp"
#include "ast/pg/batch.hpp"
#include "ast/pg/trainer.hpp"
#include "ast/random.hpp"
#include "ast/rollout.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace ast::pg {
namespace {

namespace fs = std::filesystem;

TrainConfig tiny(TrainConfig c) {
  c.batch_size_timesteps = 200;
  c.hidden_dim = 6;
  c.iterations = 4;
  return c;
}

std::unique_ptr<policy::GaussianPolicy> make(const TrainConfig& c) {
  Rng rng(1);
  return policy::make_policy(policy::initialize_params(policy_shape(c, crosswalk::kExposedStateDim), rng));
}

TEST(Batch, CollectsEnoughStepsInWholeTrajectories) {
  const TrainConfig c = tiny(TrainConfig::generalized_recurrent());
  crosswalk::CrosswalkSimulator sim;
  auto pol = make(c);
  TrainConfig small = c;
  small.batch_size_timesteps = 100;
  const Batch b = collect_batch(sim, *pol, small, RewardSpec{}, 5);
  EXPECT_GE(b.trajectories.size(), 2u);
  EXPECT_GE(b.total_steps, 100);
  long long steps = 0;
  for (const auto& t : b.trajectories) steps += static_cast<long long>(t.size());
  EXPECT_EQ(steps, b.total_steps);
  EXPECT_EQ(b.inputs.valid_steps(), b.total_steps);
  // Same seed, same batch.
  const Batch again = collect_batch(sim, *pol, small, RewardSpec{}, 5);
  EXPECT_EQ(again.trajectories, b.trajectories);
}

TEST(Batch, TrajectoriesReplayFromTheirRecord) {
  const TrainConfig c = tiny(TrainConfig::generalized_recurrent());
  crosswalk::CrosswalkSimulator sim;
  auto pol = make(c);
  const Batch b = collect_batch(sim, *pol, c, RewardSpec{}, 6);
  for (const auto& t : b.trajectories) EXPECT_EQ(replay(sim, t.initial_condition, t.actions, RewardSpec{}), t);
}

TEST(Batch, DiscreteModeFixesInitialCondition) {
  const InitialCondition s0{0.5, -5, -40, 0.8, 9};
  for (TrainConfig c : {TrainConfig::discrete_recurrent(s0), TrainConfig::discrete_mlp(s0)}) {
    c = tiny(c);
    crosswalk::CrosswalkSimulator sim;
    auto pol = make(c);
    const Batch b = collect_batch(sim, *pol, c, RewardSpec{}, 7);
    for (const auto& t : b.trajectories) EXPECT_EQ(t.initial_condition, s0);
  }
}

// One-sample Kolmogorov-Smirnov statistic against U(lo, hi).
double ks_uniform(std::vector<double> x, double lo, double hi) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = (x[i] - lo) / (hi - lo);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

TEST(Batch, GeneralizedModeSamplesTheSupport) {
  // 100 KS tests at the 1% level: more than 5 rejections has probability
  // below 1e-3 if the draws really are uniform.
  TrainConfig c = tiny(TrainConfig::generalized_recurrent());
  c.batch_size_timesteps = 400 * 50;
  crosswalk::CrosswalkSimulator sim;
  auto pol = make(c);
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Batch b = collect_batch(sim, *pol, c, RewardSpec{}, seed);
    ASSERT_GE(b.trajectories.size(), 400u);
    const double n = static_cast<double>(b.trajectories.size());
    for (std::size_t d = 0; d < kInitialConditionDim; ++d) {
      std::vector<double> x;
      for (const auto& t : b.trajectories) {
        EXPECT_TRUE(c.support.contains(t.initial_condition));
        x.push_back(t.initial_condition[d]);
      }
      rejections += ks_uniform(x, c.support.dims[d].lo, c.support.dims[d].hi) > 1.628 / std::sqrt(n);
    }
  }
  EXPECT_LE(rejections, 5);
}

TEST(Batch, EncodingWidthIsEnforced) {
  TrainConfig c = tiny(TrainConfig::generalized_recurrent());
  crosswalk::CrosswalkSimulator sim;
  TrainConfig narrow = tiny(TrainConfig::discrete_recurrent(InitialConditionSupport::crosswalk_default().center()));
  auto six = make(narrow);
  EXPECT_EQ(six->shape().input_dim, 6);
  EXPECT_EQ(make(c)->shape().input_dim, 11);
  EXPECT_THROW(collect_batch(sim, *six, c, RewardSpec{}, 0), InvalidInput);
}

TEST(Config, ModeEncodingPairing) {
  EXPECT_NO_THROW(TrainConfig::generalized_recurrent().validate());
  TrainConfig c = TrainConfig::generalized_recurrent();
  c.encoding = policy::InputEncoding::kPreviousAction;
  EXPECT_THROW(c.validate(), InvalidInput);
  TrainConfig d = TrainConfig::discrete_recurrent(InitialConditionSupport::crosswalk_default().center());
  d.encoding = policy::InputEncoding::kPreviousActionAndInitialCondition;
  EXPECT_THROW(d.validate(), InvalidInput);
  EXPECT_EQ(TrainConfig{}.with_paper_batch().batch_size_timesteps, 500000);
}

TEST(Trainer, TraceIsNonDecreasingAndMatchesBest) {
  const TrainConfig c = tiny(TrainConfig::generalized_recurrent());
  crosswalk::CrosswalkSimulator sim;
  const TrainResult r = train(sim, RewardSpec{}, c);
  ASSERT_EQ(r.trace.size(), 4u);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i], r.trace[i - 1]);
  EXPECT_EQ(r.trace.back(), r.best.total_reward);
  EXPECT_EQ(replay(sim, r.best.initial_condition, r.best.actions, RewardSpec{}), r.best);
  long long steps = 0;
  for (const auto& s : r.iterations) {
    steps += s.steps;
    if (!s.update.accepted) EXPECT_EQ(s.mean_kl, 0.0);
  }
  EXPECT_EQ(steps, r.total_steps);
}

TEST(Trainer, ResumeReproducesAnUninterruptedRun) {
  const fs::path dir = fs::temp_directory_path() / "ast_trainer_resume";
  fs::remove_all(dir);
  TrainConfig c = tiny(TrainConfig::generalized_recurrent());
  c.seed = 33;
  crosswalk::CrosswalkSimulator sim;
  const TrainResult full = train(sim, RewardSpec{}, c);

  TrainConfig interrupted = c;
  interrupted.checkpoint_every = 1;
  interrupted.checkpoint_dir = dir;
  interrupted.log_csv = dir / "log.csv";
  train(sim, RewardSpec{}, interrupted, [](const IterationStats& s) { return s.iteration < 1; });
  const TrainResult resumed = resume(sim, RewardSpec{}, interrupted, dir);

  EXPECT_EQ(resumed.trace, full.trace);
  EXPECT_EQ(resumed.policy, full.policy);
  EXPECT_EQ(resumed.best, full.best);
  EXPECT_EQ(resumed.total_steps, full.total_steps);

  std::ifstream log(dir / "log.csv");
  int lines = 0;
  for (std::string l; std::getline(log, l);) ++lines;
  EXPECT_EQ(lines, 1 + 4);

  TrainConfig other_seed = interrupted;
  other_seed.seed = 34;
  EXPECT_THROW(resume(sim, RewardSpec{}, other_seed, dir), ConfigError);
  fs::remove_all(dir);
}

TEST(Trainer, CallbackStopsEarly) {
  const TrainConfig c = tiny(TrainConfig::generalized_recurrent());
  crosswalk::CrosswalkSimulator sim;
  const TrainResult r = train(sim, RewardSpec{}, c, [](const IterationStats&) { return false; });
  EXPECT_EQ(r.trace.size(), 1u);
}

}  // namespace
}  // namespace ast::pg
