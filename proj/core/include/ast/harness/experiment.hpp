#pragma once

#include "ast/action.hpp"
#include "ast/config_file.hpp"
#include "ast/crosswalk/crosswalk.hpp"
#include "ast/harness/bin_grid.hpp"
#include "ast/harness/evaluation.hpp"
#include "ast/mcts/mcts.hpp"
#include "ast/pg/train_config.hpp"
#include "ast/reward.hpp"
#include "ast/trajectory.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace ast::harness {

enum class SolverKind { kMcts, kMlpDrl, kDrDrl, kGrDrl };

std::string_view to_string(SolverKind s);
SolverKind solver_from_string(std::string_view s);

struct ExperimentConfig {
  crosswalk::ScenarioConfig scenario;
  RewardSpec reward;
  ActionModel action_model;

  std::vector<SolverKind> solvers{SolverKind::kMcts, SolverKind::kMlpDrl, SolverKind::kDrDrl, SolverKind::kGrDrl};
  int bins_per_dim = 2;
  int bin_samples = 100;  // initial conditions drawn per bin in GRDRL bin evaluation
  EvalMode bin_actions = EvalMode::kMean;  // how those rollouts act
  std::vector<std::uint64_t> seeds{0};
  int workers = 1;
  /// Give every per-bin solver 1/bins of GRDRL's total steps (training plus
  /// bin evaluation) instead of its own configured iteration count.
  bool match_budget = true;
  std::filesystem::path output_dir = "results";

  mcts::MctsConfig mcts;
  pg::TrainConfig grdrl = pg::TrainConfig::generalized_recurrent();
  pg::TrainConfig drdrl;  // discrete recurrent, s0 set per bin
  pg::TrainConfig mlpdrl;

  ExperimentConfig();

  /// Reads [experiment], [grid], [scenario], [reward], [action_model],
  /// [mcts], [grdrl], [drdrl] and [mlpdrl]. AST_WORKERS overrides
  /// experiment.workers.
  static ExperimentConfig from_config(const KeyValueConfig& cfg);
  static ExperimentConfig load(const std::filesystem::path& path);

  void validate() const;
};

/// Worker count: AST_WORKERS if set to a positive integer, else `fallback`.
int worker_count(int fallback);

/// Seed for GRDRL's evaluation rollouts in one bin. Every solver's per-bin
/// seeds derive from the same bin seed, so all solvers see the same streams.
std::uint64_t bin_eval_seed(std::uint64_t seed, int bin);

/// Run job(i) for i in [0, count) on `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& job);

struct CellResult {
  int bin = 0;
  InitialCondition center;
  bool failed = false;
  std::string error;
  Trajectory best;
  long long steps = 0;
  std::vector<double> trace;  // best reward after each solver iteration
};

struct SolverSummary {
  double average_collision_reward = 0.0;  // NaN when no bin found a collision
  double max_collision_reward = 0.0;      // NaN when no bin found a collision
  int collisions_found = 0;
  double collision_percentage = 0.0;
  int bins = 0;
  int failed = 0;
};

/// Averages and maxima are taken over bins with a collision only; the
/// percentage is over all bins.
SolverSummary summarize(const std::vector<CellResult>& cells);

struct SolverReport {
  std::string name;  // mcts, mlpdrl, drdrl, grdrl_point, grdrl_bin
  std::vector<CellResult> cells;
  SolverSummary summary;
  std::vector<double> training_trace;  // GRDRL only: one entry per iteration
  long long training_steps = 0;        // GRDRL only
  long long steps_per_iteration = 0;   // per-bin solvers: nominal cost of one iteration
};

struct AggregateReport {
  std::uint64_t seed = 0;
  int bins_per_dim = 0;
  std::vector<SolverReport> solvers;

  const SolverReport* find(std::string_view name) const;
};

/// Progress messages (one line each); may be empty.
using ProgressSink = std::function<void(const std::string&)>;

/// Execute every configured solver for one seed.
AggregateReport run_experiment(const ExperimentConfig& config, std::uint64_t seed, const ProgressSink& progress = {});

}  // namespace ast::harness
