#pragma once

#include "ast/crosswalk/crosswalk.hpp"
#include "ast/harness/experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ast::harness {

/// Create `dir` if needed and prove it is writable by creating and removing
/// a probe file. Throws ConfigError otherwise.
void ensure_writable_directory(const std::filesystem::path& dir);

/// Writes into `dir`:
///   summary.csv          one row per solver (Table II columns)
///   bins.csv             one row per (solver, bin)
///   report.txt           summary as an aligned text table
///   traces.csv           cumulative-max traces: per-bin, sequential, batch
///                        and (GRDRL) training views
///   trajectories_<solver>.jsonl
///                        header record, then each bin's best trajectory
void emit_results(const AggregateReport& report, const ExperimentConfig& config, const std::filesystem::path& dir);

/// Aligned plain-text table of the per-solver summaries.
std::string format_summary(const std::vector<std::pair<std::string, SolverSummary>>& rows);

/// Rebuild per-solver summaries from a bins.csv written by emit_results.
std::vector<std::pair<std::string, SolverSummary>> summarize_bins_csv(const std::filesystem::path& path);

/// One point of a convergence trace.
struct TracePoint {
  long long steps = 0;
  double value = 0.0;
};

/// Per-bin traces laid end to end; the running maximum restarts nowhere,
/// so the result is non-decreasing.
std::vector<TracePoint> sequential_view(const std::vector<std::vector<double>>& per_bin, long long steps_per_iteration);

/// Per-iteration maximum across bins, each iteration charged for every bin.
std::vector<TracePoint> batch_view(const std::vector<std::vector<double>>& per_bin, long long steps_per_iteration);

struct TrajectoryRecord {
  std::string solver;
  int bin = -1;
  Trajectory trajectory;
};

struct TrajectoryFile {
  std::uint64_t seed = 0;  // root seed of the run that produced the records
  crosswalk::ScenarioConfig scenario;
  RewardSpec reward;
  ActionModel action_model;
  std::vector<TrajectoryRecord> records;
};

void write_trajectory_file(const std::filesystem::path& path, const crosswalk::ScenarioConfig& scenario,
                           const RewardSpec& reward, const ActionModel& model,
                           const std::vector<TrajectoryRecord>& records, std::uint64_t seed = 0);
TrajectoryFile read_trajectory_file(const std::filesystem::path& path);

struct ReplayCheck {
  TrajectoryRecord recorded;
  Trajectory replayed;
  bool identical = false;  // event flag and every reward bit-identical
};

/// Re-run every record through a simulator built from the file header.
std::vector<ReplayCheck> replay_file(const TrajectoryFile& file);

}  // namespace ast::harness
