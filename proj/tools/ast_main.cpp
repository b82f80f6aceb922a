// ast: run stress-testing experiments, replay and evaluate their outputs.

#include "ast/crosswalk/crosswalk.hpp"
#include "ast/errors.hpp"
#include "ast/harness/bin_grid.hpp"
#include "ast/harness/evaluation.hpp"
#include "ast/harness/experiment.hpp"
#include "ast/harness/report.hpp"
#include "ast/policy/checkpoint.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace ast;

namespace {

void log_line(const std::string& msg) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[16];
  std::strftime(stamp, sizeof stamp, "%H:%M:%S", std::localtime(&now));
  std::cerr << '[' << stamp << "] " << msg << std::endl;
}

int cmd_run(const fs::path& config_path, const std::optional<fs::path>& output_override) {
  harness::ExperimentConfig config = harness::ExperimentConfig::load(config_path);
  if (output_override) config.output_dir = *output_override;
  harness::ensure_writable_directory(config.output_dir);
  log_line("writing results to " + config.output_dir.string() + " with " + std::to_string(config.workers) +
           " worker(s)");
  for (std::uint64_t seed : config.seeds) {
    log_line("seed " + std::to_string(seed));
    const auto report = harness::run_experiment(config, seed, log_line);
    const fs::path dir = config.output_dir / ("seed_" + std::to_string(seed));
    harness::emit_results(report, config, dir);
    std::vector<std::pair<std::string, harness::SolverSummary>> rows;
    for (const auto& s : report.solvers) rows.emplace_back(s.name, s.summary);
    std::cout << "seed " << seed << '\n' << harness::format_summary(rows) << '\n';
  }
  return 0;
}

int cmd_replay(const fs::path& file_path) {
  const auto file = harness::read_trajectory_file(file_path);
  int mismatches = 0;
  for (const auto& c : harness::replay_file(file)) {
    std::cout << c.recorded.solver << " bin " << c.recorded.bin << ": recorded " << c.recorded.trajectory.total_reward
              << (c.recorded.trajectory.found_event ? " (collision)" : "") << ", replayed " << c.replayed.total_reward
              << (c.replayed.found_event ? " (collision)" : "") << (c.identical ? "  ok" : "  MISMATCH") << '\n';
    if (!c.identical) ++mismatches;
  }
  std::cout << file.records.size() - static_cast<std::size_t>(mismatches) << "/" << file.records.size()
            << " trajectories replay exactly\n";
  return mismatches == 0 ? 0 : 1;
}

int cmd_eval(const fs::path& checkpoint_path, int bins_per_dim, const std::string& mode, int samples,
             const std::optional<std::string>& actions, std::uint64_t seed, const std::optional<fs::path>& config_path,
             const std::optional<fs::path>& output) {
  harness::ExperimentConfig config;
  if (config_path) config = harness::ExperimentConfig::load(*config_path);
  if (actions) config.bin_actions = *actions == "sample" ? harness::EvalMode::kSample : harness::EvalMode::kMean;
  if (output) harness::ensure_writable_directory(*output);
  const auto ckpt = policy::load_checkpoint(checkpoint_path);
  const auto pol = policy::make_policy(ckpt.params);
  const harness::PolicyRunner runner{*pol, ckpt.encoding, config.scenario.support};
  const harness::BinGrid grid(config.scenario.support, bins_per_dim);
  crosswalk::CrosswalkSimulator sim(config.scenario, config.action_model);
  sim.mutable_config().strict_support = false;

  harness::SolverReport r;
  r.name = "policy_" + mode;
  for (const auto& bin : grid.bins()) {
    harness::CellResult c;
    c.bin = bin.index;
    c.center = bin.center;
    try {
      const auto ev = mode == "point"
                          ? harness::evaluate_policy(sim, runner, bin.center, config.reward, harness::EvalMode::kMean)
                          : harness::evaluate_bin(sim, runner, bin, config.reward, samples,
                                                  harness::bin_eval_seed(seed, bin.index), config.bin_actions);
      c.best = ev.best;
      c.steps = ev.steps;
    } catch (const std::exception& e) {
      c.failed = true;
      c.error = e.what();
    }
    std::cout << "bin " << bin.index << ": " << (c.failed ? "failed: " + c.error : "")
              << (c.failed ? "" : (c.best.found_event ? "collision " : "no collision ")) << c.best.total_reward
              << '\n';
    r.cells.push_back(std::move(c));
  }
  r.summary = harness::summarize(r.cells);
  std::cout << '\n' << harness::format_summary({{r.name, r.summary}});
  if (output) {
    harness::AggregateReport report;
    report.seed = seed;
    report.bins_per_dim = bins_per_dim;
    report.solvers.push_back(std::move(r));
    harness::emit_results(report, config, *output);
  }
  return 0;
}

int cmd_report(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::exists(dir / "bins.csv")) files.push_back(dir / "bins.csv");
  if (fs::is_directory(dir))
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_directory() && fs::exists(entry.path() / "bins.csv")) files.push_back(entry.path() / "bins.csv");
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no bins.csv under " + dir.string());
  for (const auto& f : files)
    std::cout << f.parent_path().string() << '\n' << harness::format_summary(harness::summarize_bins_csv(f)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive stress testing of a crosswalk driving scenario"};
  app.require_subcommand(1);

  fs::path run_config;
  std::optional<fs::path> run_output;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", run_config, "Key-value config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", run_output, "Override experiment.output_dir");

  fs::path replay_file;
  auto* replay = app.add_subcommand("replay", "Replay a trajectories_*.jsonl file and check it reproduces exactly");
  replay->add_option("trajectory-file", replay_file)->required()->check(CLI::ExistingFile);

  fs::path eval_ckpt;
  int eval_grid = 2;
  std::string eval_mode = "point";
  int eval_samples = 100;
  std::optional<std::string> eval_actions;
  std::uint64_t eval_seed = 0;
  std::optional<fs::path> eval_config, eval_output;
  auto* eval = app.add_subcommand("eval", "Evaluate a saved policy on a bin grid");
  eval->add_option("checkpoint", eval_ckpt)->required()->check(CLI::ExistingFile);
  eval->add_option("--grid", eval_grid, "Bins per dimension")->check(CLI::Range(1, 16));
  eval->add_option("--mode", eval_mode, "point: mean actions at bin centres; bin: sampled within each bin")
      ->check(CLI::IsMember({"point", "bin"}));
  eval->add_option("--samples", eval_samples, "Initial conditions drawn per bin in bin mode")->check(CLI::NonNegativeNumber);
  eval->add_option("--actions", eval_actions, "Bin mode: act with the policy mean or sample actions (default mean)")
      ->check(CLI::IsMember({"mean", "sample"}));
  eval->add_option("--seed", eval_seed);
  eval->add_option("--config", eval_config, "Scenario/reward config (defaults otherwise)")->check(CLI::ExistingFile);
  eval->add_option("-o,--output", eval_output, "Also write report files here");

  fs::path report_dir;
  auto* report = app.add_subcommand("report", "Summarize a results directory");
  report->add_option("results-dir", report_dir)->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_config, run_output);
    if (*replay) return cmd_replay(replay_file);
    if (*eval) return cmd_eval(eval_ckpt, eval_grid, eval_mode, eval_samples, eval_actions, eval_seed, eval_config, eval_output);
    if (*report) return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "ast: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
