#include "ast/harness/experiment.hpp"

#include "ast/errors.hpp"
#include "ast/harness/evaluation.hpp"
#include "ast/pg/trainer.hpp"
#include "ast/policy/checkpoint.hpp"
#include "ast/random.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

namespace ast::harness {
namespace {

constexpr std::uint64_t kEvalStream = 0xE7A1;

std::uint64_t bin_seed(std::uint64_t seed, int bin) { return derive_seed(seed, {static_cast<std::uint64_t>(bin)}); }

std::uint64_t solver_seed(std::uint64_t seed, SolverKind s, int bin) {
  return derive_seed(bin_seed(seed, bin), {static_cast<std::uint64_t>(s) + 1});
}

Vector6 to_vector6(const std::vector<double>& v, const std::string& key) {
  if (v.size() != kActionDim) throw ConfigError(key + ": expected 6 comma-separated values");
  return Vector6(v.data());
}

void read_mcts(const KeyValueConfig& cfg, mcts::MctsConfig& m) {
  m.iterations = static_cast<int>(cfg.get_int("mcts.iterations", m.iterations));
  m.exploration = cfg.get_double("mcts.exploration", m.exploration);
  m.k_action = cfg.get_double("mcts.k_action", m.k_action);
  m.alpha_action = cfg.get_double("mcts.alpha_action", m.alpha_action);
  m.k_state = cfg.get_double("mcts.k_state", m.k_state);
  m.alpha_state = cfg.get_double("mcts.alpha_state", m.alpha_state);
  m.rollout_depth = static_cast<int>(cfg.get_int("mcts.rollout_depth", m.rollout_depth));
  m.progressive_widening = cfg.get_bool("mcts.progressive_widening", m.progressive_widening);
}

crosswalk::CrosswalkSimulator make_sim(const ExperimentConfig& config) {
  return crosswalk::CrosswalkSimulator(config.scenario, config.action_model);
}

CellResult run_cell(const ExperimentConfig& config, SolverKind solver, const Bin& bin, std::uint64_t seed,
                    const pg::TrainConfig* train_override, const mcts::MctsConfig* mcts_override) {
  CellResult cell;
  cell.bin = bin.index;
  cell.center = bin.center;
  try {
    auto sim = make_sim(config);
    if (solver == SolverKind::kMcts) {
      mcts::MctsConfig m = mcts_override ? *mcts_override : config.mcts;
      m.seed = solver_seed(seed, solver, bin.index);
      auto res = mcts::search(sim, bin.center, config.reward, m);
      cell.best = std::move(res.best);
      cell.trace = std::move(res.trace);
      cell.steps = res.simulated_steps;
    } else {
      pg::TrainConfig t = *train_override;
      t.initial_condition = bin.center;
      t.support = config.scenario.support;
      t.seed = solver_seed(seed, solver, bin.index);
      auto res = pg::train(sim, config.reward, t);
      cell.best = std::move(res.best);
      cell.trace = std::move(res.trace);
      cell.steps = res.total_steps;
    }
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::kMcts: return "mcts";
    case SolverKind::kMlpDrl: return "mlpdrl";
    case SolverKind::kDrDrl: return "drdrl";
    case SolverKind::kGrDrl: return "grdrl";
  }
  return "?";
}

SolverKind solver_from_string(std::string_view s) {
  for (auto k : {SolverKind::kMcts, SolverKind::kMlpDrl, SolverKind::kDrDrl, SolverKind::kGrDrl})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown solver '" + std::string(s) + "' (expected mcts, mlpdrl, drdrl or grdrl)");
}

ExperimentConfig::ExperimentConfig()
    : drdrl(pg::TrainConfig::discrete_recurrent(InitialConditionSupport::crosswalk_default().center())),
      mlpdrl(pg::TrainConfig::discrete_mlp(InitialConditionSupport::crosswalk_default().center())) {
  drdrl.batch_size_timesteps = 2'000;
  mlpdrl.batch_size_timesteps = 2'000;
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& cfg) {
  ExperimentConfig c;
  c.scenario = crosswalk::ScenarioConfig::from_config(cfg, "scenario");
  c.reward.alpha = cfg.get_double("reward.alpha", c.reward.alpha);
  c.reward.beta = cfg.get_double("reward.beta", c.reward.beta);
  c.reward.horizon = c.scenario.horizon;

  const Vector6 mean = to_vector6(cfg.get_doubles("action_model.mean", std::vector<double>(6, 0.0)), "action_model.mean");
  const Vector6 sd = c.action_model.std();
  c.action_model = ActionModel::from_std(
      mean, to_vector6(cfg.get_doubles("action_model.std", std::vector<double>(sd.data(), sd.data() + 6)),
                       "action_model.std"));

  if (cfg.has("experiment.solvers")) {
    c.solvers.clear();
    for (const auto& s : cfg.get_strings("experiment.solvers", {})) c.solvers.push_back(solver_from_string(s));
  }
  c.seeds.clear();
  for (const auto& s : cfg.get_strings("experiment.seeds", {"0"})) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("experiment.seeds: bad seed '" + s + "'");
    c.seeds.push_back(v);
  }
  c.workers = static_cast<int>(cfg.get_int("experiment.workers", c.workers));
  c.match_budget = cfg.get_bool("experiment.match_budget", c.match_budget);
  c.output_dir = cfg.get_string("experiment.output_dir", c.output_dir.string());
  c.bins_per_dim = static_cast<int>(cfg.get_int("grid.bins_per_dim", c.bins_per_dim));
  c.bin_samples = static_cast<int>(cfg.get_int("grid.bin_samples", c.bin_samples));
  if (const std::string a = cfg.get_string("grid.bin_actions", "mean"); a == "sample") c.bin_actions = EvalMode::kSample;
  else if (a != "mean") throw ConfigError("grid.bin_actions must be mean or sample, got '" + a + "'");

  read_mcts(cfg, c.mcts);
  for (auto* t : {&c.grdrl, &c.drdrl, &c.mlpdrl}) {
    t->max_path_length = c.scenario.horizon;
    t->support = c.scenario.support;
  }
  c.grdrl.apply(cfg, "grdrl");
  c.drdrl.apply(cfg, "drdrl");
  c.mlpdrl.apply(cfg, "mlpdrl");
  cfg.reject_unread_keys();
  c.workers = worker_count(c.workers);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path));
}

void ExperimentConfig::validate() const {
  scenario.validate();
  reward.validate();
  action_model.validate();
  if (reward.horizon != scenario.horizon) throw ConfigError("reward horizon differs from the scenario horizon");
  if (solvers.empty()) throw ConfigError("experiment.solvers is empty");
  if (seeds.empty()) throw ConfigError("experiment.seeds is empty");
  if (bins_per_dim < 1) throw ConfigError("grid.bins_per_dim must be positive");
  if (bin_samples < 0) throw ConfigError("grid.bin_samples must be non-negative");
  if (workers < 1) throw ConfigError("experiment.workers must be positive");
  mcts.validate();
  grdrl.validate();
  drdrl.validate();
  mlpdrl.validate();
}

std::uint64_t bin_eval_seed(std::uint64_t seed, int bin) { return derive_seed(bin_seed(seed, bin), {kEvalStream}); }

int worker_count(int fallback) {
  if (const char* env = std::getenv("AST_WORKERS"); env && *env) {
    int v = 0;
    const std::string_view s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 1)
      throw ConfigError("AST_WORKERS must be a positive integer, got '" + std::string(s) + "'");
    return v;
  }
  return fallback;
}

void parallel_for(int count, int workers, const std::function<void(int)>& job) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) job(i);
    });
}

SolverSummary summarize(const std::vector<CellResult>& cells) {
  SolverSummary s;
  s.bins = static_cast<int>(cells.size());
  double sum = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    if (c.failed) {
      ++s.failed;
      continue;
    }
    if (!c.best.found_event) continue;
    ++s.collisions_found;
    sum += c.best.total_reward;
    best = std::max(best, c.best.total_reward);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.average_collision_reward = s.collisions_found ? sum / s.collisions_found : nan;
  s.max_collision_reward = s.collisions_found ? best : nan;
  s.collision_percentage = s.bins ? 100.0 * s.collisions_found / s.bins : 0.0;
  return s;
}

const SolverReport* AggregateReport::find(std::string_view name) const {
  for (const auto& s : solvers)
    if (s.name == name) return &s;
  return nullptr;
}

AggregateReport run_experiment(const ExperimentConfig& config, std::uint64_t seed, const ProgressSink& progress) {
  config.validate();
  auto say = [&](const std::string& msg) {
    if (progress) progress(msg);
  };
  const BinGrid grid(config.scenario.support, config.bins_per_dim);
  AggregateReport report;
  report.seed = seed;
  report.bins_per_dim = config.bins_per_dim;
  const std::filesystem::path out = config.output_dir / ("seed_" + std::to_string(seed));
  std::filesystem::create_directories(out);

  // GRDRL first: its spend defines the matched per-bin budget.
  long long per_bin_budget = 0;
  if (std::find(config.solvers.begin(), config.solvers.end(), SolverKind::kGrDrl) != config.solvers.end()) {
    pg::TrainConfig t = config.grdrl;
    t.seed = derive_seed(seed, {kEvalStream, 1});
    t.log_csv = out / "grdrl_train.csv";
    t.checkpoint_dir = out / "grdrl_checkpoint";
    SolverReport point, bin_eval;
    point.name = "grdrl_point";
    bin_eval.name = "grdrl_bin";
    try {
      say("grdrl: training " + std::to_string(t.iterations) + " iterations x " +
          std::to_string(t.batch_size_timesteps) + " steps");
      auto sim = make_sim(config);
      const pg::TrainResult trained = pg::train(sim, config.reward, t, [&](const pg::IterationStats& s) {
        if ((s.iteration + 1) % 10 == 0)
          say("grdrl: iteration " + std::to_string(s.iteration + 1) + " best " + std::to_string(s.best_reward));
        return true;
      });
      policy::save_checkpoint(out / "grdrl_policy.bin", trained.policy);
      const auto pol = policy::make_policy(trained.policy.params);
      const PolicyRunner runner{*pol, trained.policy.encoding, config.scenario.support};

      point.cells.resize(static_cast<std::size_t>(grid.size()));
      bin_eval.cells.resize(static_cast<std::size_t>(grid.size()));
      std::mutex mu;
      parallel_for(grid.size(), config.workers, [&](int i) {
        const Bin& bin = grid[i];
        auto local_sim = make_sim(config);
        local_sim.mutable_config().strict_support = false;
        const auto local_pol = pol->clone();
        const PolicyRunner local{*local_pol, runner.encoding, runner.input_support};
        CellResult p, b;
        p.bin = b.bin = i;
        p.center = b.center = bin.center;
        try {
          const Evaluation pe = evaluate_policy(local_sim, local, bin.center, config.reward, EvalMode::kMean);
          p.best = pe.best;
          p.steps = pe.steps;
          const Evaluation be = evaluate_bin(local_sim, local, bin, config.reward, config.bin_samples,
                                             bin_eval_seed(seed, i), config.bin_actions);
          b.best = be.best;
          b.steps = be.steps;
        } catch (const std::exception& e) {
          p.failed = b.failed = true;
          p.error = b.error = e.what();
        }
        std::lock_guard lock(mu);
        point.cells[static_cast<std::size_t>(i)] = std::move(p);
        bin_eval.cells[static_cast<std::size_t>(i)] = std::move(b);
      });
      long long eval_steps = 0;
      for (const auto& c : bin_eval.cells) eval_steps += c.steps;
      for (const auto& c : point.cells) eval_steps += c.steps;
      for (auto* r : {&point, &bin_eval}) {
        r->training_trace = trained.trace;
        r->training_steps = trained.total_steps;
      }
      per_bin_budget = (trained.total_steps + eval_steps) / grid.size();
      say("grdrl: done, " + std::to_string(trained.total_steps + eval_steps) + " steps in total");
    } catch (const std::exception& e) {
      say(std::string("grdrl: failed: ") + e.what());
      for (auto* r : {&point, &bin_eval}) {
        r->cells.assign(static_cast<std::size_t>(grid.size()), CellResult{});
        for (int i = 0; i < grid.size(); ++i) {
          auto& c = r->cells[static_cast<std::size_t>(i)];
          c.bin = i;
          c.center = grid[i].center;
          c.failed = true;
          c.error = e.what();
        }
      }
    }
    for (auto* r : {&point, &bin_eval}) {
      r->summary = summarize(r->cells);
      report.solvers.push_back(std::move(*r));
    }
  }

  for (SolverKind solver : config.solvers) {
    if (solver == SolverKind::kGrDrl) continue;
    SolverReport r;
    r.name = std::string(to_string(solver));
    pg::TrainConfig train = solver == SolverKind::kDrDrl ? config.drdrl : config.mlpdrl;
    mcts::MctsConfig m = config.mcts;
    if (config.match_budget && per_bin_budget > 0) {
      train.iterations = static_cast<int>(std::max<long long>(1, per_bin_budget / train.batch_size_timesteps));
      m.iterations = static_cast<int>(std::max<long long>(1, per_bin_budget / config.scenario.horizon));
    }
    r.steps_per_iteration = solver == SolverKind::kMcts ? config.scenario.horizon : train.batch_size_timesteps;
    say(r.name + ": " + std::to_string(grid.size()) + " bins x " +
        std::to_string(solver == SolverKind::kMcts ? m.iterations : train.iterations) + " iterations");
    r.cells.resize(static_cast<std::size_t>(grid.size()));
    parallel_for(grid.size(), config.workers, [&](int i) {
      r.cells[static_cast<std::size_t>(i)] = run_cell(config, solver, grid[i], seed, &train, &m);
    });
    r.summary = summarize(r.cells);
    report.solvers.push_back(std::move(r));
  }
  return report;
}

}  // namespace ast::harness
