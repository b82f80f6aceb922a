#include "ast/harness/report.hpp"

#include "ast/errors.hpp"
#include "ast/rollout.hpp"
#include "ast/trajectory_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace ast::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string csv_escape(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw InvalidInput("bins.csv: bad number '" + s + "'");
  return v;
}

void write_traces(std::ostream& out, const std::string& solver, const std::string& view, int bin,
                  const std::vector<TracePoint>& points) {
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    running = std::max(running, points[k].value);
    out << solver << ',' << view << ',' << bin << ',' << k << ',' << points[k].steps << ',' << num(points[k].value)
        << ',' << num(running) << '\n';
  }
}

json scenario_json(const crosswalk::ScenarioConfig& scenario) {
  json j = json::object();
  for (const auto& [k, v] : scenario.to_entries()) j[k] = v;
  return j;
}

}  // namespace

void ensure_writable_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::vector<TracePoint> sequential_view(const std::vector<std::vector<double>>& per_bin, long long steps_per_iteration) {
  std::vector<TracePoint> out;
  double running = -std::numeric_limits<double>::infinity();
  long long steps = 0;
  for (const auto& trace : per_bin)
    for (double v : trace) {
      steps += steps_per_iteration;
      running = std::max(running, v);
      out.push_back({steps, running});
    }
  return out;
}

std::vector<TracePoint> batch_view(const std::vector<std::vector<double>>& per_bin, long long steps_per_iteration) {
  std::size_t longest = 0;
  for (const auto& t : per_bin) longest = std::max(longest, t.size());
  std::vector<TracePoint> out;
  double running = -std::numeric_limits<double>::infinity();
  const auto bins = static_cast<long long>(per_bin.size());
  for (std::size_t k = 0; k < longest; ++k) {
    for (const auto& t : per_bin)
      if (!t.empty()) running = std::max(running, t[std::min(k, t.size() - 1)]);
    out.push_back({static_cast<long long>(k + 1) * steps_per_iteration * bins, running});
  }
  return out;
}

std::string format_summary(const std::vector<std::pair<std::string, SolverSummary>>& rows) {
  auto cell = [](double v) {
    if (std::isnan(v)) return std::string("n/a");
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
  };
  std::ostringstream out;
  out << std::left << std::setw(13) << "solver" << std::right << std::setw(14) << "avg_coll_rew" << std::setw(14)
      << "max_coll_rew" << std::setw(11) << "collisions" << std::setw(9) << "pct" << std::setw(8) << "failed" << '\n';
  for (const auto& [name, s] : rows)
    out << std::left << std::setw(13) << name << std::right << std::setw(14) << cell(s.average_collision_reward)
        << std::setw(14) << cell(s.max_collision_reward) << std::setw(11)
        << (std::to_string(s.collisions_found) + "/" + std::to_string(s.bins)) << std::setw(9)
        << cell(s.collision_percentage) << std::setw(8) << s.failed << '\n';
  return out.str();
}

void emit_results(const AggregateReport& report, const ExperimentConfig& config, const fs::path& dir) {
  ensure_writable_directory(dir);

  std::vector<std::pair<std::string, SolverSummary>> rows;
  for (const auto& s : report.solvers) rows.emplace_back(s.name, s.summary);

  {
    auto out = open_out(dir / "summary.csv");
    out << "solver,bins,collisions_found,collision_percentage,average_collision_reward,max_collision_reward,failed,"
           "steps\n";
    for (const auto& s : report.solvers) {
      long long steps = s.training_steps;
      for (const auto& c : s.cells) steps += c.steps;
      const auto& m = s.summary;
      out << s.name << ',' << m.bins << ',' << m.collisions_found << ',' << num(m.collision_percentage) << ','
          << num(m.average_collision_reward) << ',' << num(m.max_collision_reward) << ',' << m.failed << ',' << steps
          << '\n';
    }
  }
  {
    auto out = open_out(dir / "bins.csv");
    out << "solver,bin,ped_x,ped_y,car_x,ped_vy,car_vx,status,event,total_reward,final_distance,steps,error\n";
    for (const auto& s : report.solvers)
      for (const auto& c : s.cells) {
        out << s.name << ',' << c.bin;
        for (std::size_t d = 0; d < kInitialConditionDim; ++d) out << ',' << num(c.center[d]);
        out << ',' << (c.failed ? "failed" : "ok") << ',' << (c.best.found_event ? 1 : 0) << ','
            << num(c.failed ? std::nan("") : c.best.total_reward) << ',' << num(c.best.final_distance) << ','
            << c.steps << ',' << csv_escape(c.error) << '\n';
      }
  }
  {
    auto out = open_out(dir / "report.txt");
    out << "seed " << report.seed << ", " << report.bins_per_dim << " bins per dimension\n\n" << format_summary(rows);
  }
  {
    auto out = open_out(dir / "traces.csv");
    out << "solver,view,bin,index,steps,best_reward,cummax\n";
    for (const auto& s : report.solvers) {
      if (s.name == "grdrl_point") {
        std::vector<TracePoint> pts;
        const long long per_iter =
            s.training_trace.empty() ? 0 : s.training_steps / static_cast<long long>(s.training_trace.size());
        for (std::size_t k = 0; k < s.training_trace.size(); ++k)
          pts.push_back({static_cast<long long>(k + 1) * per_iter, s.training_trace[k]});
        write_traces(out, "grdrl", "training", -1, pts);
        continue;
      }
      if (s.steps_per_iteration == 0) continue;
      std::vector<std::vector<double>> per_bin;
      for (const auto& c : s.cells) {
        std::vector<TracePoint> pts;
        for (std::size_t k = 0; k < c.trace.size(); ++k)
          pts.push_back({static_cast<long long>(k + 1) * s.steps_per_iteration, c.trace[k]});
        write_traces(out, s.name, "per_bin", c.bin, pts);
        per_bin.push_back(c.trace);
      }
      write_traces(out, s.name, "sequential", -1, sequential_view(per_bin, s.steps_per_iteration));
      write_traces(out, s.name, "batch", -1, batch_view(per_bin, s.steps_per_iteration));
    }
  }
  for (const auto& s : report.solvers) {
    std::vector<TrajectoryRecord> records;
    for (const auto& c : s.cells)
      if (!c.failed) records.push_back({s.name, c.bin, c.best});
    write_trajectory_file(dir / ("trajectories_" + s.name + ".jsonl"), config.scenario, config.reward,
                          config.action_model, records, report.seed);
  }
}

std::vector<std::pair<std::string, SolverSummary>> summarize_bins_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("solver,bin,", 0) != 0) throw InvalidInput(path.string() + " is not a bins.csv file");
  std::vector<std::string> order;
  std::map<std::string, std::vector<CellResult>> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 13) throw InvalidInput("bins.csv: expected 13 fields in '" + line + "'");
    if (!cells.contains(f[0])) order.push_back(f[0]);
    CellResult c;
    c.bin = std::stoi(f[1]);
    c.failed = f[7] == "failed";
    c.best.found_event = f[8] == "1";
    c.best.total_reward = parse_double(f[9]);
    c.error = f[12];
    cells[f[0]].push_back(std::move(c));
  }
  std::vector<std::pair<std::string, SolverSummary>> out;
  for (const auto& name : order) out.emplace_back(name, summarize(cells[name]));
  return out;
}

void write_trajectory_file(const fs::path& path, const crosswalk::ScenarioConfig& scenario, const RewardSpec& reward,
                           const ActionModel& model, const std::vector<TrajectoryRecord>& records, std::uint64_t seed) {
  auto out = open_out(path);
  json header;
  header["kind"] = "header";
  header["seed"] = seed;
  header["scenario"] = scenario_json(scenario);
  header["reward"] = {{"alpha", reward.alpha}, {"beta", reward.beta}, {"horizon", reward.horizon}};
  header["action_model"] = {{"mean", std::vector<double>(model.mean.data(), model.mean.data() + 6)},
                            {"variance", std::vector<double>(model.variance.data(), model.variance.data() + 6)}};
  out << header.dump() << '\n';
  for (const auto& r : records) {
    json j;
    j["kind"] = "trajectory";
    j["solver"] = r.solver;
    j["bin"] = r.bin;
    j["trajectory"] = json::parse(trajectory_to_json(r.trajectory));
    out << j.dump() << '\n';
  }
  if (!out) throw ConfigError("short write to " + path.string());
}

TrajectoryFile read_trajectory_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  TrajectoryFile file;
  std::string line;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        KeyValueConfig cfg;
        for (const auto& [k, v] : j.at("scenario").items()) cfg.set("scenario." + k, v.get<std::string>());
        file.scenario = crosswalk::ScenarioConfig::from_config(cfg, "scenario");
        const auto& r = j.at("reward");
        file.reward = {r.at("alpha").get<double>(), r.at("beta").get<double>(), r.at("horizon").get<int>()};
        const auto mean = j.at("action_model").at("mean").get<std::vector<double>>();
        const auto var = j.at("action_model").at("variance").get<std::vector<double>>();
        if (mean.size() != 6 || var.size() != 6) throw InvalidInput("action model needs 6 entries");
        file.action_model.mean = Vector6(mean.data());
        file.action_model.variance = Vector6(var.data());
        file.seed = j.value("seed", std::uint64_t{0});
        have_header = true;
      } else if (kind == "trajectory") {
        if (!have_header) throw InvalidInput("trajectory record before the header");
        file.records.push_back(
            {j.at("solver").get<std::string>(), j.at("bin").get<int>(), trajectory_from_json(j.at("trajectory").dump())});
      } else {
        throw InvalidInput("unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const InvalidInput& e) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw InvalidInput(path.string() + ": missing header record");
  return file;
}

std::vector<ReplayCheck> replay_file(const TrajectoryFile& file) {
  crosswalk::ScenarioConfig scenario = file.scenario;
  scenario.strict_support = false;  // records may come from samples anywhere in a bin
  crosswalk::CrosswalkSimulator sim(scenario, file.action_model);
  std::vector<ReplayCheck> out;
  for (const auto& r : file.records) {
    ReplayCheck c{r, replay(sim, r.trajectory.initial_condition, r.trajectory.actions, file.reward), false};
    c.identical = c.replayed.found_event == r.trajectory.found_event && c.replayed.rewards == r.trajectory.rewards &&
                  c.replayed.total_reward == r.trajectory.total_reward;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ast::harness
