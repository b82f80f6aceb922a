#include "ast/mcts/mcts.hpp"

#include "ast/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace ast::mcts {
namespace {

EnvironmentAction sample_model_action(const ActionModel& model, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector6 z;
  for (Eigen::Index i = 0; i < 6; ++i) z[i] = normal(rng);
  return model.denormalize(z);
}

EnvironmentAction rollout_action(const MctsConfig& config, const ActionModel& model, Rng& rng) {
  if (config.progressive_widening) return sample_model_action(model, rng);
  std::uniform_int_distribution<std::size_t> pick(0, config.discrete_actions.size() - 1);
  return config.discrete_actions[pick(rng)];
}

void expand_discrete(TreeNode& node, const MctsConfig& config) {
  if (config.progressive_widening || !node.edges.empty()) return;
  for (const auto& a : config.discrete_actions) node.edges.push_back(Edge{a});
}

}  // namespace

void MctsConfig::validate() const {
  if (!(exploration >= 0.0)) throw InvalidInput("mcts: exploration must be >= 0");
  if (!(k_action > 0.0) || !(k_state > 0.0)) throw InvalidInput("mcts: k_action and k_state must be > 0");
  if (!(alpha_action > 0.0 && alpha_action < 1.0) || !(alpha_state > 0.0 && alpha_state < 1.0))
    throw InvalidInput("mcts: widening exponents must lie in (0, 1)");
  if (!progressive_widening && discrete_actions.empty())
    throw InvalidInput("mcts: widening disabled but no discrete action set given");
  if (rollout_depth < 0) throw InvalidInput("mcts: rollout_depth must be >= 0");
  if (iterations < 1) throw InvalidInput("mcts: iteration budget must be >= 1");
}

std::size_t select_action(const TreeNode& node, double c) {
  if (node.edges.empty()) throw ContractViolation("select_action on a node without children");
  const double log_n = std::log(static_cast<double>(std::max<long long>(node.visits, 1)));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.edges.size(); ++i) {
    const Edge& e = node.edges[i];
    if (e.visits == 0) return i;
    const double score = e.q + c * std::sqrt(log_n / static_cast<double>(e.visits));
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

bool widening_allowed(const TreeNode& node, const MctsConfig& config) {
  if (!config.progressive_widening) return false;
  const double n = static_cast<double>(std::max<long long>(node.visits, 1));
  return static_cast<double>(node.edges.size()) < config.k_action * std::pow(n, config.alpha_action);
}

std::optional<EnvironmentAction> widen(TreeNode& node, const MctsConfig& config, const ActionModel& model, Rng& rng) {
  if (!widening_allowed(node, config)) return std::nullopt;
  const EnvironmentAction a = sample_model_action(model, rng);
  node.edges.push_back(Edge{a});
  return a;
}

SearchResult search(Simulator& sim, const InitialCondition& s0, const RewardSpec& spec, const MctsConfig& config) {
  config.validate();
  spec.validate();
  if (sim.horizon() != spec.horizon) throw InvalidInput("mcts: simulator horizon disagrees with reward horizon");

  const ActionModel& model = sim.action_model();
  Rng rng(config.seed);
  SearchResult out;
  out.tree.nodes.emplace_back();
  out.trace.reserve(static_cast<std::size_t>(config.iterations));
  bool have_best = false;

  struct Visit {
    int node;
    std::size_t edge;
  };
  std::vector<Visit> path;

  for (int iter = 0; iter < config.iterations; ++iter) {
    sim.initialize(s0);
    Trajectory traj;
    traj.initial_condition = s0;
    path.clear();

    const auto take = [&](const EnvironmentAction& a) {
      StepResult r;
      try {
        r = sim.step(a);
      } catch (const SimulationError&) {
        throw;
      } catch (const std::exception& e) {
        throw SimulationError(sim.time_step(), e.what());
      }
      traj.append(a, step_reward(r, a, model, spec, sim.time_step()), r.event, r.distance);
      ++out.simulated_steps;
    };

    // Tree policy: descend until a new child is created or the episode ends.
    int node = 0;
    while (!sim.is_terminal()) {
      expand_discrete(out.tree.nodes[static_cast<std::size_t>(node)], config);
      widen(out.tree.nodes[static_cast<std::size_t>(node)], config, model, rng);
      const std::size_t e = select_action(out.tree.nodes[static_cast<std::size_t>(node)], config.exploration);
      path.push_back({node, e});
      take(out.tree.nodes[static_cast<std::size_t>(node)].edges[e].action);
      int child = out.tree.nodes[static_cast<std::size_t>(node)].edges[e].child;
      if (child < 0) {
        child = static_cast<int>(out.tree.nodes.size());
        out.tree.nodes.emplace_back();
        out.tree.nodes[static_cast<std::size_t>(node)].edges[e].child = child;
        break;
      }
      node = child;
    }

    // Default policy.
    for (int d = 0; d < config.rollout_depth && !sim.is_terminal(); ++d) take(rollout_action(config, model, rng));

    // Backup: each edge receives the return accumulated from its step onward.
    double ret = 0.0;
    for (std::size_t k = traj.rewards.size(); k-- > path.size();) ret += traj.rewards[k];
    for (std::size_t k = path.size(); k-- > 0;) {
      ret += traj.rewards[k];
      TreeNode& n = out.tree.nodes[static_cast<std::size_t>(path[k].node)];
      Edge& edge = n.edges[path[k].edge];
      ++n.visits;
      ++edge.visits;
      edge.q += (ret - edge.q) / static_cast<double>(edge.visits);
    }

    if (!have_best || traj.total_reward > out.best.total_reward) {
      out.best = std::move(traj);
      have_best = true;
    }
    out.trace.push_back(out.best.total_reward);
  }
  return out;
}

}  // namespace ast::mcts
