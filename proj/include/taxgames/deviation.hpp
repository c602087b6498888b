#pragma once

#include <optional>
#include <set>
#include <vector>

#include "taxgames/arena.hpp"
#include "taxgames/strategy.hpp"

namespace taxgames {

/// sigma ->_agent sigma' : agent switches to `alt`, the run changes, and a
/// winner stays a winner.
bool initial_deviation(const Game& game, const Profile& profile, int agent, const StrategyMachine& alt);

struct DeviationEdge {
  int source = 0;
  int target = 0;
  int agent = 0;
  bool operator==(const DeviationEdge&) const = default;
  bool operator<(const DeviationEdge& o) const {
    if (source != o.source) return source < o.source;
    if (target != o.target) return target < o.target;
    return agent < o.agent;
  }
};

/// Profiles with their runs; nodes generating equal runs share a run class.
struct DeviationGraph {
  std::vector<Profile> nodes;
  std::vector<LassoRun> runs;
  std::vector<std::vector<bool>> winners;  // per node, per agent
  std::vector<DeviationEdge> edges;
  std::vector<int> run_class;      // per node
  std::vector<LassoRun> classes;   // representative run per class, sorted

  int add_node(const Game& game, const Profile& profile);
  int num_classes() const { return static_cast<int>(classes.size()); }
  /// Node index of a structurally equal profile, if present.
  std::optional<int> find(const Profile& profile) const;
};

/// Rebuilds run classes so class ids follow the run order.
void assign_run_classes(DeviationGraph& graph);

/// Seeds plus every one-step initial-deviation target within the bounded
/// universe; edges are all initial deviations among the resulting nodes.
DeviationGraph build_deviation_graph(const Game& game, const std::vector<Profile>& seeds, int memory_bound,
                                     std::size_t cap = 10'000'000);

/// A cycle of run classes whose edges all belong to one agent.
struct AgentCycle {
  int agent = 0;
  std::vector<int> classes;
};

std::optional<AgentCycle> single_agent_observed_cycle(const DeviationGraph& graph);

/// Longest single-agent observed paths, measured in edges.
struct ObservedPathIndex {
  std::vector<int> longest;                // l_i
  std::vector<std::vector<int>> from;      // d_i(class), indexed [class][agent]
  std::vector<std::set<int>> in_dev;       // agents with an edge into the class
};

/// Throws std::invalid_argument if some agent has an observed cycle.
ObservedPathIndex observed_path_index(const DeviationGraph& graph, int num_agents);

}  // namespace taxgames
