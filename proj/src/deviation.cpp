#include "taxgames/deviation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "taxgames/buchi.hpp"
#include "taxgames/graph.hpp"

namespace taxgames {

namespace {

std::vector<bool> winners_of(const Game& game, const LassoRun& run) {
  const auto word = label_word(game.arena, run);
  std::vector<bool> w;
  for (const auto& g : game.goals) w.push_back(ltl::eval_on_lasso(g, word));
  return w;
}

bool same_profile(const Profile& a, const Profile& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i] && !(*a[i] == *b[i]) && !(a[i]->canonical() == b[i]->canonical())) return false;
  }
  return true;
}

}  // namespace

bool initial_deviation(const Game& game, const Profile& profile, int agent, const StrategyMachine& alt) {
  Profile other = profile;
  other[agent] = make_machine(alt);
  const LassoRun before = generate_run(game.arena, profile);
  const LassoRun after = generate_run(game.arena, other);
  if (before == after) return false;
  const auto w0 = winners_of(game, before);
  const auto w1 = winners_of(game, after);
  return !w0[agent] || w1[agent];
}

int DeviationGraph::add_node(const Game& game, const Profile& profile) {
  if (auto k = find(profile)) return *k;
  nodes.push_back(profile);
  runs.push_back(generate_run(game.arena, profile));
  winners.push_back(winners_of(game, runs.back()));
  run_class.push_back(-1);
  return static_cast<int>(nodes.size()) - 1;
}

std::optional<int> DeviationGraph::find(const Profile& profile) const {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (same_profile(nodes[k], profile)) return static_cast<int>(k);
  }
  return std::nullopt;
}

void assign_run_classes(DeviationGraph& g) {
  std::map<LassoRun, int> ids;
  for (const auto& r : g.runs) ids.emplace(r, 0);
  g.classes.clear();
  for (auto& [run, id] : ids) {
    id = static_cast<int>(g.classes.size());
    g.classes.push_back(run);
  }
  g.run_class.resize(g.runs.size());
  for (std::size_t k = 0; k < g.runs.size(); ++k) g.run_class[k] = ids.at(g.runs[k]);
}

DeviationGraph build_deviation_graph(const Game& game, const std::vector<Profile>& seeds, int memory_bound,
                                     std::size_t cap) {
  DeviationGraph g;
  if (seeds.empty()) return g;
  const Arena& a = game.arena;
  std::vector<std::vector<MachinePtr>> machines;
  for (int i = 0; i < a.num_agents(); ++i) {
    machines.push_back(enumerate_machines(a.num_profiles(), a.num_actions(i), memory_bound, cap));
  }
  // Canonical profiles are keyed by their per-agent machines so lookups stay cheap.
  std::map<std::vector<const StrategyMachine*>, int> index;
  std::map<StrategyMachine, MachinePtr> interned;
  for (const auto& list : machines) {
    for (const auto& m : list) interned.emplace(*m, m);
  }
  auto intern = [&](const MachinePtr& m) {
    auto c = m->canonical();
    auto [it, fresh] = interned.emplace(c, nullptr);
    if (fresh) it->second = make_machine(std::move(c));
    return it->second;
  };
  auto add = [&](Profile p) {
    for (auto& m : p) m = intern(m);
    std::vector<const StrategyMachine*> key;
    for (const auto& m : p) key.push_back(m.get());
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    g.nodes.push_back(p);
    g.runs.push_back(generate_run(a, p));
    g.winners.push_back(winners_of(game, g.runs.back()));
    g.run_class.push_back(-1);
    const int id = static_cast<int>(g.nodes.size()) - 1;
    index.emplace(std::move(key), id);
    if (g.nodes.size() > cap) throw ResourceLimit("deviation graph exceeds " + std::to_string(cap) + " nodes");
    return id;
  };
  std::vector<int> seed_ids;
  for (const auto& s : seeds) {
    check_profile(a, s);
    seed_ids.push_back(add(s));
  }
  for (int sid : seed_ids) {
    for (int i = 0; i < a.num_agents(); ++i) {
      for (const auto& m : machines[i]) {
        if (*m == *g.nodes[sid][i]) continue;
        Profile p = g.nodes[sid];
        p[i] = m;
        const LassoRun run = generate_run(a, p);
        if (run == g.runs[sid]) continue;
        const auto w = winners_of(game, run);
        if (g.winners[sid][i] && !w[i]) continue;
        add(std::move(p));
      }
    }
  }
  // All initial deviations among the nodes: pairs differing in one agent's machine.
  const int n = a.num_agents();
  for (int i = 0; i < n; ++i) {
    std::map<std::vector<const StrategyMachine*>, std::vector<int>> buckets;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      std::vector<const StrategyMachine*> key;
      for (int j = 0; j < n; ++j) key.push_back(j == i ? nullptr : g.nodes[k][j].get());
      buckets[key].push_back(static_cast<int>(k));
    }
    for (const auto& [key, members] : buckets) {
      for (int u : members) {
        for (int v : members) {
          if (u == v || g.runs[u] == g.runs[v]) continue;
          if (g.winners[u][i] && !g.winners[v][i]) continue;
          g.edges.push_back({u, v, i});
        }
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  assign_run_classes(g);
  return g;
}

namespace {

graph::Adjacency agent_class_graph(const DeviationGraph& g, int agent) {
  graph::Adjacency adj(static_cast<std::size_t>(g.num_classes()));
  for (const auto& e : g.edges) {
    if (e.agent != agent) continue;
    adj[g.run_class[e.source]].push_back(g.run_class[e.target]);
  }
  for (auto& out : adj) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return adj;
}

int max_agent(const DeviationGraph& g) {
  int m = -1;
  for (const auto& e : g.edges) m = std::max(m, e.agent);
  return m;
}

}  // namespace

std::optional<AgentCycle> single_agent_observed_cycle(const DeviationGraph& g) {
  for (int i = 0; i <= max_agent(g); ++i) {
    const auto adj = agent_class_graph(g, i);
    int count = 0;
    const auto comp = graph::strongly_connected_components(adj, count);
    std::vector<int> size(static_cast<std::size_t>(count), 0);
    for (int c : comp) ++size[c];
    for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
      bool self = std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
      if (size[comp[v]] < 2 && !self) continue;
      // Walk inside the component until a class repeats.
      std::vector<int> path{v};
      std::vector<int> pos(adj.size(), -1);
      pos[v] = 0;
      int cur = v;
      while (true) {
        int nxt = -1;
        for (int w : adj[cur]) {
          if (comp[w] == comp[v]) {
            nxt = w;
            break;
          }
        }
        if (pos[nxt] >= 0) {
          AgentCycle c{i, std::vector<int>(path.begin() + pos[nxt], path.end())};
          c.classes.push_back(nxt);
          return c;
        }
        pos[nxt] = static_cast<int>(path.size());
        path.push_back(nxt);
        cur = nxt;
      }
    }
  }
  return std::nullopt;
}

ObservedPathIndex observed_path_index(const DeviationGraph& g, int num_agents) {
  if (auto c = single_agent_observed_cycle(g)) {
    throw std::invalid_argument("agent " + std::to_string(c->agent) + " has a single-agent observed deviation cycle");
  }
  ObservedPathIndex idx;
  const int nc = g.num_classes();
  idx.longest.assign(static_cast<std::size_t>(num_agents), 0);
  idx.from.assign(static_cast<std::size_t>(nc), std::vector<int>(static_cast<std::size_t>(num_agents), 0));
  idx.in_dev.assign(static_cast<std::size_t>(nc), {});
  for (const auto& e : g.edges) idx.in_dev[g.run_class[e.target]].insert(e.agent);
  for (int i = 0; i < num_agents; ++i) {
    const auto adj = agent_class_graph(g, i);
    int count = 0;
    const auto comp = graph::strongly_connected_components(adj, count);
    // Tarjan numbers components in reverse topological order, so successors come first.
    std::vector<std::vector<int>> members(static_cast<std::size_t>(count));
    for (int v = 0; v < nc; ++v) members[comp[v]].push_back(v);
    for (int c = 0; c < count; ++c) {
      for (int v : members[c]) {
        int best = 0;
        for (int w : adj[v]) best = std::max(best, idx.from[w][i] + 1);
        idx.from[v][i] = best;
        idx.longest[i] = std::max(idx.longest[i], best);
      }
    }
  }
  return idx;
}

}  // namespace taxgames
