#include "taxgames/equilibrium.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace taxgames {

std::strong_ordering prefers(const LexValue& a, const LexValue& b) {
  if (a.goal_met != b.goal_met) return a.goal_met ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.cost < b.cost) return std::strong_ordering::greater;
  if (b.cost < a.cost) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

EquilibriumSolver::EquilibriumSolver(const Game& game, const DynamicTax* tax, const BuchiOptions& options)
    : game_(&game), tax_(tax) {
  require_valid(game);
  if (tax) check_tax(game.arena, *tax);
  BuchiOptions o = options;
  o.alphabet_bits = std::max<std::size_t>(1, game.arena.vocabulary().size());
  for (const auto& g : game.goals) goals_.push_back(to_buchi(g, o));
}

Outcome EquilibriumSolver::evaluate(const Profile& profile) const {
  const Arena& a = game_->arena;
  Outcome out;
  out.run = generate_run(a, profile);
  const auto word = label_word(a, out.run);
  for (int i = 0; i < a.num_agents(); ++i) {
    out.winners.push_back(ltl::eval_on_lasso(game_->goals[i], word));
    out.costs.push_back(taxed_cost(a, out.run, tax_, i));
  }
  return out;
}

ResponseGraph EquilibriumSolver::response_graph(const Profile& profile, int agent) const {
  const Arena& a = game_->arena;
  const int n = a.num_agents();
  const BuchiAutomaton& aut = goals_[agent];
  // Vertex key: state, machine states of the others (own slot unused), tax state, automaton state.
  const std::size_t width = static_cast<std::size_t>(n) + 3;
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> keys;
  std::vector<int> todo;
  ResponseGraph rg;
  auto vertex = [&](std::vector<int> key) {
    auto [it, fresh] = ids.emplace(key, static_cast<int>(keys.size()));
    if (fresh) {
      keys.push_back(std::move(key));
      todo.push_back(it->second);
    }
    return it->second;
  };
  for (int b : aut.initial()) {
    std::vector<int> key(width, 0);
    key[0] = a.initial();
    key[width - 1] = b;
    rg.initial.push_back(vertex(std::move(key)));
  }
  std::vector<int> actions(static_cast<std::size_t>(n));
  std::vector<int> succ;
  while (!todo.empty()) {
    const int v = todo.back();
    todo.pop_back();
    const std::vector<int> key = keys[v];
    const int s = key[0];
    const int qt = key[static_cast<std::size_t>(n) + 1];
    aut.successors(key[width - 1], a.label(s), succ);
    for (int j = 0; j < n; ++j) {
      if (j != agent) actions[j] = profile[j]->output(key[j + 1]);
    }
    for (int act = 0; act < a.num_actions(agent); ++act) {
      actions[agent] = act;
      const int p = a.profile_index(actions);
      std::vector<int> next(width, 0);
      next[0] = a.transition(s, p);
      for (int j = 0; j < n; ++j) {
        if (j != agent) next[j + 1] = profile[j]->next(key[j + 1], p);
      }
      next[static_cast<std::size_t>(n) + 1] = tax_ ? tax_->next(qt, p) : 0;
      Rational w = a.cost(s, p)[agent];
      if (tax_) {
        const CostVector& t = tax_->output(qt).at(s, p);
        if (!t.empty()) w += t[agent];
      }
      for (int b : succ) {
        next[width - 1] = b;
        const int u = vertex(next);
        rg.graph.edges.push_back({v, u, w});
      }
    }
  }
  rg.graph.num_vertices = static_cast<int>(keys.size());
  rg.accepting.resize(keys.size());
  for (std::size_t v = 0; v < keys.size(); ++v) rg.accepting[v] = aut.accepting(keys[v][width - 1]);
  return rg;
}

LexValue EquilibriumSolver::best_response(const Profile& profile, int agent) const {
  const ResponseGraph rg = response_graph(profile, agent);
  const int nv = rg.graph.num_vertices;
  graph::Adjacency adj(static_cast<std::size_t>(nv));
  for (const auto& e : rg.graph.edges) adj[e.from].push_back(e.to);
  int count = 0;
  const auto comp = graph::strongly_connected_components(adj, count);
  std::vector<bool> nontrivial(static_cast<std::size_t>(count), false), has_accepting(static_cast<std::size_t>(count), false);
  for (const auto& e : rg.graph.edges) {
    if (comp[e.from] == comp[e.to]) nontrivial[comp[e.from]] = true;
  }
  for (int v = 0; v < nv; ++v) {
    if (rg.accepting[v]) has_accepting[comp[v]] = true;
  }
  std::vector<bool> good(static_cast<std::size_t>(nv), false);
  bool any = false;
  for (int v = 0; v < nv; ++v) {
    if (nontrivial[comp[v]] && has_accepting[comp[v]]) {
      good[v] = true;
      any = true;
    }
  }
  // Cycles never straddle components, so one call over the union of the
  // accepting components yields the minimum over each of them.
  auto mean = any ? graph::min_mean_cycle(rg.graph, good) : graph::min_mean_cycle(rg.graph);
  if (!mean) throw std::logic_error("response graph without a cycle");
  return {any, *mean};
}

bool EquilibriumSolver::is_nash(const Profile& profile) const { return is_nash(profile, evaluate(profile)); }

bool EquilibriumSolver::is_nash(const Profile& profile, const Outcome& outcome) const {
  for (int i = 0; i < game_->arena.num_agents(); ++i) {
    if (prefers(best_response(profile, i), outcome.value(i)) > 0) return false;
  }
  return true;
}

Outcome evaluate(const Game& game, const Profile& profile, const DynamicTax* tax) {
  check_profile(game.arena, profile);
  return EquilibriumSolver(game, tax).evaluate(profile);
}

LexValue best_response(const Game& game, const Profile& profile, int agent, const DynamicTax* tax) {
  check_profile(game.arena, profile);
  return EquilibriumSolver(game, tax).best_response(profile, agent);
}

bool is_nash(const Game& game, const Profile& profile, const DynamicTax* tax) {
  check_profile(game.arena, profile);
  return EquilibriumSolver(game, tax).is_nash(profile);
}

int worker_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TAXGAMES_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

namespace {

// Best-response values keyed by the strategies of the other agents.
class ResponseCache {
 public:
  ResponseCache(const EquilibriumSolver& solver, const ProfileUniverse& universe) : solver_(solver), universe_(universe) {
    for (int i = 0; i < universe.num_agents(); ++i) values_.emplace_back(universe.others_count(i));
  }

  LexValue get(std::uint64_t index, const Profile& profile, int agent) {
    const std::uint64_t key = universe_.others_index(index, agent);
    {
      std::lock_guard lock(mutex_);
      if (const auto& v = values_[agent][key]) return *v;
    }
    LexValue v = solver_.best_response(profile, agent);
    std::lock_guard lock(mutex_);
    values_[agent][key] = v;
    return v;
  }

 private:
  const EquilibriumSolver& solver_;
  const ProfileUniverse& universe_;
  std::vector<std::vector<std::optional<LexValue>>> values_;
  std::mutex mutex_;
};

}  // namespace

std::vector<std::uint64_t> find_ne_indices(const EquilibriumSolver& solver, const ProfileUniverse& universe,
                                           const std::optional<ltl::Formula>& filter, const SearchOptions& options) {
  const Arena& arena = solver.game().arena;
  ResponseCache cache(solver, universe);
  auto check = [&](std::uint64_t index) {
    const Profile profile = universe.at(index);
    const LassoRun run = generate_run(arena, profile);
    const auto word = label_word(arena, run);
    if (filter && !ltl::eval_on_lasso(*filter, word)) return false;
    for (int i = 0; i < arena.num_agents(); ++i) {
      const LexValue current{ltl::eval_on_lasso(solver.game().goals[i], word), taxed_cost(arena, run, solver.tax(), i)};
      if (prefers(cache.get(index, profile, i), current) > 0) return false;
    }
    return true;
  };

  const int threads = worker_threads(options.threads);
  const std::uint64_t total = universe.size();
  const std::uint64_t block = threads > 1 ? 4096 : total;
  std::vector<std::uint64_t> found;
  for (std::uint64_t start = 0; start < total; start += block) {
    const std::uint64_t end = std::min(total, start + block);
    if (threads <= 1) {
      for (std::uint64_t k = start; k < end; ++k) {
        if (check(k)) {
          found.push_back(k);
          if (options.limit && found.size() >= options.limit) return found;
        }
      }
      continue;
    }
    std::vector<std::vector<std::uint64_t>> parts(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    const std::uint64_t span = (end - start + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const std::uint64_t lo = start + span * t, hi = std::min(end, lo + span);
        for (std::uint64_t k = lo; k < hi; ++k) {
          if (check(k)) parts[t].push_back(k);
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& p : parts) found.insert(found.end(), p.begin(), p.end());
    if (options.limit && found.size() >= options.limit) {
      found.resize(options.limit);
      return found;
    }
  }
  return found;
}

std::vector<Profile> find_ne(const Game& game, const DynamicTax* tax, int memory_bound,
                             const std::optional<ltl::Formula>& filter, const SearchOptions& options) {
  EquilibriumSolver solver(game, tax);
  ProfileUniverse universe(game.arena, memory_bound, options.cap_profiles);
  std::vector<Profile> out;
  for (auto k : find_ne_indices(solver, universe, filter, options)) out.push_back(universe.at(k));
  return out;
}

}  // namespace taxgames
