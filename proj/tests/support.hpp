#pragma once

// Helpers shared by the unit and acceptance suites: fixture access, random
// instance generators and brute-force oracles that do not reuse library code.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "taxgames/documents.hpp"
#include "taxgames/equilibrium.hpp"
#include "taxgames/graph.hpp"
#include "taxgames/ltl.hpp"
#include "taxgames/strategy.hpp"
#include "taxgames/taxation.hpp"

namespace testsupport {

using namespace taxgames;

inline std::string fixture(const std::string& name) { return std::string(TAXGAMES_FIXTURES) + "/" + name; }

inline Game fixture_game(const std::string& name) { return load_game(read_file(fixture(name))); }

inline Profile fixture_profile(const std::string& name, const Game& game) {
  return load_profile(read_file(fixture(name)), game.arena);
}

inline DynamicTax fixture_tax(const std::string& name, const Game& game) {
  return load_tax(read_file(fixture(name)), game.arena).machine;
}

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline const std::vector<std::string>& goal_templates() {
  static const std::vector<std::string> t{"G F p", "F G q", "G !p", "p U q",    "F p",  "G (p -> X q)",
                                          "true",  "X !q",  "G F (p & q)", "F G !p", "G (p | q)", "!q U p"};
  return t;
}

/// Two agents over {p, q} with up to `max_states` states and up to
/// `max_actions` actions each; integer costs in 0..max_cost.
inline Game random_game(std::mt19937_64& rng, int max_states = 3, int max_actions = 2, int max_cost = 3) {
  const int n = uniform(rng, 1, max_states);
  Vocabulary vocab({"p", "q"});
  std::vector<std::vector<std::string>> actions(2);
  for (int i = 0; i < 2; ++i) {
    const int k = uniform(rng, 1, max_actions);
    for (int a = 0; a < k; ++a) actions[i].push_back(std::string(1, static_cast<char>((i == 0 ? 'a' : 'x') + a)));
  }
  std::vector<std::string> names;
  std::vector<LabelSet> labels;
  for (int s = 0; s < n; ++s) {
    names.push_back("s" + std::to_string(s));
    labels.push_back(static_cast<LabelSet>(uniform(rng, 0, 3)));
  }
  Game g{Arena(vocab, {"1", "2"}, actions, names, labels, 0), {}};
  for (int s = 0; s < n; ++s) {
    for (int p = 0; p < g.arena.num_profiles(); ++p) {
      g.arena.set_transition(s, p, uniform(rng, 0, n - 1));
      g.arena.set_cost(s, p, {Rational(uniform(rng, 0, max_cost)), Rational(uniform(rng, 0, max_cost))});
    }
  }
  const auto& t = goal_templates();
  for (int i = 0; i < 2; ++i) {
    g.goals.push_back(ltl::parse(t[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(t.size()) - 1))], vocab));
  }
  return g;
}

inline StaticTax random_static_tax(std::mt19937_64& rng, const Arena& arena, int max_component) {
  StaticTax tau(arena.num_agents());
  for (int s = 0; s < arena.num_states(); ++s) {
    for (int p = 0; p < arena.num_profiles(); ++p) {
      CostVector v;
      for (int i = 0; i < arena.num_agents(); ++i) v.push_back(Rational(uniform(rng, 0, max_component)));
      tau.set(s, p, std::move(v));
    }
  }
  return tau;
}

// ---------------------------------------------------------------------------
// LTL oracle: direct recursion on the infinite word. From the first cycle
// position on, truth values repeat with the cycle, so an until only has to
// look one full cycle ahead of max(j, prefix).

namespace oracle {

inline bool holds(const ltl::Formula& f, const ltl::LassoWord& w, std::size_t j) {
  const std::size_t p = w.prefix.size();
  const std::size_t c = w.cycle.size();
  auto fold = [&](std::size_t k) { return k < p ? k : p + (k - p) % c; };
  j = fold(j);
  switch (f.op()) {
    case ltl::Op::True: return true;
    case ltl::Op::Var: return (w.at(j) >> f.var_index()) & 1U;
    case ltl::Op::Not: return !holds(f.child(), w, j);
    case ltl::Op::Or: return holds(f.lhs(), w, j) || holds(f.rhs(), w, j);
    case ltl::Op::Next: return holds(f.child(), w, j + 1);
    case ltl::Op::Until: {
      const std::size_t end = std::max(j, p) + c;
      for (std::size_t k = j; k < end; ++k) {
        if (holds(f.rhs(), w, k)) return true;
        if (!holds(f.lhs(), w, k)) return false;
      }
      return false;
    }
  }
  return false;
}

inline bool holds(const ltl::Formula& f, const ltl::LassoWord& w) { return holds(f, w, 0); }

/// Minimum cycle mean by listing every simple cycle (start = its least vertex).
inline std::optional<Rational> min_mean_simple_cycles(const graph::WeightedDigraph& g) {
  std::vector<std::vector<std::pair<int, Rational>>> out(static_cast<std::size_t>(g.num_vertices));
  for (const auto& e : g.edges) out[e.from].push_back({e.to, e.weight});
  std::optional<Rational> best;
  std::vector<bool> on(static_cast<std::size_t>(g.num_vertices), false);
  std::function<void(int, int, Rational, int)> dfs = [&](int start, int v, Rational sum, int len) {
    for (const auto& [w, wt] : out[v]) {
      if (w == start) {
        Rational mean = (sum + wt) / (len + 1);
        if (!best || mean < *best) best = mean;
      } else if (w > start && !on[w]) {
        on[w] = true;
        dfs(start, w, sum + wt, len + 1);
        on[w] = false;
      }
    }
  };
  for (int s = 0; s < g.num_vertices; ++s) {
    on[s] = true;
    dfs(s, s, Rational(0), 0);
    on[s] = false;
  }
  return best;
}

/// Breadth-first renumbering of the reachable part, written independently of
/// StrategyMachine::canonical.
inline std::pair<std::vector<int>, std::vector<int>> relabel(int letters, const std::vector<int>& next,
                                                             const std::vector<int>& out) {
  std::vector<int> id(out.size(), -1);
  std::vector<int> order{0};
  id[0] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int l = 0; l < letters; ++l) {
      const int t = next[static_cast<std::size_t>(order[k] * letters + l)];
      if (id[t] < 0) {
        id[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  }
  std::vector<int> n2, o2;
  for (int s : order) {
    o2.push_back(out[s]);
    for (int l = 0; l < letters; ++l) n2.push_back(id[next[static_cast<std::size_t>(s * letters + l)]]);
  }
  return {n2, o2};
}

/// Every machine with at most `bound` states, up to renumbering, by filtering
/// all raw tables.
inline std::size_t count_machines(int letters, int actions, int bound) {
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  for (int k = 1; k <= bound; ++k) {
    const std::size_t cells = static_cast<std::size_t>(k * letters);
    std::vector<int> next(cells, 0), out(static_cast<std::size_t>(k), 0);
    auto bump = [](std::vector<int>& v, int base) {
      for (auto& d : v) {
        if (++d < base) return true;
        d = 0;
      }
      return false;
    };
    do {
      do {
        auto [n2, o2] = relabel(letters, next, out);
        if (static_cast<int>(o2.size()) == k) seen.insert({n2, o2});
      } while (bump(out, actions));
    } while (bump(next, k));
  }
  return seen.size();
}

/// Result of one deviation found by the bounded oracle.
struct DeviationValue {
  bool goal_met = false;
  Rational cost;
};

/// Every run reachable by `agent` switching to a machine with at most
/// `max_states` states. Transitions are chosen lazily, only when the run
/// first uses them, so each distinct run is produced without listing whole
/// machines.
inline std::vector<DeviationValue> bounded_deviations(const Game& game, const Profile& profile, int agent,
                                                      const DynamicTax* tax, int max_states) {
  const Arena& a = game.arena;
  const int n = a.num_agents();
  const int letters = a.num_profiles();
  std::vector<DeviationValue> result;

  struct Config {
    int state;
    std::vector<int> others;
    int dev;
    int tax;
    bool operator==(const Config&) const = default;
  };
  std::vector<int> next;
  std::vector<int> out;
  std::vector<Config> trail;
  std::vector<int> trail_profile;

  auto finish = [&](std::size_t loop_start) {
    ltl::LassoWord w;
    for (std::size_t k = 0; k < trail.size(); ++k) {
      (k < loop_start ? w.prefix : w.cycle).push_back(a.label(trail[k].state));
    }
    Rational sum(0);
    for (std::size_t k = loop_start; k < trail.size(); ++k) {
      sum += a.cost(trail[k].state, trail_profile[k])[agent];
      if (tax) sum += tax->output(trail[k].tax).at(trail[k].state, trail_profile[k])[agent];
    }
    result.push_back({holds(game.goals[agent], w), sum / static_cast<long>(trail.size() - loop_start)});
  };

  std::function<void(Config)> walk = [&](Config cfg) {
    for (std::size_t k = 0; k < trail.size(); ++k) {
      if (trail[k] == cfg) {
        finish(k);
        return;
      }
    }
    std::vector<int> acts(static_cast<std::size_t>(n));
    for (int j = 0, o = 0; j < n; ++j) {
      acts[j] = j == agent ? out[cfg.dev] : profile[j]->output(cfg.others[o++]);
    }
    const int prof = a.profile_index(acts);
    trail.push_back(cfg);
    trail_profile.push_back(prof);
    Config nxt{a.transition(cfg.state, prof), cfg.others, -1, tax ? tax->next(cfg.tax, prof) : 0};
    for (int j = 0, o = 0; j < n; ++j) {
      if (j == agent) continue;
      nxt.others[o] = profile[j]->next(cfg.others[o], prof);
      ++o;
    }
    const std::size_t cell = static_cast<std::size_t>(cfg.dev * letters + prof);
    if (next[cell] >= 0) {
      nxt.dev = next[cell];
      walk(nxt);
    } else {
      const int used = static_cast<int>(out.size());
      for (int t = 0; t < used; ++t) {
        next[cell] = t;
        nxt.dev = t;
        walk(nxt);
      }
      if (used < max_states) {
        next[cell] = used;
        nxt.dev = used;
        next.resize(next.size() + static_cast<std::size_t>(letters), -1);
        for (int act = 0; act < a.num_actions(agent); ++act) {
          out.push_back(act);
          walk(nxt);
          out.pop_back();
        }
        next.resize(next.size() - static_cast<std::size_t>(letters));
      }
      next[cell] = -1;
    }
    trail.pop_back();
    trail_profile.pop_back();
  };

  Config start{a.initial(), {}, 0, 0};
  for (int j = 0; j < n; ++j) {
    if (j != agent) start.others.push_back(0);
  }
  next.assign(static_cast<std::size_t>(letters), -1);
  for (int act = 0; act < a.num_actions(agent); ++act) {
    out.assign(1, act);
    walk(start);
  }
  return result;
}

}  // namespace oracle
}  // namespace testsupport
