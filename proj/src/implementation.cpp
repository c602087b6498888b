#include "taxgames/implementation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace taxgames {

std::string answer_name(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::NoWithinBound: return "no-within-bound";
    case Answer::Unknown: return "unknown-at-bound";
  }
  return "unknown-at-bound";
}

namespace {

Rational max_max_cost(const Game& game) {
  Rational level = 0;
  for (int i = 0; i < game.arena.num_agents(); ++i) level = std::max(level, max_cost(game, i));
  return level;
}

// Subgraph of `full` keeping the given nodes (by old id) and edges.
DeviationGraph subgraph(const DeviationGraph& full, const std::vector<int>& keep, const std::vector<DeviationEdge>& edges) {
  DeviationGraph g;
  std::map<int, int> remap;
  for (int k : keep) {
    if (remap.count(k)) continue;
    remap[k] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(full.nodes[k]);
    g.runs.push_back(full.runs[k]);
    g.winners.push_back(full.winners[k]);
    g.run_class.push_back(-1);
  }
  for (const auto& e : edges) g.edges.push_back({remap.at(e.source), remap.at(e.target), e.agent});
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  assign_run_classes(g);
  return g;
}

LexValue value_under(const Game& game, const LassoRun& run, bool winner, const DynamicTax& tax, int agent) {
  return {winner, taxed_cost(game.arena, run, &tax, agent)};
}

}  // namespace

std::vector<std::vector<Rational>> class_surcharges(const Game& game, const DeviationGraph& graph) {
  const int n = game.arena.num_agents();
  const ObservedPathIndex idx = observed_path_index(graph, n);
  std::vector<std::vector<Rational>> out(static_cast<std::size_t>(graph.num_classes()),
                                         std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int c = 0; c < graph.num_classes(); ++c) {
    for (int i = 0; i < n; ++i) out[c][i] = Rational(idx.from[c][i]) * (max_cost(game, i) + 1);
  }
  return out;
}

DynamicTax synthesize_eliminating_tax(const Game& game, const DeviationGraph& graph, std::size_t max_states) {
  const Arena& a = game.arena;
  const int n = a.num_agents();
  const int letters = a.num_profiles();
  if (graph.edges.empty()) {
    return lift_static(StaticTax(n), letters);
  }
  const auto surcharge = class_surcharges(game, graph);

  using Tracker = std::vector<std::pair<int, std::size_t>>;  // (class, folded position)
  std::map<Tracker, int> ids;
  std::vector<Tracker> states;
  std::vector<int> todo;
  auto state_of = [&](Tracker t) {
    auto [it, fresh] = ids.emplace(t, static_cast<int>(states.size()));
    if (fresh) {
      if (states.size() >= max_states) throw ResourceLimit("tax classifier exceeds " + std::to_string(max_states) + " states");
      states.push_back(std::move(t));
      todo.push_back(it->second);
    }
    return it->second;
  };
  Tracker start;
  for (int c = 0; c < graph.num_classes(); ++c) start.push_back({c, 0});
  state_of(start);
  std::map<int, std::vector<int>> next;
  while (!todo.empty()) {
    const int q = todo.back();
    todo.pop_back();
    std::vector<int> row(static_cast<std::size_t>(letters));
    const Tracker cur = states[q];
    for (int p = 0; p < letters; ++p) {
      Tracker t;
      for (const auto& [c, k] : cur) {
        const LassoRun& run = graph.classes[c];
        if (run.position(k).profile == p) t.push_back({c, run.successor(k)});
      }
      row[p] = state_of(std::move(t));
    }
    next[q] = std::move(row);
  }
  std::vector<int> table;
  std::vector<StaticTax> outputs;
  for (std::size_t q = 0; q < states.size(); ++q) {
    table.insert(table.end(), next[static_cast<int>(q)].begin(), next[static_cast<int>(q)].end());
    StaticTax out(n);
    if (states[q].size() == 1) {
      const auto [c, k] = states[q].front();
      const Step& step = graph.classes[c].position(k);
      out.set(step.state, step.profile, surcharge[c]);
    }
    outputs.push_back(std::move(out));
  }
  return DynamicTax(letters, std::move(table), std::move(outputs));
}

EliminationResult check_eliminable(const Game& game, const std::vector<Profile>& X, int memory_bound,
                                   const ImplementationOptions& options) {
  EliminationResult result;
  if (X.empty()) {
    result.answer = Answer::Yes;
    result.graph = DeviationGraph{};
    return result;
  }
  const DeviationGraph full = build_deviation_graph(game, X, memory_bound, options.cap_profiles);
  const int n = game.arena.num_agents();

  // X nodes come first in the full graph, in seed order (duplicates collapse).
  std::vector<int> xs;
  for (const auto& p : X) xs.push_back(*full.find(p));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::set<int> x_classes;
  for (int x : xs) x_classes.insert(full.run_class[x]);

  // One representative edge per (agent, target class); prefer leaving X's runs.
  std::vector<std::vector<DeviationEdge>> options_of(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::map<std::pair<int, int>, DeviationEdge> reps;
    for (const auto& e : full.edges) {
      if (e.source != xs[k]) continue;
      reps.emplace(std::make_pair(e.agent, full.run_class[e.target]), e);
    }
    for (const auto& [key, e] : reps) options_of[k].push_back(e);
    std::stable_sort(options_of[k].begin(), options_of[k].end(), [&](const DeviationEdge& a, const DeviationEdge& b) {
      return !x_classes.count(full.run_class[a.target]) && x_classes.count(full.run_class[b.target]);
    });
    if (options_of[k].empty()) {
      result.diagnostics.push_back("profile " + std::to_string(k) + " of the elimination set has no initial deviation");
      result.answer = Answer::NoWithinBound;
      return result;
    }
  }

  // Per-agent class graph of selected edges, for incremental cycle checks.
  std::vector<std::multiset<std::pair<int, int>>> selected(static_cast<std::size_t>(n));
  auto reaches = [&](int agent, int from, int to) {
    std::vector<int> stack{from};
    std::set<int> seen{from};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      for (auto it = selected[agent].lower_bound({v, -1}); it != selected[agent].end() && it->first == v; ++it) {
        if (seen.insert(it->second).second) stack.push_back(it->second);
      }
    }
    return false;
  };

  std::vector<DeviationEdge> chosen;
  bool exhausted = false;
  std::optional<DeviationGraph> witness;

  auto finish = [&]() -> bool {
    std::vector<int> keep = xs;
    for (const auto& e : chosen) keep.push_back(e.target);
    DeviationGraph g = subgraph(full, keep, chosen);
    // Map back to full ids to recover the induced edges.
    std::vector<int> ids;
    for (int k : keep) {
      if (std::find(ids.begin(), ids.end(), k) == ids.end()) ids.push_back(k);
    }
    const DynamicTax tax = synthesize_eliminating_tax(game, g);
    std::set<int> members(ids.begin(), ids.end());
    std::vector<DeviationEdge> induced;
    for (const auto& e : full.edges) {
      if (!members.count(e.source) || !members.count(e.target)) continue;
      const LexValue before = value_under(game, full.runs[e.source], full.winners[e.source][e.agent], tax, e.agent);
      const LexValue after = value_under(game, full.runs[e.target], full.winners[e.target][e.agent], tax, e.agent);
      if (prefers(after, before) > 0) induced.push_back(e);
    }
    for (const auto& e : chosen) {
      if (std::find(induced.begin(), induced.end(), e) == induced.end()) return false;
    }
    DeviationGraph ig = subgraph(full, ids, induced);
    if (single_agent_observed_cycle(ig)) return false;
    witness = std::move(ig);
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
    if (++result.search_nodes > options.max_search_nodes) {
      exhausted = true;
      return false;
    }
    if (k == xs.size()) return finish();
    for (const auto& e : options_of[k]) {
      const int from = full.run_class[e.source], to = full.run_class[e.target];
      if (reaches(e.agent, to, from)) continue;
      selected[e.agent].insert({from, to});
      chosen.push_back(e);
      if (search(k + 1)) return true;
      chosen.pop_back();
      selected[e.agent].erase(selected[e.agent].find({from, to}));
      if (exhausted) return false;
    }
    return false;
  };

  if (search(0)) {
    result.answer = Answer::Yes;
    result.graph = std::move(witness);
  } else if (exhausted) {
    result.answer = Answer::Unknown;
    result.diagnostics.push_back("search stopped after " + std::to_string(options.max_search_nodes) + " nodes");
  } else {
    result.answer = Answer::NoWithinBound;
    result.diagnostics.push_back("every selection of deviations contains a single-agent observed cycle");
  }
  return result;
}

ImplementationVerdict e_nash_implement(const Game& game, const ltl::Formula& objective, int memory_bound,
                                       const ImplementationOptions& options) {
  ImplementationVerdict v;
  v.problem = "enash";
  v.bound = memory_bound;
  v.objective = objective.to_string();
  const Game zero = zero_cost_game(game);
  EquilibriumSolver solver(zero, nullptr, BuchiOptions{options.cap_states, kMaxVariables});
  ProfileUniverse universe(game.arena, memory_bound, options.cap_profiles);
  v.universe_size = universe.size();
  SearchOptions so{options.cap_profiles, 1, options.threads};
  auto found = find_ne_indices(solver, universe, objective, so);
  if (found.empty()) {
    v.answer = Answer::NoWithinBound;
    v.diagnostics.push_back("no equilibrium of the cost-free game satisfies the objective within bound " +
                            std::to_string(memory_bound));
    return v;
  }
  const Profile witness = universe.at(found.front());
  const DynamicTax tax = lift_static(uniform_levelling_tax(game, max_max_cost(game)), game.arena.num_profiles());
  EquilibriumSolver taxed(game, &tax, BuchiOptions{options.cap_states, kMaxVariables});
  const Outcome out = taxed.evaluate(witness);
  if (!taxed.is_nash(witness, out) || !ltl::eval_on_lasso(objective, label_word(game.arena, out.run))) {
    v.answer = Answer::NoWithinBound;
    v.diagnostics.push_back("witness failed re-verification under the levelling tax");
    return v;
  }
  v.answer = Answer::Yes;
  v.witness_profile = witness;
  v.witness_tax = tax;
  v.diagnostics.push_back("levelling tax at " + to_string(max_max_cost(game)));
  return v;
}

ImplementationVerdict a_nash_implement(const Game& game, const ltl::Formula& objective, int memory_bound,
                                       const ImplementationOptions& options) {
  ImplementationVerdict v = e_nash_implement(game, objective, memory_bound, options);
  v.problem = "anash";
  if (v.answer != Answer::Yes) {
    v.diagnostics.push_back("objective is not E-Nash implementable within the bound");
    return v;
  }
  v.witness_tax.reset();
  v.witness_profile.reset();
  const Game zero = zero_cost_game(game);
  const auto negated = ltl::Formula::negate(objective);
  const auto X = find_ne(zero, nullptr, memory_bound, negated, SearchOptions{options.cap_profiles, 0, options.threads});
  v.diagnostics.push_back(std::to_string(X.size()) + " equilibria of the cost-free game violate the objective");
  const EliminationResult elim = check_eliminable(zero, X, memory_bound, options);
  for (const auto& d : elim.diagnostics) v.diagnostics.push_back(d);
  if (elim.answer != Answer::Yes) {
    v.answer = elim.answer;
    v.diagnostics.push_back(elim.answer == Answer::Unknown ? "eliminability undecided within the search budget"
                                                           : "violating equilibria are not eliminable within the bound");
    return v;
  }
  const DynamicTax t_gamma = synthesize_eliminating_tax(zero, *elim.graph, options.cap_states);
  const DynamicTax t_star = compose(t_gamma, uniform_levelling_tax(game, max_max_cost(game)));
  SearchOptions so{options.cap_profiles, 1, options.threads};
  EquilibriumSolver taxed(game, &t_star, BuchiOptions{options.cap_states, kMaxVariables});
  ProfileUniverse universe(game.arena, memory_bound, options.cap_profiles);
  auto bad = find_ne_indices(taxed, universe, negated, so);
  if (!bad.empty()) {
    v.answer = Answer::NoWithinBound;
    v.diagnostics.push_back("verification failed: a violating equilibrium survives the synthesized tax");
    return v;
  }
  auto good = find_ne_indices(taxed, universe, objective, so);
  if (good.empty()) {
    v.answer = Answer::NoWithinBound;
    v.diagnostics.push_back("verification failed: no equilibrium satisfies the objective under the synthesized tax");
    return v;
  }
  v.answer = Answer::Yes;
  v.witness_tax = t_star;
  v.witness_profile = universe.at(good.front());
  v.diagnostics.push_back("deviation graph with " + std::to_string(elim.graph->nodes.size()) + " profiles and " +
                          std::to_string(elim.graph->edges.size()) + " edges");
  v.diagnostics.push_back("tax machine with " + std::to_string(t_star.num_states()) + " states");
  return v;
}

StaticInsufficiencyReport static_insufficiency_check(const Game& game, const ltl::Formula& objective,
                                                     int memory_bound, const std::vector<StaticTax>& tax_grid,
                                                     const ImplementationOptions& options) {
  StaticInsufficiencyReport report;
  const auto negated = ltl::Formula::negate(objective);
  std::vector<ProfileUniverse> universes;
  for (int b = 1; b <= memory_bound; ++b) universes.emplace_back(game.arena, b, options.cap_profiles);
  report.every_tax_leaves_violation = true;
  for (const auto& tau : tax_grid) {
    const Game taxed = apply_static(game, tau);
    EquilibriumSolver solver(taxed, nullptr, BuchiOptions{options.cap_states, kMaxVariables});
    StaticTaxFinding f;
    for (int b = 1; b <= memory_bound && !f.found; ++b) {
      auto hit = find_ne_indices(solver, universes[b - 1], negated, SearchOptions{options.cap_profiles, 1, options.threads});
      if (hit.empty()) continue;
      f.found = true;
      f.bound = b;
      f.profile = universes[b - 1].at(hit.front());
      f.run = generate_run(game.arena, f.profile);
      ltl::LassoWord cycle_only{{}, label_word(game.arena, f.run).cycle};
      f.prefix_violation = ltl::eval_on_lasso(objective, cycle_only);
    }
    report.every_tax_leaves_violation = report.every_tax_leaves_violation && f.found;
    report.findings.push_back(std::move(f));
  }
  report.notes.push_back(
      "limit-average costs ignore any finite prefix, so a static tax cannot separate a run that visits a "
      "violating state finitely often from its own cycle");
  return report;
}

std::optional<std::string> verify_verdict(const Game& game, const ImplementationVerdict& verdict,
                                          const ltl::Formula& objective, const ImplementationOptions& options) {
  if (verdict.answer != Answer::Yes) return std::nullopt;
  if (!verdict.witness_tax || !verdict.witness_profile) return "witness missing";
  const DynamicTax& tax = *verdict.witness_tax;
  try {
    check_tax(game.arena, tax);
    check_profile(game.arena, *verdict.witness_profile);
  } catch (const std::exception& e) {
    return std::string("witness does not fit the game: ") + e.what();
  }
  EquilibriumSolver solver(game, &tax, BuchiOptions{options.cap_states, kMaxVariables});
  const Outcome out = solver.evaluate(*verdict.witness_profile);
  if (!ltl::eval_on_lasso(objective, label_word(game.arena, out.run))) return "witness run violates the objective";
  if (!solver.is_nash(*verdict.witness_profile, out)) return "witness profile is not a Nash equilibrium under the tax";
  if (verdict.problem == "anash") {
    ProfileUniverse universe(game.arena, verdict.bound, options.cap_profiles);
    auto bad = find_ne_indices(solver, universe, ltl::Formula::negate(objective),
                               SearchOptions{options.cap_profiles, 1, options.threads});
    if (!bad.empty()) return "an equilibrium violating the objective survives the tax";
  }
  return std::nullopt;
}

}  // namespace taxgames
