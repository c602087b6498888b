#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "taxgames/buchi.hpp"
#include "taxgames/graph.hpp"
#include "taxgames/strategy.hpp"
#include "taxgames/taxation.hpp"

namespace taxgames {

/// An agent's view of a run: goal first, then lower cost.
struct LexValue {
  bool goal_met = false;
  Rational cost;
  bool operator==(const LexValue&) const = default;
};

/// greater means `a` is strictly preferred to `b`.
std::strong_ordering prefers(const LexValue& a, const LexValue& b);

struct Outcome {
  LassoRun run;
  std::vector<bool> winners;
  CostVector costs;
  LexValue value(int agent) const { return {winners[agent], costs[agent]}; }
};

Outcome evaluate(const Game& game, const Profile& profile, const DynamicTax* tax = nullptr);

/// Product of the arena, the fixed machines of all agents but one, the tax
/// machine and the agent's goal automaton. Edge weights are the agent's taxed
/// step costs.
struct ResponseGraph {
  graph::WeightedDigraph graph;
  std::vector<bool> accepting;
  std::vector<int> initial;
};

/// Caches goal automata for one (game, tax) pair. Immutable after construction.
class EquilibriumSolver {
 public:
  EquilibriumSolver(const Game& game, const DynamicTax* tax, const BuchiOptions& options = {});

  const Game& game() const { return *game_; }
  const DynamicTax* tax() const { return tax_; }

  Outcome evaluate(const Profile& profile) const;
  ResponseGraph response_graph(const Profile& profile, int agent) const;
  /// Supremum over every deviation of `agent`, of any memory size.
  LexValue best_response(const Profile& profile, int agent) const;
  bool is_nash(const Profile& profile) const;
  bool is_nash(const Profile& profile, const Outcome& outcome) const;

 private:
  const Game* game_;
  const DynamicTax* tax_;
  std::vector<BuchiAutomaton> goals_;
};

LexValue best_response(const Game& game, const Profile& profile, int agent, const DynamicTax* tax = nullptr);
bool is_nash(const Game& game, const Profile& profile, const DynamicTax* tax = nullptr);

struct SearchOptions {
  std::size_t cap_profiles = 10'000'000;
  /// Stop after this many equilibria (0 means no limit).
  std::size_t limit = 0;
  /// Worker threads; 0 reads TAXGAMES_THREADS, defaulting to 1.
  int threads = 0;
};

/// Indices into the universe of every equilibrium passing the filter, in
/// ascending order. With a limit, the first `limit` such indices.
std::vector<std::uint64_t> find_ne_indices(const EquilibriumSolver& solver, const ProfileUniverse& universe,
                                           const std::optional<ltl::Formula>& filter, const SearchOptions& options = {});

std::vector<Profile> find_ne(const Game& game, const DynamicTax* tax, int memory_bound,
                             const std::optional<ltl::Formula>& filter, const SearchOptions& options = {});

int worker_threads(int requested);

}  // namespace taxgames
