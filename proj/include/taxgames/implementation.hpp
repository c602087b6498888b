#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taxgames/deviation.hpp"
#include "taxgames/equilibrium.hpp"
#include "taxgames/taxation.hpp"

namespace taxgames {

enum class Answer { Yes, NoWithinBound, Unknown };

std::string answer_name(Answer a);

struct ImplementationOptions {
  std::size_t cap_profiles = 10'000'000;
  std::size_t cap_states = std::size_t{1} << 20;
  /// Backtracking nodes explored by check_eliminable before giving up.
  std::size_t max_search_nodes = 1'000'000;
  int threads = 0;
};

struct ImplementationVerdict {
  std::string problem;  // "enash" or "anash"
  Answer answer = Answer::NoWithinBound;
  int bound = 1;
  std::string objective;
  std::uint64_t universe_size = 0;
  std::vector<std::string> diagnostics;
  std::optional<DynamicTax> witness_tax;
  std::optional<Profile> witness_profile;
};

struct EliminationResult {
  Answer answer = Answer::NoWithinBound;
  std::optional<DeviationGraph> graph;
  std::vector<std::string> diagnostics;
  std::size_t search_nodes = 0;
};

/// Looks for a deviation graph over the bounded universe in which every
/// profile of X has an outgoing initial deviation and no agent has an
/// observed deviation cycle. The returned graph is the one induced by the
/// synthesized tax: all initial deviations among its nodes that become strict
/// improvements.
EliminationResult check_eliminable(const Game& game, const std::vector<Profile>& X, int memory_bound,
                                   const ImplementationOptions& options = {});

/// Surcharge of agent i on run class r: d_i(r) * (c_i* + 1).
std::vector<std::vector<Rational>> class_surcharges(const Game& game, const DeviationGraph& graph);

/// Tax machine that follows the action profiles of the graph's runs until a
/// single run remains consistent, then charges that run's surcharge on each
/// of its steps. Observations matching no run lead to an untaxed sink.
DynamicTax synthesize_eliminating_tax(const Game& game, const DeviationGraph& graph,
                                      std::size_t max_states = std::size_t{1} << 20);

ImplementationVerdict e_nash_implement(const Game& game, const ltl::Formula& objective, int memory_bound,
                                       const ImplementationOptions& options = {});

ImplementationVerdict a_nash_implement(const Game& game, const ltl::Formula& objective, int memory_bound,
                                       const ImplementationOptions& options = {});

struct StaticTaxFinding {
  bool found = false;            // a violating equilibrium exists
  int bound = 0;                 // bound at which it was found
  Profile profile;
  LassoRun run;
  bool prefix_violation = false; // objective fails on the run but holds on cycle^omega
};

struct StaticInsufficiencyReport {
  std::vector<StaticTaxFinding> findings;  // one per grid tax
  bool every_tax_leaves_violation = false;
  std::vector<std::string> notes;
};

/// For each tax, searches bounds 1..memory_bound for an equilibrium of the
/// taxed game violating the objective.
StaticInsufficiencyReport static_insufficiency_check(const Game& game, const ltl::Formula& objective,
                                                     int memory_bound, const std::vector<StaticTax>& tax_grid,
                                                     const ImplementationOptions& options = {});

/// Rechecks a verdict's witness from scratch. Returns the first failing
/// property, or nullopt if everything holds.
std::optional<std::string> verify_verdict(const Game& game, const ImplementationVerdict& verdict,
                                          const ltl::Formula& objective, const ImplementationOptions& options = {});

}  // namespace taxgames
