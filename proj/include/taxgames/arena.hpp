#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taxgames/ltl.hpp"
#include "taxgames/rational.hpp"

namespace taxgames {

/// Concurrent game arena. Action profiles are encoded as a mixed-radix index
/// with agent 0 as the most significant digit, so for two agents with actions
/// {a,b} and {c,d} the profiles (a,c) (a,d) (b,c) (b,d) are 0..3.
class Arena {
 public:
  Arena() = default;
  Arena(Vocabulary vocabulary, std::vector<std::string> agent_names, std::vector<std::vector<std::string>> actions,
        std::vector<std::string> state_names, std::vector<LabelSet> labels, int initial);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  int num_agents() const { return static_cast<int>(agent_names_.size()); }
  int num_states() const { return static_cast<int>(state_names_.size()); }
  int num_profiles() const { return num_profiles_; }
  int num_actions(int agent) const { return static_cast<int>(actions_[agent].size()); }

  const std::string& agent_name(int agent) const { return agent_names_[agent]; }
  const std::string& action_name(int agent, int action) const { return actions_[agent][action]; }
  const std::vector<std::string>& actions(int agent) const { return actions_[agent]; }
  const std::string& state_name(int state) const { return state_names_[state]; }
  std::optional<int> state_index(const std::string& name) const;
  std::optional<int> agent_index(const std::string& name) const;
  std::optional<int> action_index(int agent, const std::string& name) const;

  LabelSet label(int state) const { return labels_[state]; }
  int initial() const { return initial_; }

  int profile_index(const std::vector<int>& actions) const;
  std::vector<int> decode_profile(int profile) const;
  int action_of(int profile, int agent) const { return (profile / stride_[agent]) % num_actions(agent); }
  /// "(a,d)" style rendering.
  std::string profile_name(int profile) const;

  /// Successor, or -1 when the entry has not been set.
  int transition(int state, int profile) const { return next_[index(state, profile)]; }
  /// Per-agent cost; empty when the entry has not been set.
  const CostVector& cost(int state, int profile) const { return cost_[index(state, profile)]; }

  void set_transition(int state, int profile, int target) { next_[index(state, profile)] = target; }
  void set_cost(int state, int profile, CostVector cost) { cost_[index(state, profile)] = std::move(cost); }
  void set_label(int state, LabelSet labels) { labels_[state] = labels; }

 private:
  std::size_t index(int state, int profile) const {
    return static_cast<std::size_t>(state) * static_cast<std::size_t>(num_profiles_) + static_cast<std::size_t>(profile);
  }

  Vocabulary vocabulary_;
  std::vector<std::string> agent_names_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::string> state_names_;
  std::vector<LabelSet> labels_;
  int initial_ = 0;
  int num_profiles_ = 0;
  std::vector<int> stride_;
  std::vector<int> next_;
  std::vector<CostVector> cost_;
};

struct Game {
  Arena arena;
  std::vector<ltl::Formula> goals;
};

/// One human-readable message per violated invariant; empty when the game is
/// well formed.
std::vector<std::string> validate(const Game& game);

/// Throws std::invalid_argument listing the diagnostics if validate fails.
void require_valid(const Game& game);

/// Largest cost the agent can incur in a single step.
Rational max_cost(const Game& game, int agent);

/// Same game with every cost set to zero.
Game zero_cost_game(const Game& game);

}  // namespace taxgames
