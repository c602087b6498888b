#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "taxgames/ltl.hpp"

namespace taxgames {

/// Thrown when a construction would exceed its configured size cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nondeterministic Buchi automaton over label sets. Each edge carries a cube
/// guard: a label L matches when (L & care) == value.
class BuchiAutomaton {
 public:
  struct Edge {
    LabelSet care = 0;
    LabelSet value = 0;
    int target = 0;
  };

  BuchiAutomaton() = default;
  BuchiAutomaton(std::size_t alphabet_bits, std::vector<std::vector<Edge>> edges, std::vector<int> initial,
                 std::vector<bool> accepting);

  std::size_t num_states() const { return edges_.size(); }
  std::size_t alphabet_bits() const { return alphabet_bits_; }
  const std::vector<int>& initial() const { return initial_; }
  bool accepting(int state) const { return accepting_[static_cast<std::size_t>(state)]; }
  const std::vector<Edge>& edges(int state) const { return edges_[static_cast<std::size_t>(state)]; }

  /// Targets of the edges of `state` whose guard matches `label`.
  void successors(int state, LabelSet label, std::vector<int>& out) const;

  /// True when every state has a matching edge for every label.
  bool is_complete() const;

 private:
  std::size_t alphabet_bits_ = 0;
  std::vector<std::vector<Edge>> edges_;
  std::vector<int> initial_;
  std::vector<bool> accepting_;
};

struct BuchiOptions {
  std::size_t max_states = std::size_t{1} << 20;
  std::size_t alphabet_bits = kMaxVariables;
};

/// Tableau construction: states are (atom, degeneralisation counter) pairs
/// where an atom is a locally consistent valuation of the elementary
/// subformulas. Only states reachable from an initial state are built; a
/// rejecting sink completes the transition relation.
BuchiAutomaton to_buchi(const ltl::Formula& f, const BuchiOptions& options = {});

/// Membership of prefix . cycle^omega via the product with the folded word.
/// Throws std::invalid_argument if the word uses letters outside the alphabet.
bool buchi_accepts_lasso(const BuchiAutomaton& automaton, const ltl::LassoWord& word);

}  // namespace taxgames
