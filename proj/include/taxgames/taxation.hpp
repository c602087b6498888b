#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "taxgames/arena.hpp"
#include "taxgames/strategy.hpp"

namespace taxgames {

/// Sparse tax table; unlisted (state, profile) pairs are taxed zero.
class StaticTax {
 public:
  StaticTax() = default;
  explicit StaticTax(int num_agents) : num_agents_(num_agents), zero_(zero_vector(static_cast<std::size_t>(num_agents))) {}

  int num_agents() const { return num_agents_; }
  const CostVector& at(int state, int profile) const;
  /// Stores the entry; all-zero vectors are dropped so equal taxes compare equal.
  void set(int state, int profile, CostVector tax);
  const std::map<std::pair<int, int>, CostVector>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  StaticTax& operator+=(const StaticTax& other);
  bool operator==(const StaticTax&) const = default;

 private:
  int num_agents_ = 0;
  CostVector zero_;
  std::map<std::pair<int, int>, CostVector> entries_;
};

StaticTax operator+(StaticTax a, const StaticTax& b);

/// Moore machine over action-profile indices whose states emit static taxes.
/// State 0 is initial.
class DynamicTax {
 public:
  DynamicTax() = default;
  DynamicTax(int num_letters, std::vector<int> next, std::vector<StaticTax> outputs);

  int num_states() const { return static_cast<int>(outputs_.size()); }
  int num_letters() const { return num_letters_; }
  int next(int state, int letter) const { return next_[static_cast<std::size_t>(state * num_letters_ + letter)]; }
  const StaticTax& output(int state) const { return outputs_[static_cast<std::size_t>(state)]; }
  const std::vector<int>& next_table() const { return next_; }
  const std::vector<StaticTax>& outputs() const { return outputs_; }

  bool operator==(const DynamicTax&) const = default;

 private:
  int num_letters_ = 0;
  std::vector<int> next_;
  std::vector<StaticTax> outputs_;
};

/// Throws std::invalid_argument when a tax does not fit the arena or is negative.
void check_tax(const Arena& arena, const StaticTax& tax);
void check_tax(const Arena& arena, const DynamicTax& tax);

Game apply_static(const Game& game, const StaticTax& tax);

DynamicTax lift_static(const StaticTax& tax, int num_letters);

/// tau_i(s, alpha) = level - C_i(s, alpha) everywhere.
StaticTax uniform_levelling_tax(const Game& game, const Rational& level);

/// Adds tau to every output of T.
DynamicTax compose(const DynamicTax& tax, const StaticTax& tau);

/// Per-step tax vectors t(rho,T)(v)(s(rho,v), alpha(rho,v)) as a lasso, with
/// the tax-machine state in force at each step.
struct TaxTrace {
  std::vector<CostVector> prefix;
  std::vector<CostVector> cycle;
  std::vector<int> prefix_states;
  std::vector<int> cycle_states;
};

TaxTrace tax_sequence(const LassoRun& run, const DynamicTax& tax, int num_agents);

/// Exact limit-average of C_i + tax_i along the run: the mean over one period
/// of the joint (run position, tax state) cycle.
Rational taxed_cost(const Arena& arena, const LassoRun& run, const DynamicTax* tax, int agent);

/// A game with an optional dynamic tax.
class TaxedGameView {
 public:
  TaxedGameView(const Game& game, const DynamicTax* tax) : game_(&game), tax_(tax) {}

  const Game& game() const { return *game_; }
  const DynamicTax* tax() const { return tax_; }

  /// Base cost plus the tax emitted in tax state q.
  Rational step_cost(int tax_state, int state, int profile, int agent) const;
  /// Largest per-step taxed cost of the agent over all tax states.
  Rational max_step_cost(int agent) const;

 private:
  const Game* game_;
  const DynamicTax* tax_;
};

}  // namespace taxgames
