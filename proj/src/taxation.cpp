#include "taxgames/taxation.hpp"

#include <stdexcept>

namespace taxgames {

const CostVector& StaticTax::at(int state, int profile) const {
  auto it = entries_.find({state, profile});
  return it == entries_.end() ? zero_ : it->second;
}

void StaticTax::set(int state, int profile, CostVector tax) {
  if (static_cast<int>(tax.size()) != num_agents_) throw std::invalid_argument("tax vector has the wrong arity");
  bool zero = true;
  for (const auto& t : tax) zero = zero && t == 0;
  if (zero) {
    entries_.erase({state, profile});
  } else {
    entries_[{state, profile}] = std::move(tax);
  }
}

StaticTax& StaticTax::operator+=(const StaticTax& other) {
  if (other.num_agents_ != num_agents_) throw std::invalid_argument("agent-count mismatch between taxes");
  for (const auto& [key, v] : other.entries_) {
    CostVector sum = at(key.first, key.second);
    for (int i = 0; i < num_agents_; ++i) sum[i] += v[i];
    set(key.first, key.second, std::move(sum));
  }
  return *this;
}

StaticTax operator+(StaticTax a, const StaticTax& b) {
  a += b;
  return a;
}

DynamicTax::DynamicTax(int num_letters, std::vector<int> next, std::vector<StaticTax> outputs)
    : num_letters_(num_letters), next_(std::move(next)), outputs_(std::move(outputs)) {
  if (num_letters_ < 1) throw std::invalid_argument("tax machine needs at least one input letter");
  if (outputs_.empty()) throw std::invalid_argument("tax machine needs at least one state");
  if (next_.size() != outputs_.size() * static_cast<std::size_t>(num_letters_)) {
    throw std::invalid_argument("tax machine table size does not match states x letters");
  }
  for (int t : next_) {
    if (t < 0 || t >= num_states()) throw std::invalid_argument("tax machine transition out of range");
  }
}

void check_tax(const Arena& arena, const StaticTax& tax) {
  if (tax.num_agents() != arena.num_agents()) throw std::invalid_argument("tax has the wrong number of agents");
  for (const auto& [key, v] : tax.entries()) {
    if (key.first < 0 || key.first >= arena.num_states() || key.second < 0 || key.second >= arena.num_profiles()) {
      throw std::invalid_argument("tax entry outside the arena");
    }
    for (const auto& t : v) {
      if (t < 0) throw std::invalid_argument("negative tax at (" + arena.state_name(key.first) + ", " + arena.profile_name(key.second) + ")");
    }
  }
}

void check_tax(const Arena& arena, const DynamicTax& tax) {
  if (tax.num_letters() != arena.num_profiles()) throw std::invalid_argument("tax machine reads the wrong alphabet");
  for (const auto& out : tax.outputs()) check_tax(arena, out);
}

Game apply_static(const Game& game, const StaticTax& tax) {
  check_tax(game.arena, tax);
  Game out = game;
  for (const auto& [key, v] : tax.entries()) {
    CostVector c = out.arena.cost(key.first, key.second);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
    out.arena.set_cost(key.first, key.second, std::move(c));
  }
  return out;
}

DynamicTax lift_static(const StaticTax& tax, int num_letters) {
  return DynamicTax(num_letters, std::vector<int>(static_cast<std::size_t>(num_letters), 0), {tax});
}

StaticTax uniform_levelling_tax(const Game& game, const Rational& level) {
  const Arena& a = game.arena;
  for (int i = 0; i < a.num_agents(); ++i) {
    if (level < max_cost(game, i)) {
      throw std::invalid_argument("levelling tax " + to_string(level) + " is below the maximum cost of agent " + a.agent_name(i));
    }
  }
  StaticTax tau(a.num_agents());
  for (int s = 0; s < a.num_states(); ++s) {
    for (int p = 0; p < a.num_profiles(); ++p) {
      CostVector v(static_cast<std::size_t>(a.num_agents()));
      for (int i = 0; i < a.num_agents(); ++i) v[i] = level - a.cost(s, p)[i];
      tau.set(s, p, std::move(v));
    }
  }
  return tau;
}

DynamicTax compose(const DynamicTax& tax, const StaticTax& tau) {
  std::vector<StaticTax> outputs;
  for (const auto& out : tax.outputs()) outputs.push_back(out + tau);
  return DynamicTax(tax.num_letters(), tax.next_table(), std::move(outputs));
}

namespace {

// Joint (run position, tax state) lasso: positions and states of prefix and cycle.
struct JointLasso {
  std::vector<std::pair<std::size_t, int>> prefix, cycle;
};

JointLasso joint_lasso(const LassoRun& run, const DynamicTax& tax) {
  const std::size_t len = run.length();
  std::vector<int> seen(len * static_cast<std::size_t>(tax.num_states()), -1);
  std::vector<std::pair<std::size_t, int>> steps;
  std::size_t pos = 0;
  int q = 0;
  while (true) {
    const std::size_t key = pos * static_cast<std::size_t>(tax.num_states()) + static_cast<std::size_t>(q);
    if (seen[key] >= 0) {
      JointLasso j;
      j.prefix.assign(steps.begin(), steps.begin() + seen[key]);
      j.cycle.assign(steps.begin() + seen[key], steps.end());
      return j;
    }
    seen[key] = static_cast<int>(steps.size());
    steps.push_back({pos, q});
    q = tax.next(q, run.position(pos).profile);
    pos = run.successor(pos);
  }
}

}  // namespace

TaxTrace tax_sequence(const LassoRun& run, const DynamicTax& tax, int num_agents) {
  const JointLasso j = joint_lasso(run, tax);
  TaxTrace t;
  auto emit = [&](const auto& steps, std::vector<CostVector>& taxes, std::vector<int>& states) {
    for (const auto& [pos, q] : steps) {
      const Step& s = run.position(pos);
      const CostVector& v = tax.output(q).at(s.state, s.profile);
      taxes.push_back(v.empty() ? zero_vector(static_cast<std::size_t>(num_agents)) : v);
      states.push_back(q);
    }
  };
  emit(j.prefix, t.prefix, t.prefix_states);
  emit(j.cycle, t.cycle, t.cycle_states);
  return t;
}

Rational taxed_cost(const Arena& arena, const LassoRun& run, const DynamicTax* tax, int agent) {
  Rational total = 0;
  if (!tax) {
    for (const auto& s : run.cycle) total += arena.cost(s.state, s.profile)[agent];
    total /= static_cast<long>(run.cycle.size());
    return total;
  }
  const JointLasso j = joint_lasso(run, *tax);
  for (const auto& [pos, q] : j.cycle) {
    const Step& s = run.position(pos);
    total += arena.cost(s.state, s.profile)[agent];
    const CostVector& v = tax->output(q).at(s.state, s.profile);
    if (!v.empty()) total += v[agent];
  }
  total /= static_cast<long>(j.cycle.size());
  return total;
}

Rational TaxedGameView::step_cost(int tax_state, int state, int profile, int agent) const {
  Rational c = game_->arena.cost(state, profile)[agent];
  if (tax_) {
    const CostVector& v = tax_->output(tax_state).at(state, profile);
    if (!v.empty()) c += v[agent];
  }
  return c;
}

Rational TaxedGameView::max_step_cost(int agent) const {
  Rational best = 0;
  const Arena& a = game_->arena;
  const int states = tax_ ? tax_->num_states() : 1;
  for (int q = 0; q < states; ++q) {
    for (int s = 0; s < a.num_states(); ++s) {
      for (int p = 0; p < a.num_profiles(); ++p) {
        Rational c = step_cost(q, s, p, agent);
        if (c > best) best = c;
      }
    }
  }
  return best;
}

}  // namespace taxgames
