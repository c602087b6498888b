#include "taxgames/arena.hpp"

#include <stdexcept>

namespace taxgames {

Arena::Arena(Vocabulary vocabulary, std::vector<std::string> agent_names, std::vector<std::vector<std::string>> actions,
             std::vector<std::string> state_names, std::vector<LabelSet> labels, int initial)
    : vocabulary_(std::move(vocabulary)),
      agent_names_(std::move(agent_names)),
      actions_(std::move(actions)),
      state_names_(std::move(state_names)),
      labels_(std::move(labels)),
      initial_(initial) {
  if (agent_names_.empty()) throw std::invalid_argument("arena needs at least one agent");
  if (actions_.size() != agent_names_.size()) throw std::invalid_argument("one action list per agent required");
  if (state_names_.empty()) throw std::invalid_argument("arena needs at least one state");
  if (labels_.size() != state_names_.size()) throw std::invalid_argument("one label set per state required");
  if (initial_ < 0 || initial_ >= num_states()) throw std::invalid_argument("initial state out of range");
  stride_.assign(actions_.size(), 1);
  long long total = 1;
  for (int i = num_agents() - 1; i >= 0; --i) {
    if (actions_[i].empty()) throw std::invalid_argument("agent " + agent_names_[i] + " has no actions");
    stride_[i] = static_cast<int>(total);
    total *= static_cast<long long>(actions_[i].size());
    if (total > (1 << 24)) throw std::invalid_argument("too many action profiles");
  }
  num_profiles_ = static_cast<int>(total);
  const std::size_t entries = static_cast<std::size_t>(num_states()) * static_cast<std::size_t>(num_profiles_);
  next_.assign(entries, -1);
  cost_.assign(entries, CostVector{});
}

std::optional<int> Arena::state_index(const std::string& name) const {
  for (int s = 0; s < num_states(); ++s) {
    if (state_names_[s] == name) return s;
  }
  return std::nullopt;
}

std::optional<int> Arena::agent_index(const std::string& name) const {
  for (int i = 0; i < num_agents(); ++i) {
    if (agent_names_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<int> Arena::action_index(int agent, const std::string& name) const {
  for (int a = 0; a < num_actions(agent); ++a) {
    if (actions_[agent][a] == name) return a;
  }
  return std::nullopt;
}

int Arena::profile_index(const std::vector<int>& actions) const {
  if (static_cast<int>(actions.size()) != num_agents()) throw std::invalid_argument("profile arity mismatch");
  int p = 0;
  for (int i = 0; i < num_agents(); ++i) {
    if (actions[i] < 0 || actions[i] >= num_actions(i)) throw std::invalid_argument("action out of range");
    p += actions[i] * stride_[i];
  }
  return p;
}

std::vector<int> Arena::decode_profile(int profile) const {
  std::vector<int> out(static_cast<std::size_t>(num_agents()));
  for (int i = 0; i < num_agents(); ++i) out[i] = action_of(profile, i);
  return out;
}

std::string Arena::profile_name(int profile) const {
  std::string s = "(";
  for (int i = 0; i < num_agents(); ++i) {
    if (i) s += ",";
    s += actions_[i][action_of(profile, i)];
  }
  return s + ")";
}

std::vector<std::string> validate(const Game& game) {
  std::vector<std::string> out;
  const Arena& a = game.arena;
  const int n = a.num_agents();
  for (int s = 0; s < a.num_states(); ++s) {
    if (a.label(s) & ~a.vocabulary().all()) {
      out.push_back("state " + a.state_name(s) + " carries a label outside the vocabulary");
    }
    for (int p = 0; p < a.num_profiles(); ++p) {
      const std::string where = "(" + a.state_name(s) + ", " + a.profile_name(p) + ")";
      const int t = a.transition(s, p);
      if (t < 0 || t >= a.num_states()) out.push_back("missing transition for " + where);
      const CostVector& c = a.cost(s, p);
      if (static_cast<int>(c.size()) != n) {
        out.push_back("missing cost for " + where);
        continue;
      }
      for (int i = 0; i < n; ++i) {
        if (c[i] < 0) out.push_back("negative cost " + to_string(c[i]) + " for agent " + a.agent_name(i) + " at " + where);
      }
    }
  }
  if (static_cast<int>(game.goals.size()) != n) {
    out.push_back("expected " + std::to_string(n) + " goals, found " + std::to_string(game.goals.size()));
  }
  for (std::size_t i = 0; i < game.goals.size(); ++i) {
    for (int v : ltl::variables(game.goals[i])) {
      if (v >= static_cast<int>(a.vocabulary().size())) {
        out.push_back("goal of agent " + std::to_string(i) + " uses a variable outside the vocabulary");
        break;
      }
    }
  }
  return out;
}

void require_valid(const Game& game) {
  auto diagnostics = validate(game);
  if (diagnostics.empty()) return;
  std::string msg = "invalid game:";
  for (const auto& d : diagnostics) msg += "\n  " + d;
  throw std::invalid_argument(msg);
}

Rational max_cost(const Game& game, int agent) {
  const Arena& a = game.arena;
  Rational best = 0;
  for (int s = 0; s < a.num_states(); ++s) {
    for (int p = 0; p < a.num_profiles(); ++p) {
      const CostVector& c = a.cost(s, p);
      if (static_cast<int>(c.size()) > agent && c[agent] > best) best = c[agent];
    }
  }
  return best;
}

Game zero_cost_game(const Game& game) {
  Game out = game;
  const CostVector zero = zero_vector(static_cast<std::size_t>(game.arena.num_agents()));
  for (int s = 0; s < out.arena.num_states(); ++s) {
    for (int p = 0; p < out.arena.num_profiles(); ++p) out.arena.set_cost(s, p, zero);
  }
  return out;
}

}  // namespace taxgames
