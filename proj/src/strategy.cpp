#include "taxgames/strategy.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "taxgames/buchi.hpp"

namespace taxgames {

StrategyMachine::StrategyMachine(int num_letters, std::vector<int> next, std::vector<int> output)
    : num_letters_(num_letters), next_(std::move(next)), output_(std::move(output)) {
  if (num_letters_ < 1) throw std::invalid_argument("machine needs at least one input letter");
  if (output_.empty()) throw std::invalid_argument("machine needs at least one state");
  if (next_.size() != output_.size() * static_cast<std::size_t>(num_letters_)) {
    throw std::invalid_argument("transition table size does not match states x letters");
  }
  for (int t : next_) {
    if (t < 0 || t >= num_states()) throw std::invalid_argument("transition target out of range");
  }
}

StrategyMachine StrategyMachine::constant(int action, int num_letters) {
  return StrategyMachine(num_letters, std::vector<int>(static_cast<std::size_t>(num_letters), 0), {action});
}

StrategyMachine StrategyMachine::canonical() const {
  std::vector<int> order{0};
  std::vector<int> renumber(static_cast<std::size_t>(num_states()), -1);
  renumber[0] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int x = 0; x < num_letters_; ++x) {
      const int t = next(order[k], x);
      if (renumber[t] < 0) {
        renumber[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  }
  std::vector<int> nt, out;
  for (int q : order) {
    out.push_back(output(q));
    for (int x = 0; x < num_letters_; ++x) nt.push_back(renumber[next(q, x)]);
  }
  return StrategyMachine(num_letters_, std::move(nt), std::move(out));
}

bool StrategyMachine::operator<(const StrategyMachine& o) const {
  if (num_states() != o.num_states()) return num_states() < o.num_states();
  if (num_letters_ != o.num_letters_) return num_letters_ < o.num_letters_;
  if (next_ != o.next_) return next_ < o.next_;
  return output_ < o.output_;
}

MachinePtr make_machine(StrategyMachine m) { return std::make_shared<const StrategyMachine>(std::move(m)); }

void check_profile(const Arena& arena, const Profile& profile) {
  if (static_cast<int>(profile.size()) != arena.num_agents()) {
    throw std::invalid_argument("profile has " + std::to_string(profile.size()) + " machines for " +
                                std::to_string(arena.num_agents()) + " agents");
  }
  for (int i = 0; i < arena.num_agents(); ++i) {
    const auto& m = profile[i];
    if (!m) throw std::invalid_argument("missing machine for agent " + arena.agent_name(i));
    if (m->num_letters() != arena.num_profiles()) {
      throw std::invalid_argument("machine of agent " + arena.agent_name(i) + " reads the wrong alphabet");
    }
    for (int q = 0; q < m->num_states(); ++q) {
      if (m->output(q) < 0 || m->output(q) >= arena.num_actions(i)) {
        throw std::invalid_argument("machine of agent " + arena.agent_name(i) + " outputs an unknown action");
      }
    }
  }
}

bool LassoRun::operator<(const LassoRun& o) const {
  if (prefix != o.prefix) return prefix < o.prefix;
  return cycle < o.cycle;
}

LassoRun normalize(LassoRun run) {
  if (run.cycle.empty()) throw std::invalid_argument("lasso needs a non-empty cycle");
  const std::size_t n = run.cycle.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = run.cycle[i] == run.cycle[i - d];
    if (periodic) {
      run.cycle.resize(d);
      break;
    }
  }
  while (!run.prefix.empty() && run.prefix.back() == run.cycle.back()) {
    std::rotate(run.cycle.rbegin(), run.cycle.rbegin() + 1, run.cycle.rend());
    run.prefix.pop_back();
  }
  return run;
}

LassoRun generate_run(const Arena& arena, const Profile& profile) {
  const int n = arena.num_agents();
  const std::size_t width = static_cast<std::size_t>(n) + 1;
  std::vector<int> configs;  // flattened (state, q_1..q_n)
  std::vector<Step> steps;
  std::map<std::vector<int>, std::size_t> index;  // used once runs get long
  std::vector<int> cur(width);
  cur[0] = arena.initial();
  for (int i = 0; i < n; ++i) cur[i + 1] = 0;

  auto find = [&]() -> std::ptrdiff_t {
    const std::size_t count = steps.size();
    if (count <= 64) {
      for (std::size_t k = 0; k < count; ++k) {
        if (std::equal(cur.begin(), cur.end(), configs.begin() + static_cast<std::ptrdiff_t>(k * width))) {
          return static_cast<std::ptrdiff_t>(k);
        }
      }
      return -1;
    }
    if (index.empty()) {
      for (std::size_t k = 0; k < count; ++k) {
        index.emplace(std::vector<int>(configs.begin() + static_cast<std::ptrdiff_t>(k * width),
                                       configs.begin() + static_cast<std::ptrdiff_t>((k + 1) * width)),
                      k);
      }
    }
    auto it = index.find(cur);
    return it == index.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  };

  std::vector<int> actions(static_cast<std::size_t>(n));
  while (true) {
    const std::ptrdiff_t seen = find();
    if (seen >= 0) {
      LassoRun run;
      run.prefix.assign(steps.begin(), steps.begin() + seen);
      run.cycle.assign(steps.begin() + seen, steps.end());
      return normalize(std::move(run));
    }
    if (!index.empty()) index.emplace(cur, steps.size());
    configs.insert(configs.end(), cur.begin(), cur.end());
    for (int i = 0; i < n; ++i) actions[i] = profile[i]->output(cur[i + 1]);
    const int p = arena.profile_index(actions);
    steps.push_back({cur[0], p});
    const int t = arena.transition(cur[0], p);
    if (t < 0) throw std::invalid_argument("arena has no transition for " + arena.state_name(cur[0]));
    cur[0] = t;
    for (int i = 0; i < n; ++i) cur[i + 1] = profile[i]->next(cur[i + 1], p);
  }
}

Step run_at(const LassoRun& run, std::size_t k) {
  if (k < run.prefix.size()) return run.prefix[k];
  return run.cycle[(k - run.prefix.size()) % run.cycle.size()];
}

const CostVector& step_cost(const Arena& arena, const LassoRun& run, std::size_t k) {
  const Step s = run_at(run, k);
  return arena.cost(s.state, s.profile);
}

ltl::LassoWord label_word(const Arena& arena, const LassoRun& run) {
  ltl::LassoWord w;
  for (const auto& s : run.prefix) w.prefix.push_back(arena.label(s.state));
  for (const auto& s : run.cycle) w.cycle.push_back(arena.label(s.state));
  return w;
}

bool distinguishable(const Arena& arena, const Profile& a, const Profile& b) {
  return generate_run(arena, a) != generate_run(arena, b);
}

std::vector<MachinePtr> enumerate_machines(int num_letters, int num_actions, int bound, std::size_t cap) {
  if (bound < 1) throw std::invalid_argument("memory bound must be at least 1");
  if (num_actions < 1 || num_letters < 1) throw std::invalid_argument("empty alphabet");
  std::vector<StrategyMachine> out;
  std::vector<int> table;
  std::vector<int> outputs;

  auto emit_outputs = [&](int states) {
    outputs.assign(static_cast<std::size_t>(states), 0);
    while (true) {
      if (out.size() >= cap) throw ResourceLimit("more than " + std::to_string(cap) + " machines per agent");
      out.emplace_back(num_letters, std::vector<int>(table.begin(), table.begin() + states * num_letters), outputs);
      int k = states - 1;
      while (k >= 0 && outputs[k] == num_actions - 1) outputs[k--] = 0;
      if (k < 0) break;
      ++outputs[k];
    }
  };
  // Fill entry `pos` of the table; `highest` is the largest state number used.
  std::function<void(int, int)> fill = [&](int pos, int highest) {
    const int row = pos / num_letters;
    if (row > highest) {
      emit_outputs(highest + 1);
      return;
    }
    table.resize(static_cast<std::size_t>(pos) + 1);
    const int limit = std::min(highest + 1, bound - 1);
    for (int t = 0; t <= limit; ++t) {
      table[pos] = t;
      fill(pos + 1, std::max(highest, t));
      table.resize(static_cast<std::size_t>(pos) + 1);
    }
  };
  fill(0, 0);
  std::sort(out.begin(), out.end());
  std::vector<MachinePtr> ptrs;
  ptrs.reserve(out.size());
  for (auto& m : out) ptrs.push_back(make_machine(std::move(m)));
  return ptrs;
}

ProfileUniverse::ProfileUniverse(const Arena& arena, int bound, std::size_t cap) {
  for (int i = 0; i < arena.num_agents(); ++i) {
    machines_.push_back(enumerate_machines(arena.num_profiles(), arena.num_actions(i), bound, cap));
    const std::uint64_t count = machines_.back().size();
    if (size_ > cap / count) {
      throw ResourceLimit("strategy universe exceeds " + std::to_string(cap) + " profiles");
    }
    size_ *= count;
  }
  if (size_ > cap) throw ResourceLimit("strategy universe exceeds " + std::to_string(cap) + " profiles");
}

std::vector<std::size_t> ProfileUniverse::coordinates(std::uint64_t index) const {
  std::vector<std::size_t> c(machines_.size());
  for (int i = num_agents() - 1; i >= 0; --i) {
    c[i] = static_cast<std::size_t>(index % machines_[i].size());
    index /= machines_[i].size();
  }
  return c;
}

Profile ProfileUniverse::at(std::uint64_t index) const {
  auto c = coordinates(index);
  Profile p(machines_.size());
  for (std::size_t i = 0; i < machines_.size(); ++i) p[i] = machines_[i][c[i]];
  return p;
}

std::uint64_t ProfileUniverse::others_index(std::uint64_t index, int agent) const {
  auto c = coordinates(index);
  std::uint64_t r = 0;
  for (int i = 0; i < num_agents(); ++i) {
    if (i == agent) continue;
    r = r * machines_[i].size() + c[i];
  }
  return r;
}

bool ProfileStream::next(Profile& out) {
  if (index_ >= universe_->size()) return false;
  out = universe_->at(index_++);
  return true;
}

}  // namespace taxgames
