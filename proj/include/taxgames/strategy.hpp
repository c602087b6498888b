#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "taxgames/arena.hpp"

namespace taxgames {

/// Deterministic Moore machine over action-profile indices. State 0 is the
/// initial state.
class StrategyMachine {
 public:
  StrategyMachine() = default;
  /// next has num_states * num_letters entries, row-major by state.
  StrategyMachine(int num_letters, std::vector<int> next, std::vector<int> output);

  static StrategyMachine constant(int action, int num_letters);

  int num_states() const { return static_cast<int>(output_.size()); }
  int num_letters() const { return num_letters_; }
  int next(int state, int letter) const { return next_[static_cast<std::size_t>(state * num_letters_ + letter)]; }
  int output(int state) const { return output_[static_cast<std::size_t>(state)]; }
  const std::vector<int>& next_table() const { return next_; }
  const std::vector<int>& outputs() const { return output_; }

  /// Reachable part renumbered in breadth-first order of first use.
  StrategyMachine canonical() const;

  bool operator==(const StrategyMachine&) const = default;
  bool operator<(const StrategyMachine& other) const;

 private:
  int num_letters_ = 0;
  std::vector<int> next_;
  std::vector<int> output_;
};

using MachinePtr = std::shared_ptr<const StrategyMachine>;
using Profile = std::vector<MachinePtr>;

MachinePtr make_machine(StrategyMachine m);

/// Throws std::invalid_argument unless the profile fits the arena.
void check_profile(const Arena& arena, const Profile& profile);

struct Step {
  int state = 0;
  int profile = 0;
  bool operator==(const Step&) const = default;
  bool operator<(const Step& o) const { return state != o.state ? state < o.state : profile < o.profile; }
};

/// prefix . cycle^omega over (state, action profile) steps, always kept in
/// normal form: the cycle has minimal period and the prefix is as short as
/// possible. Two runs are equal as infinite words iff their normal forms are
/// equal.
struct LassoRun {
  std::vector<Step> prefix;
  std::vector<Step> cycle;

  std::size_t length() const { return prefix.size() + cycle.size(); }
  /// Folded successor position.
  std::size_t successor(std::size_t pos) const { return pos + 1 < length() ? pos + 1 : prefix.size(); }
  const Step& position(std::size_t pos) const {
    return pos < prefix.size() ? prefix[pos] : cycle[pos - prefix.size()];
  }

  bool operator==(const LassoRun&) const = default;
  bool operator<(const LassoRun& other) const;
};

/// Brings an arbitrary prefix/cycle split into normal form.
LassoRun normalize(LassoRun run);

LassoRun generate_run(const Arena& arena, const Profile& profile);

/// Step k of the infinite run.
Step run_at(const LassoRun& run, std::size_t k);

/// Per-step cost of the run's step k in the arena.
const CostVector& step_cost(const Arena& arena, const LassoRun& run, std::size_t k);

/// Label word L(s(rho,0)) L(s(rho,1)) ...
ltl::LassoWord label_word(const Arena& arena, const LassoRun& run);

bool distinguishable(const Arena& arena, const Profile& a, const Profile& b);

/// All machines with at most `bound` states for an agent, up to renumbering:
/// transition tables are filled state by state, letter by letter, and each
/// entry is an already numbered state or the next fresh one, so every state is
/// reachable and numbered in breadth-first order. Outputs range over all
/// assignments. Sorted by state count, then table, then outputs.
std::vector<MachinePtr> enumerate_machines(int num_letters, int num_actions, int bound,
                                           std::size_t cap = 10'000'000);

/// Bounded strategy universe: per-agent machine lists and their cartesian
/// product, indexed in mixed radix with agent 0 most significant.
class ProfileUniverse {
 public:
  ProfileUniverse(const Arena& arena, int bound, std::size_t cap = 10'000'000);

  std::uint64_t size() const { return size_; }
  int num_agents() const { return static_cast<int>(machines_.size()); }
  const std::vector<MachinePtr>& machines(int agent) const { return machines_[agent]; }

  Profile at(std::uint64_t index) const;
  /// Per-agent machine indices of the profile at `index`.
  std::vector<std::size_t> coordinates(std::uint64_t index) const;
  /// Index of the profile with agent `agent` removed, in mixed radix over the
  /// remaining agents.
  std::uint64_t others_index(std::uint64_t index, int agent) const;
  std::uint64_t others_count(int agent) const { return size_ / machines_[agent].size(); }

 private:
  std::vector<std::vector<MachinePtr>> machines_;
  std::uint64_t size_ = 1;
};

/// Lazily walks the universe in index order.
class ProfileStream {
 public:
  explicit ProfileStream(const ProfileUniverse& universe) : universe_(&universe) {}
  bool next(Profile& out);
  std::uint64_t index() const { return index_ - 1; }

 private:
  const ProfileUniverse* universe_;
  std::uint64_t index_ = 0;
};

}  // namespace taxgames
