#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taxgames/equilibrium.hpp"
#include "taxgames/implementation.hpp"

namespace taxgames {

struct RunReport {
  LassoRun run;
  std::vector<bool> winners;
  CostVector untaxed;
  CostVector taxed;
  std::optional<TaxTrace> trace;
};

RunReport make_run_report(const Game& game, const Profile& profile, const DynamicTax* tax);

/// YAML rendering; rationals appear exactly and as 6-digit decimals.
std::string format_run_report(const Game& game, const RunReport& report);

/// Listing for `check ne`.
std::string format_equilibria(const Game& game, const std::vector<Profile>& equilibria, int bound,
                              std::uint64_t universe_size, const std::string& filter, const DynamicTax* tax);

std::string format_static_report(const Game& game, const StaticInsufficiencyReport& report);

}  // namespace taxgames
