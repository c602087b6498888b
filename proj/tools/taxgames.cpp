#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "taxgames/documents.hpp"
#include "taxgames/report.hpp"

using namespace taxgames;

namespace {

enum Exit { kOk = 0, kInput = 2, kNo = 3, kCap = 4, kWitness = 5 };

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

int exit_for(Answer a) {
  switch (a) {
    case Answer::Yes: return kOk;
    case Answer::NoWithinBound: return kNo;
    case Answer::Unknown: return kCap;
  }
  return kCap;
}

ltl::Formula parse_objective(const std::string& text, const Game& game) {
  try {
    return ltl::parse(text, game.arena.vocabulary());
  } catch (const ltl::ParseError& e) {
    throw DocumentError(std::string("objective: ") + e.what(), 0, 0);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Taxation schemes for concurrent games with LTL goals and limit-average costs"};
  app.require_subcommand(1);

  std::string game_path, profile_path, tax_path, out_path, objective, spec_path, verdict_path, mode;
  int bound = 1;
  std::size_t cap_profiles = 10'000'000;
  std::size_t cap_states = std::size_t{1} << 20;

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run a profile and report goals and costs");
  evaluate_cmd->add_option("game", game_path, "Game file")->required();
  evaluate_cmd->add_option("profile", profile_path, "Profile file")->required();
  evaluate_cmd->add_option("--tax", tax_path, "Tax file (static or dynamic)");
  evaluate_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* check_cmd = app.add_subcommand("check", "Equilibria and implementation problems within a memory bound");
  check_cmd->add_option("mode", mode, "ne, enash or anash")->required()->check(CLI::IsMember({"ne", "enash", "anash"}));
  check_cmd->add_option("game", game_path, "Game file")->required();
  check_cmd->add_option("--bound", bound, "Strategy memory bound")->check(CLI::PositiveNumber);
  check_cmd->add_option("--objective", objective, "LTL objective (filter for ne)");
  check_cmd->add_option("--tax", tax_path, "Tax file applied for ne");
  check_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  check_cmd->add_option("--cap-profiles", cap_profiles, "Maximum strategy universe size");
  check_cmd->add_option("--cap-states", cap_states, "Maximum automaton or machine states");

  auto* grid_cmd = app.add_subcommand("gridworld", "Generate a grid-world game");
  grid_cmd->add_option("spec", spec_path, "Grid-world spec file")->required();
  grid_cmd->add_option("--out", out_path, "Write the game here instead of stdout");
  grid_cmd->add_option("--cap-states", cap_states, "Maximum number of game states");

  auto* verify_cmd = app.add_subcommand("verify", "Recheck the witness of a verdict");
  verify_cmd->add_option("verdict", verdict_path, "Verdict file")->required();
  verify_cmd->add_option("game", game_path, "Game file")->required();
  verify_cmd->add_option("--cap-profiles", cap_profiles, "Maximum strategy universe size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    ImplementationOptions options;
    options.cap_profiles = cap_profiles;
    options.cap_states = cap_states;

    if (*evaluate_cmd) {
      const Game game = load_game(read_file(game_path));
      const Profile profile = load_profile(read_file(profile_path), game.arena);
      std::optional<DynamicTax> tax;
      if (!tax_path.empty()) tax = load_tax(read_file(tax_path), game.arena).machine;
      emit(format_run_report(game, make_run_report(game, profile, tax ? &*tax : nullptr)), out_path);
      return kOk;
    }

    if (*grid_cmd) {
      GridSpec spec = load_grid_spec(read_file(spec_path));
      spec.max_states = cap_states;
      emit(save_game(grid_world_game(spec)), out_path);
      return kOk;
    }

    if (*check_cmd) {
      const Game game = load_game(read_file(game_path));
      if (mode == "ne") {
        std::optional<ltl::Formula> filter;
        if (!objective.empty()) filter = parse_objective(objective, game);
        std::optional<DynamicTax> tax;
        if (!tax_path.empty()) tax = load_tax(read_file(tax_path), game.arena).machine;
        const DynamicTax* t = tax ? &*tax : nullptr;
        EquilibriumSolver solver(game, t, BuchiOptions{cap_states, kMaxVariables});
        ProfileUniverse universe(game.arena, bound, cap_profiles);
        std::vector<Profile> found;
        for (auto k : find_ne_indices(solver, universe, filter, SearchOptions{cap_profiles, 0, 0})) {
          found.push_back(universe.at(k));
        }
        emit(format_equilibria(game, found, bound, universe.size(), filter ? filter->to_string() : "", t), out_path);
        return found.empty() ? kNo : kOk;
      }
      if (objective.empty()) throw DocumentError("--objective is required for " + mode, 0, 0);
      const ltl::Formula goal = parse_objective(objective, game);
      const ImplementationVerdict v = mode == "enash" ? e_nash_implement(game, goal, bound, options)
                                                      : a_nash_implement(game, goal, bound, options);
      emit(save_verdict(v, game.arena), out_path);
      if (v.answer == Answer::Yes) {
        if (auto failure = verify_verdict(game, v, goal, options)) {
          std::cerr << "witness failure: " << *failure << "\n";
          return kWitness;
        }
      } else {
        for (const auto& d : v.diagnostics) std::cerr << d << "\n";
      }
      return exit_for(v.answer);
    }

    if (*verify_cmd) {
      const Game game = load_game(read_file(game_path));
      const ImplementationVerdict v = load_verdict(read_file(verdict_path), game.arena);
      if (v.answer != Answer::Yes || !v.witness_tax || !v.witness_profile) {
        std::cerr << "verdict carries no witness\n";
        return kInput;
      }
      const ltl::Formula goal = parse_objective(v.objective, game);
      if (auto failure = verify_verdict(game, v, goal, options)) {
        std::cerr << "witness failure: " << *failure << "\n";
        return kWitness;
      }
      std::cout << "witness verified\n";
      return kOk;
    }
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kCap;
  } catch (const DocumentError& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
