#pragma once

#include <stdexcept>
#include <string>

#include "taxgames/arena.hpp"
#include "taxgames/gridworld.hpp"
#include "taxgames/implementation.hpp"
#include "taxgames/strategy.hpp"
#include "taxgames/taxation.hpp"

namespace taxgames {

/// Malformed or invalid document; line and column are 1-based, 0 if unknown.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Every document is YAML with a top-level `kind`. Transition and tax entries
// accept "*" wildcards for states and actions; later entries override earlier
// ones. Saving always writes the fully expanded canonical form.

Game load_game(const std::string& text);
std::string save_game(const Game& game);

Profile load_profile(const std::string& text, const Arena& arena);
std::string save_profile(const Profile& profile, const Arena& arena);

struct TaxDocument {
  bool is_static = false;
  StaticTax static_tax;
  DynamicTax machine;  // the static tax lifted when is_static
};

TaxDocument load_tax(const std::string& text, const Arena& arena);
std::string save_static_tax(const StaticTax& tax, const Arena& arena);
std::string save_dynamic_tax(const DynamicTax& tax, const Arena& arena);

GridSpec load_grid_spec(const std::string& text);
std::string save_grid_spec(const GridSpec& spec);

ImplementationVerdict load_verdict(const std::string& text, const Arena& arena);
std::string save_verdict(const ImplementationVerdict& verdict, const Arena& arena);

/// Normalized rendering of any supported document, chosen by its kind.
/// Profiles, taxes and verdicts need the game they refer to.
std::string normalize_document(const std::string& text, const Game* game);

}  // namespace taxgames
