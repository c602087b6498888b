#pragma once

#include <map>
#include <string>
#include <vector>

#include "taxgames/arena.hpp"

namespace taxgames {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

/// Robots move simultaneously with up/down/left/right/stay; y grows upwards.
struct GridSpec {
  int width = 0;
  int height = 0;
  std::vector<Cell> robots;
  std::vector<Cell> apples;
  Cell basket;
  /// Per-action step cost paid by the moving robot; missing actions cost 0.
  std::map<std::string, Rational> costs;
  std::size_t max_states = std::size_t{1} << 20;
};

/// Empty when the spec is usable.
std::vector<std::string> validate(const GridSpec& spec);

/// States are all robot placements times, for every (robot, apple) pair, a
/// carried flag and a delivered flag. Variables:
///   a<i>_<j>  robot i carries apple j while standing on apple j's cell
///   b<i>      robot i stands on the basket having delivered an apple
///   c         two robots share a cell
/// Robot and apple numbers in variable names are 1-based. Every goal is G !c.
Game grid_world_game(const GridSpec& spec);

}  // namespace taxgames
