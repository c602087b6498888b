#include "taxgames/gridworld.hpp"

#include <stdexcept>

#include "taxgames/buchi.hpp"

namespace taxgames {

namespace {

const std::vector<std::string> kMoves = {"up", "down", "left", "right", "stay"};
const int kDx[] = {0, 0, -1, 1, 0};
const int kDy[] = {1, -1, 0, 0, 0};

bool inside(const GridSpec& g, Cell c) { return c.x >= 0 && c.y >= 0 && c.x < g.width && c.y < g.height; }

std::string cell_text(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

std::vector<std::string> validate(const GridSpec& spec) {
  std::vector<std::string> out;
  if (spec.width < 1 || spec.height < 1) out.push_back("grid dimensions must be positive");
  if (spec.robots.empty()) out.push_back("at least one robot required");
  for (std::size_t i = 0; i < spec.robots.size(); ++i) {
    if (!inside(spec, spec.robots[i])) out.push_back("robot " + std::to_string(i + 1) + " starts outside the grid at " + cell_text(spec.robots[i]));
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.robots[i] == spec.robots[j]) {
        out.push_back("robots " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " share a start cell");
      }
    }
  }
  for (std::size_t j = 0; j < spec.apples.size(); ++j) {
    if (!inside(spec, spec.apples[j])) out.push_back("apple " + std::to_string(j + 1) + " lies outside the grid at " + cell_text(spec.apples[j]));
  }
  if (!inside(spec, spec.basket)) out.push_back("basket lies outside the grid at " + cell_text(spec.basket));
  for (const auto& [action, cost] : spec.costs) {
    bool known = false;
    for (const auto& m : kMoves) known = known || m == action;
    if (!known) out.push_back("cost given for unknown action '" + action + "'");
    if (cost < 0) out.push_back("negative cost for action '" + action + "'");
  }
  return out;
}

Game grid_world_game(const GridSpec& spec) {
  auto problems = validate(spec);
  if (!problems.empty()) {
    std::string msg = "invalid grid spec:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
  const int robots = static_cast<int>(spec.robots.size());
  const int apples = static_cast<int>(spec.apples.size());
  const int cells = spec.width * spec.height;
  const int pairs = robots * apples;

  long double estimate = 1;
  for (int i = 0; i < robots; ++i) estimate *= cells;
  for (int k = 0; k < pairs; ++k) estimate *= 4;
  if (estimate > static_cast<long double>(spec.max_states)) {
    throw ResourceLimit("grid world would need more than " + std::to_string(spec.max_states) + " states");
  }
  int positions = 1;
  for (int i = 0; i < robots; ++i) positions *= cells;
  const int flag_states = 1 << (2 * pairs);
  const int num_states = positions * flag_states;

  std::vector<std::string> vars;
  for (int i = 0; i < robots; ++i) {
    for (int j = 0; j < apples; ++j) vars.push_back("a" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  }
  for (int i = 0; i < robots; ++i) vars.push_back("b" + std::to_string(i + 1));
  vars.push_back("c");
  Vocabulary vocabulary(vars);
  auto var = [&](const std::string& name) { return LabelSet{1} << *vocabulary.index_of(name); };

  // Flag bit layout: pair k = i * apples + j owns bits 2k (carried) and 2k+1 (delivered).
  auto decode = [&](int state, std::vector<Cell>& pos, int& flags) {
    flags = state % flag_states;
    int rest = state / flag_states;
    pos.assign(static_cast<std::size_t>(robots), Cell{});
    for (int i = robots - 1; i >= 0; --i) {
      const int c = rest % cells;
      rest /= cells;
      pos[i] = Cell{c % spec.width, c / spec.width};
    }
  };
  auto encode = [&](const std::vector<Cell>& pos, int flags) {
    int p = 0;
    for (int i = 0; i < robots; ++i) p = p * cells + pos[i].y * spec.width + pos[i].x;
    return p * flag_states + flags;
  };
  auto carried = [&](int flags, int i, int j) { return (flags >> (2 * (i * apples + j))) & 1; };
  auto delivered = [&](int flags, int i, int j) { return (flags >> (2 * (i * apples + j) + 1)) & 1; };

  std::vector<std::string> names(static_cast<std::size_t>(num_states));
  std::vector<LabelSet> labels(static_cast<std::size_t>(num_states), 0);
  std::vector<Cell> pos;
  int flags = 0;
  for (int s = 0; s < num_states; ++s) {
    decode(s, pos, flags);
    std::string name;
    for (int i = 0; i < robots; ++i) {
      if (i) name += "_";
      name += "r" + std::to_string(i + 1) + "x" + std::to_string(pos[i].x) + "y" + std::to_string(pos[i].y);
    }
    if (pairs > 0) {
      name += "_f";
      for (int k = 0; k < pairs; ++k) {
        name += std::to_string((flags >> (2 * k)) & 1);
        name += std::to_string((flags >> (2 * k + 1)) & 1);
      }
    }
    names[s] = name;
    LabelSet l = 0;
    for (int i = 0; i < robots; ++i) {
      bool has_delivered = false;
      for (int j = 0; j < apples; ++j) {
        if (carried(flags, i, j) && pos[i] == spec.apples[j]) l |= var("a" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
        has_delivered = has_delivered || delivered(flags, i, j);
      }
      if (has_delivered && pos[i] == spec.basket) l |= var("b" + std::to_string(i + 1));
      for (int k = 0; k < i; ++k) {
        if (pos[k] == pos[i]) l |= var("c");
      }
    }
    labels[s] = l;
  }

  std::vector<std::string> agent_names;
  std::vector<std::vector<std::string>> actions;
  for (int i = 0; i < robots; ++i) {
    agent_names.push_back("robot" + std::to_string(i + 1));
    actions.push_back(kMoves);
  }
  const int initial = encode(spec.robots, 0);
  Arena arena(vocabulary, agent_names, actions, names, labels, initial);

  std::vector<Rational> move_cost(kMoves.size(), 0);
  for (std::size_t m = 0; m < kMoves.size(); ++m) {
    if (auto it = spec.costs.find(kMoves[m]); it != spec.costs.end()) move_cost[m] = it->second;
  }

  std::vector<Cell> dest;
  for (int s = 0; s < num_states; ++s) {
    decode(s, pos, flags);
    for (int p = 0; p < arena.num_profiles(); ++p) {
      dest = pos;
      CostVector cost(static_cast<std::size_t>(robots));
      for (int i = 0; i < robots; ++i) {
        const int m = arena.action_of(p, i);
        const Cell to{pos[i].x + kDx[m], pos[i].y + kDy[m]};
        if (inside(spec, to)) dest[i] = to;
        cost[i] = move_cost[m];
      }
      // Robots trading places collide on the lower-numbered robot's target.
      for (int i = 0; i < robots; ++i) {
        for (int k = i + 1; k < robots; ++k) {
          if (!(pos[i] == pos[k]) && dest[i] == pos[k] && dest[k] == pos[i]) dest[k] = dest[i];
        }
      }
      int f = flags;
      for (int j = 0; j < apples; ++j) {
        bool present = true;
        for (int i = 0; i < robots; ++i) present = present && !carried(f, i, j) && !delivered(f, i, j);
        if (!present) continue;
        for (int i = 0; i < robots; ++i) {
          if (dest[i] == spec.apples[j]) {
            f |= 1 << (2 * (i * apples + j));
            break;
          }
        }
      }
      for (int i = 0; i < robots; ++i) {
        if (!(dest[i] == spec.basket)) continue;
        for (int j = 0; j < apples; ++j) {
          if (carried(f, i, j)) {
            f &= ~(1 << (2 * (i * apples + j)));
            f |= 1 << (2 * (i * apples + j) + 1);
          }
        }
      }
      arena.set_transition(s, p, encode(dest, f));
      arena.set_cost(s, p, std::move(cost));
    }
  }

  Game game;
  game.arena = std::move(arena);
  const auto goal = ltl::always(ltl::Formula::negate(ltl::Formula::var(*vocabulary.index_of("c"), "c")));
  game.goals.assign(static_cast<std::size_t>(robots), goal);
  return game;
}

}  // namespace taxgames
