#include "taxgames/documents.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace taxgames {

DocumentError::DocumentError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message : message),
      line_(line),
      column_(column) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("cannot open " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DocumentError("cannot write " + path, 0, 0);
  out << text;
}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw DocumentError(message, 0, 0);
  throw DocumentError(message, m.line + 1, m.column + 1);
}

YAML::Node parse_yaml(const std::string& text) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) throw DocumentError("document must be a mapping", 1, 1);
    return root;
  } catch (const YAML::Exception& e) {
    throw DocumentError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

YAML::Node child(const YAML::Node& node, const char* key) {
  if (!node.IsMap()) fail(node, "expected a mapping");
  YAML::Node c = node[key];
  if (!c) fail(node, std::string("missing field '") + key + "'");
  return c;
}

std::string scalar(const YAML::Node& node) {
  if (!node.IsScalar()) fail(node, "expected a scalar");
  return node.Scalar();
}

int integer(const YAML::Node& node) {
  const std::string s = scalar(node);
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) fail(node, "expected an integer, found '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(node, "expected an integer, found '" + s + "'");
  }
}

Rational rational(const YAML::Node& node) {
  try {
    return parse_rational(scalar(node));
  } catch (const std::invalid_argument& e) {
    fail(node, e.what());
  }
}

const YAML::Node& sequence(const YAML::Node& node) {
  if (!node.IsSequence()) fail(node, "expected a sequence");
  return node;
}

void expect_kind(const YAML::Node& root, const std::string& kind) {
  const std::string k = scalar(child(root, "kind"));
  if (k != kind) fail(root["kind"], "expected kind '" + kind + "', found '" + k + "'");
}

CostVector vector_of(const YAML::Node& node, int agents) {
  sequence(node);
  if (static_cast<int>(node.size()) != agents) fail(node, "expected " + std::to_string(agents) + " components");
  CostVector v;
  for (const auto& x : node) v.push_back(rational(x));
  return v;
}

std::vector<int> states_matching(const YAML::Node& node, const Arena& arena) {
  const std::string s = scalar(node);
  std::vector<int> out;
  if (s == "*") {
    for (int k = 0; k < arena.num_states(); ++k) out.push_back(k);
    return out;
  }
  auto k = arena.state_index(s);
  if (!k) fail(node, "unknown state '" + s + "'");
  return {*k};
}

std::vector<int> profiles_matching(const YAML::Node& node, const Arena& arena) {
  sequence(node);
  if (static_cast<int>(node.size()) != arena.num_agents()) {
    fail(node, "profile needs one action per agent");
  }
  std::vector<std::vector<int>> choices;
  for (int i = 0; i < arena.num_agents(); ++i) {
    const std::string a = scalar(node[i]);
    std::vector<int> c;
    if (a == "*") {
      for (int k = 0; k < arena.num_actions(i); ++k) c.push_back(k);
    } else {
      auto k = arena.action_index(i, a);
      if (!k) fail(node[i], "unknown action '" + a + "' for agent " + arena.agent_name(i));
      c.push_back(*k);
    }
    choices.push_back(std::move(c));
  }
  std::vector<int> out;
  std::vector<int> pick(static_cast<std::size_t>(arena.num_agents()));
  std::vector<std::size_t> idx(static_cast<std::size_t>(arena.num_agents()), 0);
  while (true) {
    for (int i = 0; i < arena.num_agents(); ++i) pick[i] = choices[i][idx[i]];
    out.push_back(arena.profile_index(pick));
    int i = arena.num_agents() - 1;
    while (i >= 0 && ++idx[i] == choices[i].size()) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

void emit_profile_actions(YAML::Emitter& out, const Arena& arena, int profile) {
  out << YAML::Flow << YAML::BeginSeq;
  for (int i = 0; i < arena.num_agents(); ++i) out << arena.action_name(i, arena.action_of(profile, i));
  out << YAML::EndSeq;
}

void emit_vector(YAML::Emitter& out, const CostVector& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const auto& x : v) out << to_string(x);
  out << YAML::EndSeq;
}

std::string finish(YAML::Emitter& out) {
  if (!out.good()) throw std::logic_error("emitter error: " + out.GetLastError());
  return std::string(out.c_str()) + "\n";
}

// Machine states are named by the document; index 0 is the initial state.
struct NamedStates {
  std::vector<std::string> names;
  int index_of(const YAML::Node& node) const {
    const std::string s = scalar(node);
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (names[k] == s) return static_cast<int>(k);
    }
    fail(node, "unknown machine state '" + s + "'");
  }
};

// Reads `states` (list of names or of {name, ...}) and moves the initial state first.
NamedStates machine_states(const YAML::Node& node, const YAML::Node& states, std::vector<YAML::Node>* entries) {
  NamedStates ns;
  std::vector<YAML::Node> items;
  for (const auto& s : sequence(states)) {
    items.push_back(s);
    ns.names.push_back(s.IsMap() ? scalar(child(s, "name")) : scalar(s));
  }
  if (ns.names.empty()) fail(states, "machine needs at least one state");
  for (std::size_t a = 0; a < ns.names.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (ns.names[a] == ns.names[b]) fail(items[a], "duplicate state '" + ns.names[a] + "'");
    }
  }
  if (YAML::Node init = node["initial"]) {
    const int k = ns.index_of(init);
    std::rotate(ns.names.begin(), ns.names.begin() + k, ns.names.begin() + k + 1);
    std::rotate(items.begin(), items.begin() + k, items.begin() + k + 1);
  }
  if (entries) *entries = items;
  return ns;
}

// Transition table with unlisted entries staying put.
std::vector<int> machine_table(const YAML::Node& node, const NamedStates& ns, const Arena& arena) {
  const int letters = arena.num_profiles();
  std::vector<int> table(ns.names.size() * static_cast<std::size_t>(letters));
  for (std::size_t q = 0; q < ns.names.size(); ++q) {
    for (int p = 0; p < letters; ++p) table[q * static_cast<std::size_t>(letters) + static_cast<std::size_t>(p)] = static_cast<int>(q);
  }
  if (YAML::Node ts = node["transitions"]) {
    for (const auto& t : sequence(ts)) {
      const YAML::Node from = child(t, "from");
      std::vector<int> sources;
      if (scalar(from) == "*") {
        for (std::size_t q = 0; q < ns.names.size(); ++q) sources.push_back(static_cast<int>(q));
      } else {
        sources.push_back(ns.index_of(from));
      }
      const int to = ns.index_of(child(t, "to"));
      for (int p : profiles_matching(child(t, "profile"), arena)) {
        for (int q : sources) table[static_cast<std::size_t>(q) * static_cast<std::size_t>(letters) + static_cast<std::size_t>(p)] = to;
      }
    }
  }
  return table;
}

void emit_machine_transitions(YAML::Emitter& out, const Arena& arena, const std::vector<int>& table, const std::string& prefix) {
  const int letters = arena.num_profiles();
  out << YAML::Key << "transitions" << YAML::Value << YAML::BeginSeq;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const int q = static_cast<int>(k / static_cast<std::size_t>(letters));
    const int p = static_cast<int>(k % static_cast<std::size_t>(letters));
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "from" << YAML::Value << prefix + std::to_string(q);
    out << YAML::Key << "profile" << YAML::Value;
    emit_profile_actions(out, arena, p);
    out << YAML::Key << "to" << YAML::Value << prefix + std::to_string(table[k]);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

Profile read_profile(const YAML::Node& root, const Arena& arena) {
  const YAML::Node machines = sequence(child(root, "machines"));
  if (static_cast<int>(machines.size()) != arena.num_agents()) {
    fail(machines, "expected " + std::to_string(arena.num_agents()) + " machines");
  }
  Profile profile;
  for (int i = 0; i < arena.num_agents(); ++i) {
    const YAML::Node m = machines[i];
    if (YAML::Node agent = m["agent"]) {
      if (scalar(agent) != arena.agent_name(i)) fail(agent, "machine " + std::to_string(i + 1) + " belongs to agent " + arena.agent_name(i));
    }
    std::vector<YAML::Node> items;
    const NamedStates ns = machine_states(m, child(m, "states"), &items);
    std::vector<int> outputs;
    for (const auto& item : items) {
      const YAML::Node act = child(item, "action");
      auto a = arena.action_index(i, scalar(act));
      if (!a) fail(act, "unknown action '" + scalar(act) + "' for agent " + arena.agent_name(i));
      outputs.push_back(*a);
    }
    profile.push_back(make_machine(StrategyMachine(arena.num_profiles(), machine_table(m, ns, arena), outputs)));
  }
  return profile;
}

void emit_profile(YAML::Emitter& out, const Profile& profile, const Arena& arena) {
  out << YAML::Key << "machines" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < arena.num_agents(); ++i) {
    const StrategyMachine& m = *profile[i];
    out << YAML::BeginMap;
    out << YAML::Key << "agent" << YAML::Value << arena.agent_name(i);
    out << YAML::Key << "initial" << YAML::Value << "m0";
    out << YAML::Key << "states" << YAML::Value << YAML::BeginSeq;
    for (int q = 0; q < m.num_states(); ++q) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << "m" + std::to_string(q) << YAML::Key
          << "action" << YAML::Value << arena.action_name(i, m.output(q)) << YAML::EndMap;
    }
    out << YAML::EndSeq;
    emit_machine_transitions(out, arena, m.next_table(), "m");
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

void read_tax_entries(const YAML::Node& entries, const Arena& arena, StaticTax& tax) {
  for (const auto& e : sequence(entries)) {
    const YAML::Node v = child(e, "tax");
    const CostVector value = vector_of(v, arena.num_agents());
    for (const auto& x : value) {
      if (x < 0) fail(v, "taxes must be non-negative");
    }
    for (int s : states_matching(child(e, "state"), arena)) {
      for (int p : profiles_matching(child(e, "profile"), arena)) tax.set(s, p, value);
    }
  }
}

void emit_tax_entries(YAML::Emitter& out, const StaticTax& tax, const Arena& arena) {
  out << YAML::BeginSeq;
  for (const auto& [key, v] : tax.entries()) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "state" << YAML::Value << arena.state_name(key.first);
    out << YAML::Key << "profile" << YAML::Value;
    emit_profile_actions(out, arena, key.second);
    out << YAML::Key << "tax" << YAML::Value;
    emit_vector(out, v);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

TaxDocument read_tax(const YAML::Node& root, const Arena& arena) {
  TaxDocument doc;
  const YAML::Node type = child(root, "type");
  const std::string t = scalar(type);
  if (t == "static") {
    doc.is_static = true;
    doc.static_tax = StaticTax(arena.num_agents());
    if (YAML::Node e = root["entries"]) read_tax_entries(e, arena, doc.static_tax);
    doc.machine = lift_static(doc.static_tax, arena.num_profiles());
    return doc;
  }
  if (t != "dynamic") fail(type, "tax type must be 'static' or 'dynamic'");
  const NamedStates ns = machine_states(root, child(root, "states"), nullptr);
  std::vector<StaticTax> outputs(ns.names.size(), StaticTax(arena.num_agents()));
  if (YAML::Node outs = root["outputs"]) {
    for (const auto& o : sequence(outs)) {
      const int q = ns.index_of(child(o, "state"));
      read_tax_entries(child(o, "entries"), arena, outputs[static_cast<std::size_t>(q)]);
    }
  }
  doc.machine = DynamicTax(arena.num_profiles(), machine_table(root, ns, arena), std::move(outputs));
  return doc;
}

void emit_dynamic_tax(YAML::Emitter& out, const DynamicTax& tax, const Arena& arena) {
  out << YAML::Key << "type" << YAML::Value << "dynamic";
  out << YAML::Key << "initial" << YAML::Value << "t0";
  out << YAML::Key << "states" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (int q = 0; q < tax.num_states(); ++q) out << "t" + std::to_string(q);
  out << YAML::EndSeq;
  emit_machine_transitions(out, arena, tax.next_table(), "t");
  out << YAML::Key << "outputs" << YAML::Value << YAML::BeginSeq;
  for (int q = 0; q < tax.num_states(); ++q) {
    if (tax.output(q).is_zero()) continue;
    out << YAML::BeginMap;
    out << YAML::Key << "state" << YAML::Value << "t" + std::to_string(q);
    out << YAML::Key << "entries" << YAML::Value;
    emit_tax_entries(out, tax.output(q), arena);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

Cell read_cell(const YAML::Node& node) {
  sequence(node);
  if (node.size() != 2) fail(node, "a cell is [x, y]");
  return {integer(node[0]), integer(node[1])};
}

void emit_cell(YAML::Emitter& out, Cell c) { out << YAML::Flow << YAML::BeginSeq << c.x << c.y << YAML::EndSeq; }

}  // namespace

Game load_game(const std::string& text) {
  const YAML::Node root = parse_yaml(text);
  expect_kind(root, "game");
  std::vector<std::string> vars;
  if (YAML::Node v = root["vocabulary"]) {
    for (const auto& x : sequence(v)) vars.push_back(scalar(x));
  }
  Vocabulary vocabulary;
  try {
    vocabulary = Vocabulary(vars);
  } catch (const std::invalid_argument& e) {
    fail(root["vocabulary"], e.what());
  }
  std::vector<std::string> agent_names;
  std::vector<std::vector<std::string>> actions;
  for (const auto& a : sequence(child(root, "agents"))) {
    agent_names.push_back(scalar(child(a, "name")));
    std::vector<std::string> acts;
    for (const auto& x : sequence(child(a, "actions"))) acts.push_back(scalar(x));
    if (acts.empty()) fail(a, "agent needs at least one action");
    actions.push_back(std::move(acts));
  }
  std::vector<std::string> state_names;
  std::vector<LabelSet> labels;
  for (const auto& s : sequence(child(root, "states"))) {
    state_names.push_back(scalar(child(s, "name")));
    LabelSet l = 0;
    if (YAML::Node ls = s["labels"]) {
      for (const auto& x : sequence(ls)) {
        auto k = vocabulary.index_of(scalar(x));
        if (!k) fail(x, "unknown label variable '" + scalar(x) + "'");
        l |= LabelSet{1} << *k;
      }
    }
    labels.push_back(l);
  }
  const YAML::Node init = child(root, "initial");
  int initial = -1;
  for (std::size_t k = 0; k < state_names.size(); ++k) {
    if (state_names[k] == scalar(init)) initial = static_cast<int>(k);
  }
  if (initial < 0) fail(init, "unknown initial state '" + scalar(init) + "'");
  Game game;
  try {
    game.arena = Arena(vocabulary, agent_names, actions, state_names, labels, initial);
  } catch (const std::invalid_argument& e) {
    fail(root, e.what());
  }
  Arena& arena = game.arena;
  for (const auto& t : sequence(child(root, "transitions"))) {
    const auto sources = states_matching(child(t, "from"), arena);
    const YAML::Node to = child(t, "to");
    auto target = arena.state_index(scalar(to));
    if (!target) fail(to, "unknown state '" + scalar(to) + "'");
    CostVector cost = zero_vector(static_cast<std::size_t>(arena.num_agents()));
    if (YAML::Node c = t["cost"]) cost = vector_of(c, arena.num_agents());
    for (int s : sources) {
      for (int p : profiles_matching(child(t, "profile"), arena)) {
        arena.set_transition(s, p, *target);
        arena.set_cost(s, p, cost);
      }
    }
  }
  const YAML::Node goals = sequence(child(root, "goals"));
  if (static_cast<int>(goals.size()) != arena.num_agents()) fail(goals, "expected one goal per agent");
  for (const auto& g : goals) {
    try {
      game.goals.push_back(ltl::parse(scalar(g), vocabulary));
    } catch (const ltl::ParseError& e) {
      const YAML::Mark m = g.Mark();
      throw DocumentError(e.what(), m.line + 1, m.column + static_cast<int>(e.column()));
    }
  }
  const auto diagnostics = validate(game);
  if (!diagnostics.empty()) {
    std::string msg = "invalid game:";
    for (const auto& d : diagnostics) msg += "\n  " + d;
    throw DocumentError(msg, 0, 0);
  }
  return game;
}

std::string save_game(const Game& game) {
  const Arena& a = game.arena;
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << "game";
  out << YAML::Key << "vocabulary" << YAML::Value << YAML::Flow << a.vocabulary().names();
  out << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < a.num_agents(); ++i) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << a.agent_name(i) << YAML::Key
        << "actions" << YAML::Value << YAML::Flow << a.actions(i) << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "states" << YAML::Value << YAML::BeginSeq;
  for (int s = 0; s < a.num_states(); ++s) {
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < a.vocabulary().size(); ++v) {
      if (a.label(s) & (LabelSet{1} << v)) labels.push_back(a.vocabulary().name(static_cast<int>(v)));
    }
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << a.state_name(s) << YAML::Key
        << "labels" << YAML::Value << YAML::Flow << labels << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "initial" << YAML::Value << a.state_name(a.initial());
  out << YAML::Key << "transitions" << YAML::Value << YAML::BeginSeq;
  for (int s = 0; s < a.num_states(); ++s) {
    for (int p = 0; p < a.num_profiles(); ++p) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "from" << YAML::Value << a.state_name(s);
      out << YAML::Key << "profile" << YAML::Value;
      emit_profile_actions(out, a, p);
      out << YAML::Key << "to" << YAML::Value << a.state_name(a.transition(s, p));
      out << YAML::Key << "cost" << YAML::Value;
      emit_vector(out, a.cost(s, p));
      out << YAML::EndMap;
    }
  }
  out << YAML::EndSeq;
  out << YAML::Key << "goals" << YAML::Value << YAML::BeginSeq;
  for (const auto& g : game.goals) out << YAML::DoubleQuoted << g.to_string();
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return finish(out);
}

Profile load_profile(const std::string& text, const Arena& arena) {
  const YAML::Node root = parse_yaml(text);
  expect_kind(root, "profile");
  return read_profile(root, arena);
}

std::string save_profile(const Profile& profile, const Arena& arena) {
  check_profile(arena, profile);
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "profile";
  emit_profile(out, profile, arena);
  out << YAML::EndMap;
  return finish(out);
}

TaxDocument load_tax(const std::string& text, const Arena& arena) {
  const YAML::Node root = parse_yaml(text);
  expect_kind(root, "tax");
  return read_tax(root, arena);
}

std::string save_static_tax(const StaticTax& tax, const Arena& arena) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "tax";
  out << YAML::Key << "type" << YAML::Value << "static";
  out << YAML::Key << "entries" << YAML::Value;
  emit_tax_entries(out, tax, arena);
  out << YAML::EndMap;
  return finish(out);
}

std::string save_dynamic_tax(const DynamicTax& tax, const Arena& arena) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "tax";
  emit_dynamic_tax(out, tax, arena);
  out << YAML::EndMap;
  return finish(out);
}

GridSpec load_grid_spec(const std::string& text) {
  const YAML::Node root = parse_yaml(text);
  expect_kind(root, "gridworld");
  GridSpec spec;
  spec.width = integer(child(root, "width"));
  spec.height = integer(child(root, "height"));
  for (const auto& r : sequence(child(root, "robots"))) spec.robots.push_back(read_cell(r));
  if (YAML::Node apples = root["apples"]) {
    for (const auto& a : sequence(apples)) spec.apples.push_back(read_cell(a));
  }
  spec.basket = read_cell(child(root, "basket"));
  if (YAML::Node costs = root["costs"]) {
    if (!costs.IsMap()) fail(costs, "costs must map actions to values");
    for (const auto& kv : costs) spec.costs[scalar(kv.first)] = rational(kv.second);
  }
  const auto problems = validate(spec);
  if (!problems.empty()) {
    std::string msg = "invalid grid spec:";
    for (const auto& p : problems) msg += "\n  " + p;
    fail(root, msg);
  }
  return spec;
}

std::string save_grid_spec(const GridSpec& spec) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "gridworld";
  out << YAML::Key << "width" << YAML::Value << spec.width;
  out << YAML::Key << "height" << YAML::Value << spec.height;
  out << YAML::Key << "robots" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : spec.robots) emit_cell(out, c);
  out << YAML::EndSeq;
  out << YAML::Key << "apples" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : spec.apples) emit_cell(out, c);
  out << YAML::EndSeq;
  out << YAML::Key << "basket" << YAML::Value;
  emit_cell(out, spec.basket);
  out << YAML::Key << "costs" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : spec.costs) out << YAML::Key << k << YAML::Value << to_string(v);
  out << YAML::EndMap;
  out << YAML::EndMap;
  return finish(out);
}

ImplementationVerdict load_verdict(const std::string& text, const Arena& arena) {
  const YAML::Node root = parse_yaml(text);
  expect_kind(root, "verdict");
  ImplementationVerdict v;
  v.problem = scalar(child(root, "problem"));
  if (v.problem != "enash" && v.problem != "anash") fail(root["problem"], "problem must be enash or anash");
  const YAML::Node ans = child(root, "answer");
  const std::string a = scalar(ans);
  if (a == "yes") {
    v.answer = Answer::Yes;
  } else if (a == "no-within-bound") {
    v.answer = Answer::NoWithinBound;
  } else if (a == "unknown-at-bound") {
    v.answer = Answer::Unknown;
  } else {
    fail(ans, "unknown answer '" + a + "'");
  }
  v.bound = integer(child(root, "bound"));
  if (v.bound < 1) fail(root["bound"], "bound must be at least 1");
  v.objective = scalar(child(root, "objective"));
  if (YAML::Node u = root["universe_size"]) v.universe_size = static_cast<std::uint64_t>(std::stoull(scalar(u)));
  if (YAML::Node d = root["diagnostics"]) {
    for (const auto& x : sequence(d)) v.diagnostics.push_back(scalar(x));
  }
  if (YAML::Node w = root["witness"]) {
    if (!w.IsNull()) {
      v.witness_profile = read_profile(child(w, "profile"), arena);
      TaxDocument t = read_tax(child(w, "tax"), arena);
      v.witness_tax = t.machine;
    }
  }
  return v;
}

std::string save_verdict(const ImplementationVerdict& v, const Arena& arena) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "verdict";
  out << YAML::Key << "problem" << YAML::Value << v.problem;
  out << YAML::Key << "answer" << YAML::Value << answer_name(v.answer);
  out << YAML::Key << "bound" << YAML::Value << v.bound;
  out << YAML::Key << "objective" << YAML::Value << YAML::DoubleQuoted << v.objective;
  out << YAML::Key << "universe_size" << YAML::Value << v.universe_size;
  out << YAML::Key << "diagnostics" << YAML::Value << YAML::BeginSeq;
  for (const auto& d : v.diagnostics) out << d;
  out << YAML::EndSeq;
  if (v.witness_profile && v.witness_tax) {
    out << YAML::Key << "witness" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
    emit_profile(out, *v.witness_profile, arena);
    out << YAML::EndMap;
    out << YAML::Key << "tax" << YAML::Value << YAML::BeginMap;
    emit_dynamic_tax(out, *v.witness_tax, arena);
    out << YAML::EndMap;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return finish(out);
}

std::string normalize_document(const std::string& text, const Game* game) {
  const YAML::Node root = parse_yaml(text);
  const std::string kind = scalar(child(root, "kind"));
  if (kind == "game") return save_game(load_game(text));
  if (kind == "gridworld") return save_grid_spec(load_grid_spec(text));
  if (!game) fail(root, "a game is needed to normalize a '" + kind + "' document");
  if (kind == "profile") return save_profile(load_profile(text, game->arena), game->arena);
  if (kind == "tax") {
    TaxDocument t = load_tax(text, game->arena);
    return t.is_static ? save_static_tax(t.static_tax, game->arena) : save_dynamic_tax(t.machine, game->arena);
  }
  if (kind == "verdict") return save_verdict(load_verdict(text, game->arena), game->arena);
  fail(root["kind"], "unknown document kind '" + kind + "'");
}

}  // namespace taxgames
