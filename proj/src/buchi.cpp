#include "taxgames/buchi.hpp"

#include <map>
#include <unordered_map>

#include "taxgames/graph.hpp"

namespace taxgames {

using ltl::Formula;
using ltl::Op;

BuchiAutomaton::BuchiAutomaton(std::size_t alphabet_bits, std::vector<std::vector<Edge>> edges,
                               std::vector<int> initial, std::vector<bool> accepting)
    : alphabet_bits_(alphabet_bits),
      edges_(std::move(edges)),
      initial_(std::move(initial)),
      accepting_(std::move(accepting)) {
  if (accepting_.size() != edges_.size()) throw std::invalid_argument("accepting flags do not match state count");
}

void BuchiAutomaton::successors(int state, LabelSet label, std::vector<int>& out) const {
  out.clear();
  for (const auto& e : edges_[static_cast<std::size_t>(state)]) {
    if ((label & e.care) == e.value) out.push_back(e.target);
  }
}

bool BuchiAutomaton::is_complete() const {
  // Cube guards: a state is complete iff the union of its guards covers every
  // valuation of the variables it mentions.
  for (const auto& out : edges_) {
    LabelSet mentioned = 0;
    for (const auto& e : out) mentioned |= e.care;
    std::vector<int> bits;
    for (int b = 0; b < 64; ++b) {
      if (mentioned & (LabelSet{1} << b)) bits.push_back(b);
    }
    if (bits.size() > 20) return false;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits.size()); ++m) {
      LabelSet label = 0;
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (m & (std::uint64_t{1} << i)) label |= LabelSet{1} << bits[i];
      }
      bool hit = false;
      for (const auto& e : out) {
        if ((label & e.care) == e.value) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
  }
  return true;
}

namespace {

// Closure of a formula with structurally equal subformulas merged; children
// always precede their parents.
struct Closure {
  std::vector<Formula> nodes;
  std::vector<int> left, right;  // child indices, -1 if absent
  std::map<std::string, int> by_key;

  int add(const Formula& f) {
    auto key = f.to_string();
    if (auto it = by_key.find(key); it != by_key.end()) return it->second;
    int l = -1, r = -1;
    switch (f.op()) {
      case Op::True:
      case Op::Var:
        break;
      case Op::Not:
      case Op::Next:
        l = add(f.child());
        break;
      case Op::Or:
      case Op::Until:
        l = add(f.lhs());
        r = add(f.rhs());
        break;
    }
    int id = static_cast<int>(nodes.size());
    nodes.push_back(f);
    left.push_back(l);
    right.push_back(r);
    by_key.emplace(std::move(key), id);
    return id;
  }
};

bool bit(std::uint64_t mask, int i) { return (mask >> i) & 1u; }

}  // namespace

BuchiAutomaton to_buchi(const Formula& f, const BuchiOptions& options) {
  Closure cl;
  const int root = cl.add(f);
  const int size = static_cast<int>(cl.nodes.size());
  if (size > 64) throw ResourceLimit("formula closure exceeds 64 subformulas");

  std::vector<int> elementary, untils, nexts;
  LabelSet care = 0;
  for (int i = 0; i < size; ++i) {
    const Op op = cl.nodes[i].op();
    if (op == Op::Var || op == Op::Next || op == Op::Until) elementary.push_back(i);
    if (op == Op::Until) untils.push_back(i);
    if (op == Op::Next) nexts.push_back(i);
    if (op == Op::Var) {
      const int v = cl.nodes[i].var_index();
      if (static_cast<std::size_t>(v) >= options.alphabet_bits) {
        throw std::invalid_argument("variable index outside the automaton alphabet");
      }
      care |= LabelSet{1} << v;
    }
  }
  if (elementary.size() >= 63 || (std::size_t{1} << elementary.size()) > options.max_states) {
    throw ResourceLimit("tableau would exceed " + std::to_string(options.max_states) + " states");
  }

  // Atoms: valuations of elementary subformulas extended to the closure and
  // locally consistent for every until (b -> u, u -> a | b).
  std::vector<std::uint64_t> atoms;
  const std::uint64_t combos = std::uint64_t{1} << elementary.size();
  for (std::uint64_t m = 0; m < combos; ++m) {
    std::uint64_t val = 0;
    for (std::size_t k = 0; k < elementary.size(); ++k) {
      if (bit(m, static_cast<int>(k))) val |= std::uint64_t{1} << elementary[k];
    }
    bool ok = true;
    for (int i = 0; i < size && ok; ++i) {
      switch (cl.nodes[i].op()) {
        case Op::True:
          val |= std::uint64_t{1} << i;
          break;
        case Op::Not:
          if (!bit(val, cl.left[i])) val |= std::uint64_t{1} << i;
          break;
        case Op::Or:
          if (bit(val, cl.left[i]) || bit(val, cl.right[i])) val |= std::uint64_t{1} << i;
          break;
        case Op::Until: {
          const bool u = bit(val, i), a = bit(val, cl.left[i]), b = bit(val, cl.right[i]);
          if (b && !u) ok = false;
          if (u && !a && !b) ok = false;
          break;
        }
        default:
          break;
      }
    }
    if (ok) atoms.push_back(val);
  }

  auto letter_value = [&](std::uint64_t atom) {
    LabelSet v = 0;
    for (int i = 0; i < size; ++i) {
      if (cl.nodes[i].op() == Op::Var && bit(atom, i)) v |= LabelSet{1} << cl.nodes[i].var_index();
    }
    return v;
  };
  auto step_ok = [&](std::uint64_t a, std::uint64_t b) {
    for (int x : nexts) {
      if (bit(a, x) != bit(b, cl.left[x])) return false;
    }
    for (int u : untils) {
      const bool expect = bit(a, cl.right[u]) || (bit(a, cl.left[u]) && bit(b, u));
      if (bit(a, u) != expect) return false;
    }
    return true;
  };
  const int m = static_cast<int>(untils.size());
  auto in_acceptance_set = [&](std::uint64_t atom, int k) {
    const int u = untils[k];
    return !bit(atom, u) || bit(atom, cl.right[u]);
  };
  auto advance = [&](int counter, std::uint64_t atom) {
    int k = counter == m ? 0 : counter;
    while (k < m && in_acceptance_set(atom, k)) ++k;
    return k;
  };

  // Lazily computed successor atoms.
  std::vector<std::vector<int>> atom_succ(atoms.size());
  std::vector<bool> atom_done(atoms.size(), false);
  auto succ_atoms = [&](int a) -> const std::vector<int>& {
    if (!atom_done[a]) {
      for (std::size_t b = 0; b < atoms.size(); ++b) {
        if (step_ok(atoms[a], atoms[b])) atom_succ[a].push_back(static_cast<int>(b));
      }
      atom_done[a] = true;
    }
    return atom_succ[a];
  };

  std::unordered_map<std::uint64_t, int> ids;  // (atom << 8 | counter) -> state
  std::vector<std::pair<int, int>> states;      // (atom, counter)
  std::vector<int> todo;
  auto state_of = [&](int atom, int counter) {
    const std::uint64_t key = (static_cast<std::uint64_t>(atom) << 8) | static_cast<std::uint64_t>(counter);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    if (states.size() + 1 >= options.max_states) {
      throw ResourceLimit("tableau exceeds " + std::to_string(options.max_states) + " states");
    }
    const int id = static_cast<int>(states.size());
    ids.emplace(key, id);
    states.push_back({atom, counter});
    todo.push_back(id);
    return id;
  };
  std::vector<int> initial;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (bit(atoms[a], root)) initial.push_back(state_of(static_cast<int>(a), 0));
  }

  std::vector<std::vector<BuchiAutomaton::Edge>> edges;
  std::vector<bool> accepting;
  std::vector<std::vector<int>> targets;
  while (!todo.empty()) {
    const int id = todo.back();
    todo.pop_back();
    const auto [atom, counter] = states[id];
    const int next_counter = advance(counter, atoms[atom]);
    std::vector<int> out;
    for (int b : succ_atoms(atom)) out.push_back(state_of(b, next_counter));
    if (targets.size() <= static_cast<std::size_t>(id)) targets.resize(id + 1);
    targets[id] = std::move(out);
  }
  targets.resize(states.size());

  const int n = static_cast<int>(states.size());
  const int sink = n;
  edges.resize(n + 1);
  accepting.resize(n + 1, false);
  for (int id = 0; id < n; ++id) {
    const auto [atom, counter] = states[id];
    accepting[id] = counter == m;
    const LabelSet value = letter_value(atoms[atom]);
    if (targets[id].empty()) {
      edges[id].push_back({0, 0, sink});
      continue;
    }
    for (int t : targets[id]) edges[id].push_back({care, value, t});
    // Complement of the cube (care, value) as disjoint cubes, routed to the sink.
    LabelSet fixed = 0;
    for (int b = 0; b < 64; ++b) {
      const LabelSet bb = LabelSet{1} << b;
      if (!(care & bb)) continue;
      edges[id].push_back({fixed | bb, (value & fixed) | (~value & bb), sink});
      fixed |= bb;
    }
  }
  edges[sink].push_back({0, 0, sink});
  return BuchiAutomaton(options.alphabet_bits, std::move(edges), std::move(initial), std::move(accepting));
}

bool buchi_accepts_lasso(const BuchiAutomaton& automaton, const ltl::LassoWord& word) {
  if (word.cycle.empty()) throw std::invalid_argument("lasso word needs a non-empty cycle");
  const std::size_t bits = automaton.alphabet_bits();
  const LabelSet allowed = bits >= 64 ? ~LabelSet{0} : (LabelSet{1} << bits) - 1;
  for (std::size_t i = 0; i < word.length(); ++i) {
    if (word.at(i) & ~allowed) throw std::invalid_argument("lasso letter outside the automaton alphabet");
  }
  const int len = static_cast<int>(word.length());
  std::unordered_map<long long, int> ids;
  std::vector<std::pair<int, int>> nodes;  // (state, position)
  graph::Adjacency adj;
  std::vector<int> todo;
  auto node_of = [&](int q, int pos) {
    const long long key = static_cast<long long>(q) * len + pos;
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    const int id = static_cast<int>(nodes.size());
    ids.emplace(key, id);
    nodes.push_back({q, pos});
    adj.emplace_back();
    todo.push_back(id);
    return id;
  };
  for (int q : automaton.initial()) node_of(q, 0);
  std::vector<int> succ;
  while (!todo.empty()) {
    const int id = todo.back();
    todo.pop_back();
    const auto [q, pos] = nodes[id];
    automaton.successors(q, word.at(static_cast<std::size_t>(pos)), succ);
    const int next_pos = static_cast<int>(word.successor(static_cast<std::size_t>(pos)));
    for (int t : succ) {
      const int w = node_of(t, next_pos);
      adj[id].push_back(w);
    }
  }
  int count = 0;
  auto comp = graph::strongly_connected_components(adj, count);
  std::vector<int> comp_size(count, 0);
  for (int c : comp) ++comp_size[c];
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (!automaton.accepting(nodes[v].first)) continue;
    if (comp_size[comp[v]] > 1) return true;
    for (int w : adj[v]) {
      if (w == static_cast<int>(v)) return true;
    }
  }
  return false;
}

}  // namespace taxgames
