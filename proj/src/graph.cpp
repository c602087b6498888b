#include "taxgames/graph.hpp"

#include <algorithm>
#include <limits>

namespace taxgames::graph {

std::vector<int> strongly_connected_components(const Adjacency& adjacency, int& count) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<int> stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<int, std::size_t>> call;  // (vertex, next edge)
  int next_index = 0;
  count = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < adjacency[v].size()) {
        int w = adjacency[v][edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  return comp;
}

std::vector<bool> reachable_from(const Adjacency& adjacency, const std::vector<int>& roots) {
  std::vector<bool> seen(adjacency.size(), false);
  std::vector<int> todo;
  for (int r : roots) {
    if (!seen[r]) {
      seen[r] = true;
      todo.push_back(r);
    }
  }
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (int w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        todo.push_back(w);
      }
    }
  }
  return seen;
}

namespace {

struct Mean {
  // numerator / length, length > 0
  mpz_class total;
  long length = 0;
};

bool less_than(const Mean& a, const Mean& b) { return a.total * b.length < b.total * a.length; }

// Karp on a strongly connected component with integer weights. Two sweeps with
// rolling arrays: the first computes D_n, the second the max over k of
// (D_n(v) - D_k(v)) / (n - k). D_0 is zero everywhere, which equals starting
// from a virtual source joined to every vertex.
template <typename W, typename Wide>
std::optional<Mean> karp_component(int n, const std::vector<int>& from, const std::vector<int>& to,
                                   const std::vector<W>& weight) {
  struct Row {
    std::vector<W> value;
    std::vector<char> finite;
  };
  auto sweep = [&](Row& cur, Row& nxt) {
    std::fill(nxt.finite.begin(), nxt.finite.end(), 0);
    for (std::size_t e = 0; e < from.size(); ++e) {
      if (!cur.finite[from[e]]) continue;
      W cand = cur.value[from[e]] + weight[e];
      const int t = to[e];
      if (!nxt.finite[t] || cand < nxt.value[t]) {
        nxt.value[t] = std::move(cand);
        nxt.finite[t] = 1;
      }
    }
    std::swap(cur, nxt);
  };
  Row cur{std::vector<W>(n, W(0)), std::vector<char>(n, 1)};
  Row nxt{std::vector<W>(n, W(0)), std::vector<char>(n, 0)};
  for (int k = 0; k < n; ++k) sweep(cur, nxt);
  const Row dn = cur;

  std::vector<W> best_num(n, W(0));
  std::vector<long> best_len(n, 0);
  std::fill(cur.value.begin(), cur.value.end(), W(0));
  std::fill(cur.finite.begin(), cur.finite.end(), 1);
  for (int k = 0; k < n; ++k) {
    for (int v = 0; v < n; ++v) {
      if (!dn.finite[v] || !cur.finite[v]) continue;
      W num = dn.value[v] - cur.value[v];
      const long len = n - k;
      if (best_len[v] == 0 || Wide(num) * Wide(best_len[v]) > Wide(best_num[v]) * Wide(len)) {
        best_num[v] = std::move(num);
        best_len[v] = len;
      }
    }
    sweep(cur, nxt);
  }
  std::optional<Mean> result;
  for (int v = 0; v < n; ++v) {
    if (!dn.finite[v] || best_len[v] == 0) continue;
    Mean m;
    if constexpr (std::is_same_v<W, mpz_class>) {
      m.total = best_num[v];
    } else {
      m.total = mpz_class(static_cast<long>(best_num[v]));
    }
    m.length = best_len[v];
    if (!result || less_than(m, *result)) result = m;
  }
  return result;
}

}  // namespace

std::optional<Rational> min_mean_cycle(const WeightedDigraph& g) {
  return min_mean_cycle(g, std::vector<bool>(static_cast<std::size_t>(g.num_vertices), true));
}

std::optional<Rational> min_mean_cycle(const WeightedDigraph& g, const std::vector<bool>& subset) {
  const int n = g.num_vertices;
  Adjacency adj(n);
  for (const auto& e : g.edges) {
    if (subset[e.from] && subset[e.to]) adj[e.from].push_back(e.to);
  }
  int count = 0;
  auto comp = strongly_connected_components(adj, count);

  mpz_class denominator = 1;
  for (const auto& e : g.edges) {
    if (subset[e.from] && subset[e.to]) mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), e.weight.get_den_mpz_t());
  }

  // Group internal edges by component.
  std::vector<std::vector<std::size_t>> comp_edges(count);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (subset[e.from] && subset[e.to] && comp[e.from] == comp[e.to]) comp_edges[comp[e.from]].push_back(i);
  }
  std::vector<int> local(n, -1);
  std::vector<int> comp_size(count, 0);
  for (int v = 0; v < n; ++v) {
    if (subset[v]) local[v] = comp_size[comp[v]]++;
  }

  std::optional<Mean> best;
  for (int c = 0; c < count; ++c) {
    const auto& edges = comp_edges[c];
    if (edges.empty()) continue;
    const int size = comp_size[c];
    std::vector<int> from, to;
    std::vector<mpz_class> big;
    from.reserve(edges.size());
    to.reserve(edges.size());
    big.reserve(edges.size());
    mpz_class max_abs = 0;
    for (auto i : edges) {
      const auto& e = g.edges[i];
      from.push_back(local[e.from]);
      to.push_back(local[e.to]);
      mpz_class w = e.weight.get_num() * (denominator / e.weight.get_den());
      if (abs(w) > max_abs) max_abs = abs(w);
      big.push_back(std::move(w));
    }
    std::optional<Mean> m;
    // D values stay within size * max|w|; the cross products need twice that
    // many bits, which __int128 covers when size * max|w| < 2^60.
    if (max_abs * (size + 1) < (mpz_class(1) << 60)) {
      std::vector<long long> small;
      small.reserve(big.size());
      for (const auto& w : big) small.push_back(w.get_si());
      m = karp_component<long long, __int128>(size, from, to, small);
    } else {
      m = karp_component<mpz_class, mpz_class>(size, from, to, big);
    }
    if (m && (!best || less_than(*m, *best))) best = m;
  }
  if (!best) return std::nullopt;
  Rational r(best->total, denominator * best->length);
  r.canonicalize();
  return r;
}

}  // namespace taxgames::graph
