#pragma once

#include <optional>
#include <vector>

#include "taxgames/rational.hpp"

namespace taxgames::graph {

using Adjacency = std::vector<std::vector<int>>;

struct WeightedEdge {
  int from = 0;
  int to = 0;
  Rational weight;
};

/// Directed graph with rational edge weights over vertices 0..num_vertices-1.
struct WeightedDigraph {
  int num_vertices = 0;
  std::vector<WeightedEdge> edges;
};

/// Iterative Tarjan. Component ids come out in reverse topological order.
std::vector<int> strongly_connected_components(const Adjacency& adjacency, int& count);

/// True for every vertex reachable from one of the roots.
std::vector<bool> reachable_from(const Adjacency& adjacency, const std::vector<int>& roots);

/// Minimum over all directed cycles of total weight / length, or nullopt if the
/// graph is acyclic. Karp's recurrence, run separately on every strongly
/// connected component after scaling weights to integers.
std::optional<Rational> min_mean_cycle(const WeightedDigraph& g);

/// Same, restricted to the cycles that lie inside the vertex subset.
std::optional<Rational> min_mean_cycle(const WeightedDigraph& g, const std::vector<bool>& subset);

}  // namespace taxgames::graph
