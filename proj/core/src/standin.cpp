#include "qsync/graph.hpp"

namespace qsync {

// Complete digraph on ten nodes with weight 0.1, minus the ten arcs that
// let node i hear node i+1 (mod 10). Every other pair talks both ways, so
// the graph is strongly connected but not symmetric.
DirectedGraph standin_graph() {
  constexpr std::size_t n = 10;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && j != (i + 1) % n) edges.push_back({i, j, 0.1});
    }
  }
  return DirectedGraph(n, std::move(edges));
}

}  // namespace qsync
