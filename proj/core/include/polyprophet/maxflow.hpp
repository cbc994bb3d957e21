#pragma once

#include <cstdint>
#include <vector>

namespace polyprophet {

// Dinic max-flow on integer capacities. Exact integer optimum; small graphs.
class MaxFlowGraph {
 public:
  explicit MaxFlowGraph(int num_nodes);

  void add_edge(int from, int to, int64_t capacity);

  // Computes the max s-t flow. Resets residual capacities first, so the
  // graph can be reused for multiple queries.
  int64_t max_flow(int source, int sink);

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }

 private:
  struct Edge {
    int to;
    int64_t cap;
    int64_t residual;
    int rev;
  };

  bool bfs_levels(int source, int sink);
  int64_t dfs_augment(int v, int sink, int64_t limit);

  std::vector<std::vector<Edge>> adjacency_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace polyprophet
