#include "polyprophet/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace polyprophet {

MaxFlowGraph::MaxFlowGraph(int num_nodes) : adjacency_(num_nodes) {}

void MaxFlowGraph::add_edge(int from, int to, int64_t capacity) {
  const int fwd = static_cast<int>(adjacency_[from].size());
  const int bwd = static_cast<int>(adjacency_[to].size());
  adjacency_[from].push_back(Edge{to, capacity, capacity, bwd});
  adjacency_[to].push_back(Edge{from, 0, 0, fwd});
}

bool MaxFlowGraph::bfs_levels(int source, int sink) {
  level_.assign(adjacency_.size(), -1);
  std::queue<int> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (const Edge& e : adjacency_[v]) {
      if (e.residual > 0 && level_[e.to] < 0) {
        level_[e.to] = level_[v] + 1;
        queue.push(e.to);
      }
    }
  }
  return level_[sink] >= 0;
}

int64_t MaxFlowGraph::dfs_augment(int v, int sink, int64_t limit) {
  if (v == sink) return limit;
  for (int& i = iter_[v]; i < static_cast<int>(adjacency_[v].size()); ++i) {
    Edge& e = adjacency_[v][i];
    if (e.residual <= 0 || level_[e.to] != level_[v] + 1) continue;
    const int64_t pushed = dfs_augment(e.to, sink, std::min(limit, e.residual));
    if (pushed > 0) {
      e.residual -= pushed;
      adjacency_[e.to][e.rev].residual += pushed;
      return pushed;
    }
  }
  return 0;
}

int64_t MaxFlowGraph::max_flow(int source, int sink) {
  for (auto& edges : adjacency_) {
    for (Edge& e : edges) e.residual = e.cap;
  }
  int64_t flow = 0;
  while (bfs_levels(source, sink)) {
    iter_.assign(adjacency_.size(), 0);
    for (;;) {
      const int64_t pushed =
          dfs_augment(source, sink, std::numeric_limits<int64_t>::max());
      if (pushed == 0) break;
      flow += pushed;
    }
  }
  return flow;
}

}  // namespace polyprophet
