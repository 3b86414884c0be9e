#pragma once

#include <utility>
#include <vector>

namespace relanosov {

// Undirected simple graph on vertices 0..n-1 with unit edge lengths.
class Graph {
 public:
  explicit Graph(int n = 0) : adj_(static_cast<std::size_t>(n)) {}

  int add_vertex() {
    adj_.emplace_back();
    return size() - 1;
  }
  // Self-loops are ignored; duplicates are removed by normalize().
  void add_edge(int u, int v);
  // Sort and deduplicate adjacency lists.
  void normalize();

  int size() const noexcept { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
  std::size_t edge_count() const;
  bool has_edge(int u, int v) const;
  // Each edge once as (u, v) with u < v, sorted.
  std::vector<std::pair<int, int>> edges() const;

 private:
  std::vector<std::vector<int>> adj_;
};

constexpr int kUnreachable = -1;

std::vector<int> bfs_distances(const Graph& g, int source);
// Throws Disconnected when no path exists.
int graph_distance(const Graph& g, int a, int b);
bool is_connected(const Graph& g);

Graph path_graph(int n);
Graph cycle_graph(int n);

}  // namespace relanosov
