#include "relanosov/graph.hpp"

#include <algorithm>
#include <deque>

#include "relanosov/error.hpp"

namespace relanosov {

void Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= size() || v >= size()) {
    throw Error(ErrorCode::InvalidInput, "edge endpoint out of range");
  }
  if (u == v) return;
  adj_[u].push_back(v);
  adj_[v].push_back(u);
}

void Graph::normalize() {
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (const auto& a : adj_) total += a.size();
  return total / 2;
}

bool Graph::has_edge(int u, int v) const {
  const auto& a = neighbors(u);
  return std::find(a.begin(), a.end(), v) != a.end();
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < size(); ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> bfs_distances(const Graph& g, int source) {
  std::vector<int> dist(static_cast<std::size_t>(g.size()), kUnreachable);
  if (source < 0 || source >= g.size()) throw Error(ErrorCode::InvalidInput, "source out of range");
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

int graph_distance(const Graph& g, int a, int b) {
  if (b < 0 || b >= g.size()) throw Error(ErrorCode::InvalidInput, "target out of range");
  const int d = bfs_distances(g, a)[b];
  if (d == kUnreachable) throw Error(ErrorCode::Disconnected, "vertices lie in different components");
  return d;
}

bool is_connected(const Graph& g) {
  if (g.size() == 0) return true;
  const auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x == kUnreachable; });
}

Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  if (n > 2) g.add_edge(n - 1, 0);
  return g;
}

}  // namespace relanosov
