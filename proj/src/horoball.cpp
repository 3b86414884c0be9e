#include "relanosov/horoball.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#include "relanosov/error.hpp"

namespace relanosov {

namespace {
constexpr double kReachCap = 4e18;
}

DepthFunction DepthFunction::exponential(double base) {
  if (!(base >= 1.0) || !std::isfinite(base)) {
    throw Error(ErrorCode::InvalidInput, "exponential depth base must be >= 1");
  }
  DepthFunction f;
  f.base_ = base;
  return f;
}

DepthFunction DepthFunction::table(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidInput, "empty depth table");
  if (values[0] != 1.0) throw Error(ErrorCode::InvalidInput, "depth table must start with f(0) = 1");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] >= values[i - 1])) throw Error(ErrorCode::InvalidInput, "depth table must be nondecreasing");
  }
  DepthFunction f;
  f.values_ = std::move(values);
  f.base_ = 0.0;
  return f;
}

double DepthFunction::operator()(int t) const {
  if (t < 0) throw Error(ErrorCode::InvalidInput, "negative depth level");
  if (is_table()) {
    if (static_cast<std::size_t>(t) >= values_.size()) {
      throw Error(ErrorCode::DomainExceeded, "depth table has no entry " + std::to_string(t));
    }
    return values_[static_cast<std::size_t>(t)];
  }
  return std::pow(base_, t);
}

long long DepthFunction::reach(int t) const {
  const double v = std::floor((*this)(t));
  return v >= kReachCap ? static_cast<long long>(kReachCap) : static_cast<long long>(v);
}

std::optional<int> DepthFunction::domain() const {
  if (is_table()) return static_cast<int>(values_.size());
  return std::nullopt;
}

std::string DepthFunction::describe() const {
  std::ostringstream os;
  if (is_table()) {
    os << "table[" << values_.size() << "]";
  } else {
    os << "exp(" << base_ << ")";
  }
  return os.str();
}

Admissibility check_depth_admissible(const DepthFunction& f, int s_max, int t_max) {
  if (s_max < 0 || t_max < 0) throw Error(ErrorCode::InvalidInput, "negative admissibility range");
  if (auto dom = f.domain(); dom && *dom < s_max + t_max + 1) {
    throw Error(ErrorCode::DomainExceeded, "depth table shorter than s_max + t_max + 1");
  }
  for (int s = 0; s <= s_max; ++s)
    for (int t = 1; t <= t_max; ++t) {
      const double lhs = f(s + t);
      const double rhs = std::ldexp(f(s), t);
      if (lhs < rhs) return {false, s, t, lhs, rhs};
    }
  return {};
}

HoroballGraph build_horoball(const Graph& T, const DepthFunction& f, int L) {
  if (L < 0) throw Error(ErrorCode::InvalidInput, "negative truncation level");
  if (T.size() == 0 || !is_connected(T)) throw Error(ErrorCode::InvalidInput, "base graph must be connected");
  HoroballGraph h;
  h.base_size = T.size();
  h.levels = L;
  const int n = T.size();
  h.graph = Graph(n * (L + 1));

  // Vertices of T ordered by distance from each v; level-k neighbours are
  // a prefix of that order.
  for (int v = 0; v < n; ++v) {
    const auto dist = bfs_distances(T, v);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    for (int k = 0; k <= L; ++k) {
      const long long r = f.reach(k);
      for (int w : order) {
        if (dist[w] > r) break;
        if (w > v) h.graph.add_edge(h.vertex(v, k), h.vertex(w, k));
      }
      if (k < L) h.graph.add_edge(h.vertex(v, k), h.vertex(v, k + 1));
    }
  }
  h.graph.normalize();
  return h;
}

int horoball_distance(const HoroballGraph& h, int a, int b) { return graph_distance(h.graph, a, b); }

int default_truncation(const DepthFunction& f, int diameter) {
  for (int k = 0;; ++k) {
    if (f(k) >= diameter) return k + 1;  // f(k) throws DomainExceeded past a table
    if (k > 4096) throw Error(ErrorCode::DomainExceeded, "depth function never reaches the diameter");
  }
}

std::vector<int> peripheral_norms(const DepthFunction& f, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidInput, "negative power bound");
  const int n = n_max + 1;
  const int L = default_truncation(f, std::max(n_max, 1));
  // BFS on the horoball over the path 0..n_max without materializing the
  // horizontal edges: each level keeps its unvisited vertices in a set and a
  // popped vertex claims the whole window it can reach.
  std::vector<std::set<int>> unvisited(static_cast<std::size_t>(L + 1));
  for (auto& s : unvisited)
    for (int v = 0; v < n; ++v) s.insert(s.end(), v);
  std::vector<int> dist(static_cast<std::size_t>(n) * (L + 1), kUnreachable);
  std::deque<std::pair<int, int>> queue;
  auto visit = [&](int v, int k, int d) {
    dist[static_cast<std::size_t>(k) * n + v] = d;
    unvisited[k].erase(v);
    queue.emplace_back(v, k);
  };
  visit(0, 0, 0);
  while (!queue.empty()) {
    const auto [v, k] = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(k) * n + v];
    const long long r = f.reach(k);
    auto& level = unvisited[k];
    const long long lo = std::max(0LL, v - r);
    for (auto it = level.lower_bound(static_cast<int>(lo)); it != level.end() && *it <= v + r;) {
      const int w = *it;
      ++it;
      visit(w, k, d + 1);
    }
    for (int kk : {k - 1, k + 1}) {
      if (kk < 0 || kk > L) continue;
      if (dist[static_cast<std::size_t>(kk) * n + v] == kUnreachable) visit(v, kk, d + 1);
    }
  }
  return {dist.begin(), dist.begin() + n};
}

namespace {

// Smallest integer s >= 1 with g(s) >= t, or nullopt when g stays below t
// up to s_max.
std::optional<double> generalized_inverse(const std::function<double(double)>& g, double t, double s_max) {
  auto env = [&](double s) {
    const double v = g(s);
    return std::isfinite(v) ? std::max(v, 0.0) : (v > 0 ? v : 0.0);
  };
  if (env(1.0) >= t) return 1.0;
  double lo = 1.0, hi = 2.0;
  while (env(hi) < t) {
    lo = hi;
    hi *= 2.0;
    if (hi > s_max) {
      if (env(s_max) >= t) {
        hi = s_max;
        break;
      }
      return std::nullopt;
    }
  }
  // Integer bisection while integers are exact, relative afterwards.
  while (hi - lo > 1.0) {
    const double mid = std::floor(lo + (hi - lo) / 2.0);
    if (mid <= lo || mid >= hi) break;
    if (env(mid) >= t) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::ceil(hi);
}

DepthFunction assemble(std::vector<double> h) {
  std::vector<double> f(h.size());
  f[0] = 1.0;
  for (std::size_t t = 1; t < h.size(); ++t) f[t] = std::max(2.0 * f[t - 1], h[t]);
  return DepthFunction::table(std::move(f));
}

}  // namespace

DepthFunction design_depth_function(const std::function<double(double)>& g, int t_max, double s_max) {
  if (t_max < 0) throw Error(ErrorCode::InvalidInput, "negative design range");
  std::vector<double> h(static_cast<std::size_t>(t_max) + 1, 1.0);
  for (int t = 1; t <= t_max; ++t) {
    const auto s = generalized_inverse(g, t, s_max);
    if (!s) throw Error(ErrorCode::EnvelopeBounded, "gap envelope never reaches " + std::to_string(t));
    h[static_cast<std::size_t>(t)] = *s;
  }
  return assemble(std::move(h));
}

DepthFunction design_depth_function(const std::vector<double>& table, int t_max) {
  if (t_max < 0) throw Error(ErrorCode::InvalidInput, "negative design range");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i] < table[i - 1]) throw Error(ErrorCode::InvalidInput, "gap envelope must be nondecreasing");
  }
  std::vector<double> h(static_cast<std::size_t>(t_max) + 1, 1.0);
  for (int t = 1; t <= t_max; ++t) {
    auto it = std::find_if(table.begin(), table.end(), [&](double v) { return std::isfinite(v) && v >= t; });
    if (it == table.end()) throw Error(ErrorCode::EnvelopeBounded, "gap table never reaches " + std::to_string(t));
    h[static_cast<std::size_t>(t)] = std::max<double>(1.0, static_cast<double>(it - table.begin()));
  }
  return assemble(std::move(h));
}

}  // namespace relanosov
