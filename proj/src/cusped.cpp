#include "relanosov/cusped.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "relanosov/error.hpp"
#include "relanosov/kernels.hpp"

namespace relanosov {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

int diameter(const Graph& t) {
  int best = 0;
  for (int v = 0; v < t.size(); ++v) {
    const auto d = bfs_distances(t, v);
    best = std::max(best, *std::max_element(d.begin(), d.end()));
  }
  return best;
}

}  // namespace

CuspedGraph build_cusped_graph(const MarkedGroup& g, int R, const DepthFunction& f, int L) {
  if (R < 0) throw Error(ErrorCode::InvalidInput, "negative ball radius");
  CuspedGraph x;
  x.radius = R;
  for (int r = 0; r <= R; ++r) {
    for (auto& w : enumerate_sphere(g, r)) {
      x.index.emplace(w, static_cast<int>(x.words.size()));
      x.words.push_back(std::move(w));
    }
  }
  const int n = static_cast<int>(x.words.size());
  x.level.assign(static_cast<std::size_t>(n), 0);
  x.piece.assign(static_cast<std::size_t>(n), -1);
  x.graph = Graph(n);

  auto lookup = [&](const Word& w, const Word& s) {
    auto it = x.index.find(g.normal_form(concat(w, s)));
    return it == x.index.end() ? -1 : it->second;
  };
  for (int v = 0; v < n; ++v)
    for (int i = 1; i <= g.rank(); ++i)
      for (Letter l : {i, -i}) {
        const int u = lookup(x.words[v], Word{l});
        if (u >= 0) x.graph.add_edge(v, u);
      }

  const auto& periph = g.peripherals();
  for (int pi = 0; pi < static_cast<int>(periph.size()); ++pi) {
    UnionFind uf(n);
    std::vector<std::pair<int, int>> links;
    for (int v = 0; v < n; ++v)
      for (const Word& s : periph[pi].generators()) {
        const int u = lookup(x.words[v], s);
        if (u >= 0 && u != v) {
          uf.unite(v, u);
          links.emplace_back(v, u);
        }
      }
    std::vector<std::vector<int>> comps(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) comps[uf.find(v)].push_back(v);
    std::vector<int> local(static_cast<std::size_t>(n), -1);
    std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
    std::vector<Graph> bases;
    std::vector<int> piece_ids;
    for (int root = 0; root < n; ++root) {
      const auto& members = comps[root];
      if (members.size() < 2) continue;
      for (std::size_t i = 0; i < members.size(); ++i) {
        local[members[i]] = static_cast<int>(i);
        comp_of[members[i]] = static_cast<int>(bases.size());
      }
      bases.emplace_back(static_cast<int>(members.size()));
      HoroballPiece p;
      p.peripheral = pi;
      p.base = members;
      piece_ids.push_back(static_cast<int>(x.pieces.size()));
      x.pieces.push_back(std::move(p));
    }
    for (const auto& [v, u] : links) {
      if (comp_of[v] >= 0) bases[comp_of[v]].add_edge(local[v], local[u]);
    }
    for (std::size_t c = 0; c < bases.size(); ++c) {
      bases[c].normalize();
      auto& piece = x.pieces[piece_ids[c]];
      const int depth = L >= 0 ? L : default_truncation(f, std::max(1, diameter(bases[c])));
      const HoroballGraph h = build_horoball(bases[c], f, depth);
      piece.levels = depth;
      const int m = h.base_size;
      auto global = [&](int id) {
        const int k = h.level_of(id);
        return k == 0 ? piece.base[h.base_of(id)] : piece.level_start[k - 1] + h.base_of(id);
      };
      for (int k = 1; k <= depth; ++k) {
        piece.level_start.push_back(x.graph.size());
        for (int i = 0; i < m; ++i) {
          x.graph.add_vertex();
          x.words.push_back(x.words[piece.base[i]]);
          x.level.push_back(k);
          x.piece.push_back(piece_ids[c]);
        }
      }
      for (const auto& [a, b] : h.graph.edges()) x.graph.add_edge(global(a), global(b));
    }
  }
  x.graph.normalize();
  return x;
}

int cusped_distance(const CuspedGraph& x, const Word& gamma, const MarkedGroup& g) {
  const auto target = x.index.find(g.normal_form(gamma));
  if (target == x.index.end()) {
    throw Error(ErrorCode::TruncationTooSmall, to_string(gamma) + " lies outside the ball of radius " +
                                                   std::to_string(x.radius));
  }
  return graph_distance(x.graph, x.index.at(Word{}), target->second);
}

std::optional<long long> peripheral_exponent(const MarkedGroup& g, const PeripheralSubgroup& p,
                                             const Word& gamma) {
  if (!p.is_cyclic()) return std::nullopt;
  const Word target = g.normal_form(gamma);
  if (target.empty()) return 0;
  const Word& c = p.generator();
  const auto bound = static_cast<long long>(target.size());
  for (long long n = 1; n <= bound; ++n) {
    if (g.normal_form(power(c, n)) == target) return n;
    if (g.normal_form(power(c, -n)) == target) return -n;
  }
  return std::nullopt;
}

double cusped_norm(const MarkedGroup& g, const Word& gamma, const DepthFunction& f, int R, int L) {
  if (R < 0 || L < 0) throw Error(ErrorCode::InvalidInput, "truncation parameters must be nonnegative");
  const Word w = g.normal_form(gamma);
  if (w.empty()) return 0.0;
  for (const auto& p : g.peripherals()) {
    if (auto n = peripheral_exponent(g, p, w)) {
      const int m = static_cast<int>(std::llabs(*n));
      return peripheral_norms(f, m)[static_cast<std::size_t>(m)];
    }
  }
  if (static_cast<int>(w.size()) > R) {
    throw Error(ErrorCode::TruncationTooSmall, to_string(w) + " lies outside the ball of radius " +
                                                   std::to_string(R));
  }
  return cusped_distance(build_cusped_graph(g, R, f, L), w, g);
}

LogDistortionFit check_log_distortion(const MarkedGroup& g, const PeripheralSubgroup& p,
                                      const DepthFunction& f, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidInput, "n_max must be at least 1");
  const Word& c = p.generator();
  const auto norms = peripheral_norms(f, n_max);
  LogDistortionFit fit;
  for (int n = 1; n <= n_max; ++n) {
    const auto len = static_cast<double>(g.normal_form(power(c, n)).size());
    fit.x.push_back(len > 1.0 ? std::log2(len) : 0.0);
    fit.y.push_back(static_cast<double>(norms[static_cast<std::size_t>(n)]));
  }
  fit.samples = n_max;
  const double N = n_max;
  const double mx = std::accumulate(fit.x.begin(), fit.x.end(), 0.0) / N;
  const double my = std::accumulate(fit.y.begin(), fit.y.end(), 0.0) / N;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n_max; ++i) {
    sxx += (fit.x[i] - mx) * (fit.x[i] - mx);
    sxy += (fit.x[i] - mx) * (fit.y[i] - my);
  }
  if (n_max < 2 || sxx <= 0.0) {
    fit.degenerate = true;
    fit.epsilon = my;
  } else {
    fit.lambda = sxy / sxx;
    fit.epsilon = my - fit.lambda * mx;
  }
  for (int i = 0; i < n_max; ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(fit.y[i] - fit.lambda * fit.x[i] - fit.epsilon));
  }
  return fit;
}

double estimate_delta(const Graph& graph, std::size_t samples, std::uint64_t seed) {
  if (graph.size() == 0) return 0.0;
  if (!is_connected(graph)) throw Error(ErrorCode::Disconnected, "delta needs a connected graph");
  if (graph.size() < 4) return 0.0;
  const DistanceMatrix d = all_pairs_distances(graph);
  if (graph.size() < 200) return max_four_point_exhaustive(d);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, graph.size() - 1);
  std::vector<std::array<int, 4>> quads(samples);
  for (auto& q : quads)
    for (int& v : q) v = pick(rng);
  return max_four_point_sampled(d, quads);
}

}  // namespace relanosov
