#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relanosov/graph.hpp"
#include "relanosov/group.hpp"
#include "relanosov/horoball.hpp"

namespace relanosov {

// A horoball glued onto one peripheral coset piece of the Cayley ball.
struct HoroballPiece {
  int peripheral = 0;            // index into g.peripherals()
  std::vector<int> base;         // ball vertices on level 0
  int levels = 0;
  std::vector<int> level_start;  // first vertex id of level k (k >= 1), base order
};

// Truncated cusped space: the Cayley ball of radius R plus a horoball of
// depth L over every peripheral coset piece inside the ball that has at
// least two elements. Level 0 of each horoball is the piece itself.
struct CuspedGraph {
  Graph graph;
  int radius = 0;
  std::vector<Word> words;  // element word of every vertex (base word for horoball vertices)
  std::vector<int> level;   // 0 for ball vertices
  std::vector<int> piece;   // -1 for ball vertices
  std::vector<HoroballPiece> pieces;
  std::unordered_map<Word, int, WordHash> index;  // ball vertices only

  int ball_size() const noexcept { return static_cast<int>(index.size()); }
};

// L < 0 picks the default truncation per piece. Pieces are the connected
// components of g ~ g*s for the peripheral generators s of each peripheral
// subgroup; the horoball base metric is the word metric in those
// generators, so a non-letter generator like a^-1 b adds level-0 edges.
CuspedGraph build_cusped_graph(const MarkedGroup& g, int R, const DepthFunction& f, int L);

// |gamma|_X. Powers of a cyclic peripheral generator are measured inside
// their own horoball (truncated deep enough to be exact); everything else by
// BFS in the truncated cusped graph, an upper bound that can only improve as
// R and L grow. TruncationTooSmall when gamma lies outside the ball.
double cusped_norm(const MarkedGroup& g, const Word& gamma, const DepthFunction& f, int R, int L);
// Graph-only variant on a prebuilt space.
int cusped_distance(const CuspedGraph& x, const Word& gamma, const MarkedGroup& g);

// n with gamma = c^n for the cyclic peripheral generator c, if any (|n| <= |gamma|).
std::optional<long long> peripheral_exponent(const MarkedGroup& g, const PeripheralSubgroup& p,
                                             const Word& gamma);

struct LogDistortionFit {
  double lambda = 0.0;    // slope
  double epsilon = 0.0;   // intercept
  double max_residual = 0.0;
  int samples = 0;
  bool degenerate = false;  // fewer than two distinct abscissae
  std::vector<double> x;    // log+_2 |c^n|_S
  std::vector<double> y;    // |c^n|_X
};

// Least squares of |c^n|_X against log+_2 |c^n|_S for n = 1..n_max.
LogDistortionFit check_log_distortion(const MarkedGroup& g, const PeripheralSubgroup& p,
                                      const DepthFunction& f, int n_max);

// Gromov four-point estimate: exhaustive below 200 vertices, otherwise the
// maximum over `samples` seeded random quadruples. Disconnected if the graph
// is not connected.
double estimate_delta(const Graph& graph, std::size_t samples = 100000, std::uint64_t seed = 1);

}  // namespace relanosov
