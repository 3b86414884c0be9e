#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relanosov/graph.hpp"

namespace relanosov {

// Depth function f on nonnegative integers: either base^t or a finite
// table. f(0) = 1 and f nondecreasing are enforced.
class DepthFunction {
 public:
  static DepthFunction exponential(double base = 2.0);
  static DepthFunction table(std::vector<double> values);

  // Throws DomainExceeded past the end of a table.
  double operator()(int t) const;
  // floor(f(t)) as used by the horizontal edge rule, saturated.
  long long reach(int t) const;

  bool is_table() const noexcept { return !values_.empty(); }
  // Number of tabulated levels, or nullopt for a closed form.
  std::optional<int> domain() const;
  double base() const noexcept { return base_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::string describe() const;

 private:
  double base_ = 2.0;
  std::vector<double> values_;
};

struct Admissibility {
  bool admissible = true;
  int s = -1, t = -1;  // first violation, scanning s outer and t inner (t >= 1)
  double lhs = 0.0, rhs = 0.0;
};

// f(s + t) >= 2^t f(s) for 0 <= s <= s_max, 1 <= t <= t_max.
Admissibility check_depth_admissible(const DepthFunction& f, int s_max, int t_max);

// Combinatorial horoball over T, levels 0..L. Vertex (v, k) has id k * |T| + v.
struct HoroballGraph {
  Graph graph;
  int base_size = 0;
  int levels = 0;  // L

  int vertex(int v, int k) const { return k * base_size + v; }
  int base_of(int id) const { return id % base_size; }
  int level_of(int id) const { return id / base_size; }
};

// Throws InvalidInput when T is not connected or L < 0.
HoroballGraph build_horoball(const Graph& T, const DepthFunction& f, int L);

// Throws Disconnected when no path exists.
int horoball_distance(const HoroballGraph& h, int a, int b);

// min{k : f(k) >= diameter} + 1; DomainExceeded if a table never gets there.
int default_truncation(const DepthFunction& f, int diameter);

// |c^n|_X for n = 0..n_max inside the horoball over the path of powers of a
// peripheral generator: the distance (0,0) -> (n,0) in H_f(path 0..n_max).
// Paths can be clamped to [0, n] without getting longer, so this equals the
// distance in the horoball over 0..n.
std::vector<int> peripheral_norms(const DepthFunction& f, int n_max);

// f(t) = max(2 f(t-1), min{s : g(s) >= t}), f(0) = 1, for t = 0..t_max. The
// envelope is clamped below at 0 (non-finite values count as 0). Searches s
// up to s_max; EnvelopeBounded if g never reaches t there.
DepthFunction design_depth_function(const std::function<double(double)>& g, int t_max,
                                    double s_max = 1e300);
// Table version: g(s) = table[s].
DepthFunction design_depth_function(const std::vector<double>& table, int t_max);

}  // namespace relanosov
