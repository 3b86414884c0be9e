#include "relanosov/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "relanosov/dynamics.hpp"
#include "relanosov/error.hpp"

namespace relanosov {

DistanceMatrix all_pairs_distances(const Graph& g, Exec exec) {
  DistanceMatrix out;
  out.n = g.size();
  out.d.assign(static_cast<std::size_t>(out.n) * out.n, kUnreachable);
  auto row = [&](int s) {
    const auto dist = bfs_distances(g, s);
    std::copy(dist.begin(), dist.end(), out.d.begin() + static_cast<std::ptrdiff_t>(s) * out.n);
  };
  if (exec == Exec::Serial) {
    for (int s = 0; s < out.n; ++s) row(s);
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (int s = 0; s < out.n; ++s) row(s);
  }
  return out;
}

double four_point_defect(const DistanceMatrix& d, int x, int y, int z, int w) {
  std::array<int, 3> s{d(x, y) + d(z, w), d(x, z) + d(y, w), d(x, w) + d(y, z)};
  std::sort(s.begin(), s.end());
  return 0.5 * (s[2] - s[1]);
}

double max_four_point_exhaustive(const DistanceMatrix& d, Exec exec) {
  const int n = d.n;
  double best = 0.0;
  auto scan_row = [&](int i) {
    double local = 0.0;
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) local = std::max(local, four_point_defect(d, i, j, k, l));
    return local;
  };
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) best = std::max(best, scan_row(i));
  } else {
#pragma omp parallel for schedule(dynamic, 1) reduction(max : best)
    for (int i = 0; i < n; ++i) best = std::max(best, scan_row(i));
  }
  return best;
}

double max_four_point_sampled(const DistanceMatrix& d, const std::vector<std::array<int, 4>>& quads,
                              Exec exec) {
  double best = 0.0;
  const auto m = static_cast<std::ptrdiff_t>(quads.size());
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const auto& q = quads[static_cast<std::size_t>(i)];
      best = std::max(best, four_point_defect(d, q[0], q[1], q[2], q[3]));
    }
  } else {
#pragma omp parallel for schedule(static) reduction(max : best)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const auto& q = quads[static_cast<std::size_t>(i)];
      best = std::max(best, four_point_defect(d, q[0], q[1], q[2], q[3]));
    }
  }
  return best;
}

std::vector<double> log_gaps(const MarkedGroup& g, const std::vector<Word>& words, int k, Exec exec) {
  std::vector<double> out(words.size(), std::numeric_limits<double>::quiet_NaN());
  const auto m = static_cast<std::ptrdiff_t>(words.size());
  auto one = [&](std::ptrdiff_t i) {
    try {
      out[static_cast<std::size_t>(i)] = singular_data(evaluate_blocks(g, words[static_cast<std::size_t>(i)])).log_gap(k);
    } catch (const Error&) {
      // left as NaN; callers count these as skipped
    }
  };
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < m; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < m; ++i) one(i);
  }
  return out;
}

std::vector<double> pairwise_flag_distances(const std::vector<Flag>& flags, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(flags.size());
  std::vector<double> out(static_cast<std::size_t>(n * n), 0.0);
  auto row = [&](std::ptrdiff_t i) {
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      const double v = flag_distance(flags[static_cast<std::size_t>(i)], flags[static_cast<std::size_t>(j)]);
      out[static_cast<std::size_t>(i * n + j)] = v;
      out[static_cast<std::size_t>(j * n + i)] = v;
    }
  };
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) row(i);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) row(i);
  }
  return out;
}

int available_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace relanosov
