#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "relanosov/flags.hpp"
#include "relanosov/graph.hpp"
#include "relanosov/group.hpp"

namespace relanosov {

// The hot loops, each with a serial reference and an OpenMP version that
// must agree with it exactly. Parallel results are written to fixed slots
// or reduced with max/min, so they do not depend on scheduling.
enum class Exec { Serial, Parallel };

// Row-major n x n hop distances, kUnreachable for disconnected pairs.
struct DistanceMatrix {
  int n = 0;
  std::vector<int> d;

  int operator()(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
};

DistanceMatrix all_pairs_distances(const Graph& g, Exec exec = Exec::Parallel);

// Four-point defect (largest pair sum minus the middle one, halved).
double four_point_defect(const DistanceMatrix& d, int x, int y, int z, int w);

// Maximum defect over all quadruples i < j < k < l.
double max_four_point_exhaustive(const DistanceMatrix& d, Exec exec = Exec::Parallel);
// Maximum defect over the given quadruples.
double max_four_point_sampled(const DistanceMatrix& d, const std::vector<std::array<int, 4>>& quads,
                              Exec exec = Exec::Parallel);

// log(sigma_k / sigma_{k+1}) for each word; NaN where the evaluation fails.
std::vector<double> log_gaps(const MarkedGroup& g, const std::vector<Word>& words, int k,
                             Exec exec = Exec::Parallel);

// Symmetric matrix of flag_distance, row-major.
std::vector<double> pairwise_flag_distances(const std::vector<Flag>& flags, Exec exec = Exec::Parallel);

// Number of OpenMP threads a Parallel call would use.
int available_threads();
void set_threads(int n);

}  // namespace relanosov
