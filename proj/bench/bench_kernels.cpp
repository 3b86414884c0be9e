// Serial references against their OpenMP versions on the same inputs.
// Arg(0) runs the serial kernel, Arg(1) the parallel one.
#include <benchmark/benchmark.h>

#include <random>

#include "relanosov/cusped.hpp"
#include "relanosov/dynamics.hpp"
#include "relanosov/gallery.hpp"
#include "relanosov/kernels.hpp"

using namespace relanosov;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

const CuspedGraph& cusped_ball() {
  static const CuspedGraph x = [] {
    const auto item = make_cusped_free_group();
    return build_cusped_graph(item.group, 4, DepthFunction::exponential(2.0), -1);
  }();
  return x;
}

// Small enough that the quartic sweep finishes in well under a second.
const DistanceMatrix& small_distances() {
  static const DistanceMatrix d = all_pairs_distances(path_graph(60), Exec::Serial);
  return d;
}

const std::vector<Word>& sphere_words() {
  static const std::vector<Word> w = enumerate_sphere(make_direct_sum(make_cusped_free_group(), make_schottky()).group, 6);
  return w;
}

const std::vector<Flag>& random_flags() {
  static const std::vector<Flag> flags = [] {
    const auto item = make_schottky();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> letter(0, 3);
    const Letter letters[] = {1, -1, 2, -2};
    std::vector<Flag> out;
    while (out.size() < 400) {
      std::vector<Letter> w;
      for (int i = 0; i < 12; ++i) w.push_back(letters[letter(rng)]);
      const Word word = item.group.normal_form(Word(w));
      if (word.size() < 6) continue;
      out.push_back(limit_flag(singular_data(evaluate(item.group, word)), item.k));
    }
    return out;
  }();
  return flags;
}

void BM_all_pairs_distances(benchmark::State& state) {
  const auto& x = cusped_ball();
  for (auto _ : state) benchmark::DoNotOptimize(all_pairs_distances(x.graph, exec_of(state)));
  state.counters["vertices"] = x.graph.size();
}

void BM_max_four_point_exhaustive(benchmark::State& state) {
  const auto& d = small_distances();
  for (auto _ : state) benchmark::DoNotOptimize(max_four_point_exhaustive(d, exec_of(state)));
}

void BM_log_gaps(benchmark::State& state) {
  const auto g = make_direct_sum(make_cusped_free_group(), make_schottky()).group;
  const auto& words = sphere_words();
  for (auto _ : state) benchmark::DoNotOptimize(log_gaps(g, words, 2, exec_of(state)));
  state.counters["words"] = static_cast<double>(words.size());
}

void BM_pairwise_flag_distances(benchmark::State& state) {
  const auto& flags = random_flags();
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_flag_distances(flags, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_all_pairs_distances)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_max_four_point_exhaustive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_log_gaps)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pairwise_flag_distances)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
