#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relanosov/dynamics.hpp"
#include "relanosov/flags.hpp"
#include "relanosov/group.hpp"
#include "relanosov/horoball.hpp"
#include "relanosov/kernels.hpp"

namespace relanosov {

// ---- divergence -----------------------------------------------------------

struct ShellRecord {
  int radius = 0;
  std::size_t count = 0;
  std::size_t skipped = 0;  // evaluation failures
  double min = 0.0, median = 0.0, max = 0.0;
};

enum class DivergenceVerdict { DivergentConsistent, NotDivergent };
std::string to_string(DivergenceVerdict v);

struct DivergenceReport {
  int k = 1;
  double threshold = std::log(10.0);
  std::vector<ShellRecord> shells;  // radii 1..r_max
  // Smallest radius from which shell minima never decrease.
  int nondecreasing_from = 0;
  DivergenceVerdict verdict = DivergenceVerdict::NotDivergent;
};

// Divergent-consistent iff the shell minima are nondecreasing from radius
// ceil(r_max / 2) on and the last minimum exceeds the threshold.
DivergenceReport certify_divergence(const MarkedGroup& g, int k, int r_max, double threshold = std::log(10.0),
                                    Exec exec = Exec::Parallel);

// ---- weak domination ------------------------------------------------------

struct DominationFit {
  double c = 0.0;      // fitted rate
  double log_C = 0.0;  // intercept, calibrated so the calibration samples sit on or above the line
  double r2 = 0.0;     // of the ordinary least-squares line
  double slack = 0.05;
  int violations = 0;
  int samples = 0;
  double loglog_slope = 0.0;  // growth exponent of y against x, upper half of the x range
  bool linear = true;
  std::vector<double> x, y;   // |gamma|_X and log(sigma_k / sigma_{k+1})
};

// c from OLS of y on x. log C is the smallest value making every
// even-indexed (calibration) sample satisfy y >= c x - log C; a sample
// violates when y < (1 - slack) c x - log C. A nonpositive rate admits no
// domination at all, so every sample counts as a violation. The linearity
// flag compares the log-log growth exponent with 1 (within 0.25); it is
// descriptive only, since superlinear growth still dominates.
DominationFit fit_domination_samples(std::vector<double> x, std::vector<double> y, double slack = 0.05);

// Samples c^n for n = 1..n_max with |c^n|_X from the peripheral horoball.
DominationFit fit_weak_domination(const MarkedGroup& g, const PeripheralSubgroup& p, int k,
                                  const DepthFunction& f, int n_max, double slack = 0.05);

// ---- flow probe -----------------------------------------------------------

struct FlowProbe {
  std::vector<double> gaps;  // prefix lengths 1..|path|
  double slope = 0.0, intercept = 0.0;
};

FlowProbe probe_flow_domination(const MarkedGroup& g, const Word& path, int k);

// ---- limit set and fibers -------------------------------------------------

struct SamplerSpec {
  int rays = 8;                   // random conical rays
  int ray_length = 16;            // sampled at ray_length/2, 3/4 and full
  // Rays differ from each other, and from the sampled parabolic points
  // gamma c^(+-inf), within their first ray_separation letters. Nearby
  // boundary points have nearly non-transverse flags, which says nothing.
  int ray_separation = 4;
  std::vector<long long> peripheral_n{1LL << 24, 1LL << 26, 1LL << 28, 1LL << 30};
  std::vector<Word> conjugators{Word{}};  // gamma for gamma P gamma^-1
  // Extra labelled elements sampled as given (e.g. long powers a^n).
  std::vector<std::pair<std::string, Word>> words;
  std::uint64_t seed = 1;
  double gap_tol = kDefaultGapTol;
};

struct LimitSample {
  Flag flag;
  std::string label;   // boundary point
  std::string source;  // "ray" or "peripheral"
  Word word;           // generating word (the conjugator for peripheral samples)
  long long n = 0;     // signed power for peripheral samples, prefix length for rays
};

struct LimitSampleSet {
  std::vector<LimitSample> samples;
  int skipped = 0;  // elements without a gap
};

// Conical rays are random normal-form words that never end in a peripheral
// power c^{+-4}. Peripheral samples use the flag of c^n pushed forward by
// rho(gamma), which is the limit of the flags of gamma c^n gamma^-1; the
// label names the coset gamma P by its shortest representative, so
// conjugators in the same coset share a label.
LimitSampleSet sample_limit_set(const MarkedGroup& g, int k, const SamplerSpec& spec);

struct FiberReport {
  std::string label;
  std::vector<Flag> flags;  // canonical order
  std::vector<int> cluster;
  int cardinality = 0;
  double max_intra = 0.0;
  double min_inter = 0.0;  // inf when there is one cluster
  bool low_confidence = false;  // a single sample
  bool parabolic = false;
};

// Groups samples by label (labels and flags sorted canonically first) and
// clusters each group.
std::vector<FiberReport> analyze_fibers(const LimitSampleSet& samples, double cluster_radius = 0.05);

struct TransversalityAudit {
  double min_margin = 1.0;
  std::string label_a, label_b;
  int flag_a = -1, flag_b = -1;
};

// Minimum margin over flag pairs with distinct labels. InsufficientLabels
// with fewer than two labels.
TransversalityAudit audit_transversality(const std::vector<FiberReport>& reports);

// ---- dynamics preservation ------------------------------------------------

struct DynamicsReport {
  Subspace limit_v;  // V_0
  Subspace limit_w;  // W_0
  std::vector<std::vector<double>> distances;  // per sample, per step
  std::vector<double> margins;                 // of each sample against W_0
  bool pass = false;
};

// V_0 defaults to U_k of the last element and W_0 to U_{d-k} of its inverse.
// Samples closer to W_0 than `margin` raise NotTransverse. Passes iff every
// sample ends below 1e-3 and decreases over the last half of the steps.
DynamicsReport test_dynamics_preserving(const std::vector<BlockProduct>& sequence,
                                        const std::vector<Subspace>& samples, int k,
                                        std::optional<Subspace> limit_v = std::nullopt,
                                        double margin = 0.05);
DynamicsReport test_dynamics_preserving(const MarkedGroup& g, const std::vector<Word>& sequence,
                                        const std::vector<Subspace>& samples, int k, double margin = 0.05);

// ---- perturbation ---------------------------------------------------------

// Generators linked by a non-letter peripheral word (like a^-1 b) form one
// group and share a single conjugator, which keeps every peripheral in its
// conjugacy class; a lone letter peripheral gets its own conjugator;
// generators in no peripheral are perturbed additively and renormalized.
// Every perturbation has operator norm at most `magnitude`.
MarkedGroup perturb_type_preserving(const MarkedGroup& g, double magnitude, std::uint64_t seed);

}  // namespace relanosov
