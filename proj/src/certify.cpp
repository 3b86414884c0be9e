#include "relanosov/certify.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "relanosov/error.hpp"

namespace relanosov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_k(int k, int d) {
  if (k < 1 || 2 * k > d) throw Error(ErrorCode::InvalidInput, "need 1 <= k <= d/2");
}

struct Line {
  double slope = 0.0, intercept = 0.0;
};

Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.empty()) return {};
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return {0.0, my};
  return {sxy / sxx, my - sxy / sxx * mx};
}

Subspace orthonormal_image(const Matrix& m, const Subspace& v) {
  const Matrix basis = graded_column_basis(m * v.frame());
  if (basis.cols() != v.dim()) throw Error(ErrorCode::NumericalFailure, "image lost rank");
  return Subspace(basis);
}

Flag push_forward(const Matrix& m, const Flag& f) {
  return Flag{orthonormal_image(m, f.V), orthonormal_image(m, f.W)};
}

}  // namespace

std::string to_string(DivergenceVerdict v) {
  return v == DivergenceVerdict::DivergentConsistent ? "divergent-consistent" : "not-divergent";
}

DivergenceReport certify_divergence(const MarkedGroup& g, int k, int r_max, double threshold, Exec exec) {
  require_k(k, g.dim());
  if (r_max < 1) throw Error(ErrorCode::InvalidInput, "r_max must be at least 1");
  DivergenceReport rep;
  rep.k = k;
  rep.threshold = threshold;
  for (int r = 1; r <= r_max; ++r) {
    const auto words = enumerate_sphere(g, r);
    const auto gaps = log_gaps(g, words, k, exec);
    ShellRecord s;
    s.radius = r;
    s.count = words.size();
    std::vector<double> ok;
    for (double v : gaps) {
      if (std::isfinite(v)) {
        ok.push_back(v);
      } else {
        ++s.skipped;
      }
    }
    std::sort(ok.begin(), ok.end());
    if (ok.empty()) {
      s.min = s.median = s.max = std::numeric_limits<double>::quiet_NaN();
    } else {
      s.min = ok.front();
      s.max = ok.back();
      const std::size_t m = ok.size() / 2;
      s.median = ok.size() % 2 ? ok[m] : 0.5 * (ok[m - 1] + ok[m]);
    }
    rep.shells.push_back(s);
  }
  int from = r_max;
  // Equal minima reached along different words differ by a few ulps.
  auto no_drop = [](double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); };
  while (from > 1 && no_drop(rep.shells[from - 2].min, rep.shells[from - 1].min)) --from;
  rep.nondecreasing_from = from;
  const int required = (r_max + 1) / 2;
  const double last = rep.shells.back().min;
  rep.verdict = (from <= required && last > threshold) ? DivergenceVerdict::DivergentConsistent
                                                      : DivergenceVerdict::NotDivergent;
  return rep;
}

DominationFit fit_domination_samples(std::vector<double> x, std::vector<double> y, double slack) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x and y differ in length");
  DominationFit fit;
  fit.slack = slack;
  fit.samples = static_cast<int>(x.size());
  const Line line = ols(x, y);
  fit.c = line.slope;

  const double my = y.empty() ? 0.0 : std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - line.slope * x[i] - line.intercept;
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);

  fit.log_C = -kInf;
  for (std::size_t i = 0; i < x.size(); i += 2) fit.log_C = std::max(fit.log_C, fit.c * x[i] - y[i]);
  if (x.empty()) fit.log_C = 0.0;
  if (fit.c <= 1e-9) {
    fit.violations = fit.samples;
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (y[i] < (1.0 - slack) * fit.c * x[i] - fit.log_C) ++fit.violations;
    }
  }

  // Growth exponent over the upper half of the x range, where additive
  // offsets no longer bend the log-log line.
  std::vector<double> pos;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) pos.push_back(x[i]);
  double x_mid = 0.0;
  if (!pos.empty()) {
    const auto [lo, hi] = std::minmax_element(pos.begin(), pos.end());
    x_mid = 0.5 * (*lo + *hi);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && x[i] >= x_mid) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const bool spread = lx.size() >= 2 && *std::max_element(lx.begin(), lx.end()) > *std::min_element(lx.begin(), lx.end());
  fit.loglog_slope = spread ? ols(lx, ly).slope : 0.0;
  fit.linear = spread && std::abs(fit.loglog_slope - 1.0) <= 0.25;
  fit.x = std::move(x);
  fit.y = std::move(y);
  return fit;
}

DominationFit fit_weak_domination(const MarkedGroup& g, const PeripheralSubgroup& p, int k,
                                  const DepthFunction& f, int n_max, double slack) {
  if (k < 1 || k >= g.dim()) throw Error(ErrorCode::InvalidInput, "gap index out of range");
  if (n_max < 1) throw Error(ErrorCode::InvalidInput, "n_max must be at least 1");
  const Word& c = p.generator();
  const auto norms = peripheral_norms(f, n_max);
  const BlockProduct base = evaluate_blocks(g, c);
  std::vector<double> x, y;
  for (int n = 1; n <= n_max; ++n) {
    x.push_back(norms[static_cast<std::size_t>(n)]);
    y.push_back(singular_data(power(base, n)).log_gap(k));
  }
  return fit_domination_samples(std::move(x), std::move(y), slack);
}

FlowProbe probe_flow_domination(const MarkedGroup& g, const Word& path, int k) {
  if (k < 1 || k >= g.dim()) throw Error(ErrorCode::InvalidInput, "gap index out of range");
  FlowProbe out;
  BlockProduct acc = evaluate_blocks(g, Word{});
  int since = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const bool renorm = ++since == 8;
    append_letter(acc, g, path[i], renorm);
    if (renorm) since = 0;
    double gap = std::numeric_limits<double>::quiet_NaN();
    try {
      gap = singular_data(acc).log_gap(k);
    } catch (const Error&) {
    }
    out.gaps.push_back(gap);
    if (std::isfinite(gap)) {
      xs.push_back(static_cast<double>(i + 1));
      ys.push_back(gap);
    }
  }
  const Line line = ols(xs, ys);
  out.slope = line.slope;
  out.intercept = line.intercept;
  return out;
}

namespace {

bool has_gaps(const SingularData& s, int k, double tol) {
  const int d = s.dim();
  return s.log_gap(k) > tol && s.log_gap(d - k) > tol;
}

// Shortest word in the coset gamma <c>.
Word coset_representative(const MarkedGroup& g, const Word& gamma, const Word& c) {
  Word best = g.normal_form(gamma);
  const auto span = static_cast<long long>(best.size()) + 1;
  for (long long j = -span; j <= span; ++j) {
    const Word w = g.normal_form(concat(gamma, power(c, j)));
    if (w.size() < best.size() || (w.size() == best.size() && w < best)) best = w;
  }
  return best;
}

}  // namespace

LimitSampleSet sample_limit_set(const MarkedGroup& g, int k, const SamplerSpec& spec) {
  require_k(k, g.dim());
  LimitSampleSet out;
  auto add = [&](const BlockProduct& m, LimitSample proto, const Matrix* push) {
    const SingularData s = singular_data(m);
    if (!has_gaps(s, k, spec.gap_tol)) {
      ++out.skipped;
      return;
    }
    Flag f = limit_flag(s, k, spec.gap_tol);
    if (push) f = push_forward(*push, f);
    proto.flag = std::move(f);
    out.samples.push_back(std::move(proto));
  };

  std::vector<Word> suffixes;
  for (const auto& p : g.peripherals()) {
    if (!p.is_cyclic()) continue;
    for (long long e : {4LL, -4LL}) suffixes.push_back(g.normal_form(power(p.generator(), e)));
  }
  auto reject = [&](const Word& w) {
    for (const auto& s : suffixes) {
      if (s.size() <= w.size() && std::equal(s.begin(), s.end(), w.end() - static_cast<std::ptrdiff_t>(s.size())))
        return true;
    }
    return false;
  };
  // Words the rays must branch away from early: the parabolic directions
  // that get sampled, then every accepted ray.
  std::vector<Word> taken;
  for (const auto& p : g.peripherals()) {
    if (!p.is_cyclic()) continue;
    for (const Word& gamma : spec.conjugators)
      for (long long e : {1LL, -1LL})
        taken.push_back(g.normal_form(concat(gamma, power(p.generator(), e * spec.ray_length))));
  }
  auto shared = [](const Word& a, const Word& b) {
    return static_cast<int>(std::mismatch(a.begin(), a.end(), b.begin(), b.end()).first - a.begin());
  };
  std::mt19937_64 rng(spec.seed);
  for (int r = 0; r < spec.rays; ++r) {
    Word ray;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10000) {
        throw Error(ErrorCode::InvalidInput, "cannot place " + std::to_string(spec.rays) + " rays separated at " +
                                                 std::to_string(spec.ray_separation) + " letters");
      }
      ray = random_normal_form(g, Word{}, static_cast<std::size_t>(spec.ray_length), rng, reject);
      if (spec.ray_separation <= 0 ||
          std::none_of(taken.begin(), taken.end(),
                       [&](const Word& t) { return shared(ray, t) >= spec.ray_separation; }))
        break;
    }
    taken.push_back(ray);
    const std::string label = "ray:" + to_string(ray);
    std::vector<int> lengths{spec.ray_length / 2, (3 * spec.ray_length) / 4, spec.ray_length};
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    for (int len : lengths) {
      if (len < 1) continue;
      const Word prefix(std::vector<Letter>(ray.begin(), ray.begin() + len));
      add(evaluate_blocks(g, prefix), LimitSample{Flag{}, label, "ray", prefix, len}, nullptr);
    }
  }

  for (const auto& p : g.peripherals()) {
    if (!p.is_cyclic()) continue;
    const Word& c = p.generator();
    const BlockProduct base = evaluate_blocks(g, c);
    std::vector<Word> seen;
    for (const Word& gamma : spec.conjugators) {
      const Word rep = coset_representative(g, gamma, c);
      if (std::find(seen.begin(), seen.end(), rep) != seen.end()) continue;
      seen.push_back(rep);
      const std::string label = p.label() + "@" + to_string(rep);
      const Matrix push = evaluate(g, rep).value();
      for (long long n : spec.peripheral_n)
        for (long long sign : {1LL, -1LL}) {
          add(power(base, sign * n), LimitSample{Flag{}, label, "peripheral", rep, sign * n},
              rep.empty() ? nullptr : &push);
        }
    }
  }

  for (const auto& [label, w] : spec.words) {
    add(evaluate_blocks(g, g.normal_form(w)), LimitSample{Flag{}, label, "word", w, static_cast<long long>(w.size())},
        nullptr);
  }
  return out;
}

std::vector<FiberReport> analyze_fibers(const LimitSampleSet& set, double cluster_radius) {
  std::vector<const LimitSample*> order;
  for (const auto& s : set.samples) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const LimitSample* a, const LimitSample* b) {
    return std::tie(a->label, a->source, a->word, a->n) < std::tie(b->label, b->source, b->word, b->n);
  });
  std::vector<FiberReport> out;
  for (std::size_t i = 0; i < order.size();) {
    FiberReport r;
    r.label = order[i]->label;
    while (i < order.size() && order[i]->label == r.label) {
      r.flags.push_back(order[i]->flag);
      r.parabolic = r.parabolic || order[i]->source == "peripheral";
      ++i;
    }
    const FlagClusters c = cluster_flags(r.flags, cluster_radius);
    r.cluster = c.assignment;
    r.cardinality = static_cast<int>(c.members.size());
    r.max_intra = c.max_intra;
    r.min_inter = c.min_inter;
    r.low_confidence = r.flags.size() == 1;
    out.push_back(std::move(r));
  }
  return out;
}

TransversalityAudit audit_transversality(const std::vector<FiberReport>& reports) {
  std::vector<const FiberReport*> nonempty;
  for (const auto& r : reports)
    if (!r.flags.empty()) nonempty.push_back(&r);
  std::vector<std::string> labels;
  for (const auto* r : nonempty) labels.push_back(r->label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.size() < 2) throw Error(ErrorCode::InsufficientLabels, "transversality audit needs two boundary labels");

  TransversalityAudit audit;
  audit.min_margin = kInf;
  for (std::size_t a = 0; a < nonempty.size(); ++a)
    for (std::size_t b = a + 1; b < nonempty.size(); ++b) {
      if (nonempty[a]->label == nonempty[b]->label) continue;
      for (std::size_t i = 0; i < nonempty[a]->flags.size(); ++i)
        for (std::size_t j = 0; j < nonempty[b]->flags.size(); ++j) {
          const double m = flags_transverse(nonempty[a]->flags[i], nonempty[b]->flags[j]).margin;
          if (m < audit.min_margin) {
            audit.min_margin = m;
            audit.label_a = nonempty[a]->label;
            audit.label_b = nonempty[b]->label;
            audit.flag_a = static_cast<int>(i);
            audit.flag_b = static_cast<int>(j);
          }
        }
    }
  return audit;
}

DynamicsReport test_dynamics_preserving(const std::vector<BlockProduct>& sequence,
                                        const std::vector<Subspace>& samples, int k,
                                        std::optional<Subspace> limit_v, double margin) {
  if (sequence.empty()) throw Error(ErrorCode::InvalidInput, "empty sequence");
  const int d = sequence.front().dim;
  if (k < 1 || k >= d) throw Error(ErrorCode::InvalidInput, "gap index out of range");
  const BlockProduct& last = sequence.back();
  DynamicsReport rep{limit_v ? *limit_v : uk_subspace(singular_data(last), k),
                     uk_subspace(singular_data(last.inverse()), d - k), {}, {}, false};

  for (const auto& v : samples) {
    if (v.dim() != k || v.ambient() != d) throw Error(ErrorCode::DimensionMismatch, "sample subspace shape");
    const double m = transversality_margin(v, rep.limit_w);
    if (m <= margin) {
      throw Error(ErrorCode::NotTransverse, "sample within margin " + std::to_string(margin) + " of W_0");
    }
    rep.margins.push_back(m);
  }

  rep.pass = true;
  for (const auto& v : samples) {
    std::vector<double> dist;
    for (const auto& g : sequence) dist.push_back(angle_distance(image_subspace(g, v), rep.limit_v));
    const std::size_t half = dist.size() / 2;
    bool decreasing = true;
    for (std::size_t i = half; i + 1 < dist.size(); ++i) {
      decreasing = decreasing && (dist[i + 1] <= dist[i] || dist[i + 1] < 1e-12);
    }
    rep.pass = rep.pass && decreasing && dist.back() < 1e-3;
    rep.distances.push_back(std::move(dist));
  }
  return rep;
}

DynamicsReport test_dynamics_preserving(const MarkedGroup& g, const std::vector<Word>& sequence,
                                        const std::vector<Subspace>& samples, int k, double margin) {
  std::vector<BlockProduct> seq;
  for (const auto& w : sequence) seq.push_back(evaluate_blocks(g, w));
  return test_dynamics_preserving(seq, samples, k, std::nullopt, margin);
}

MarkedGroup perturb_type_preserving(const MarkedGroup& g, double magnitude, std::uint64_t seed) {
  if (g.kind() != PresentationKind::Free) {
    throw Error(ErrorCode::UnsupportedPresentation, "type-preserving perturbation needs a free presentation");
  }
  if (!(magnitude >= 0.0)) throw Error(ErrorCode::InvalidInput, "negative perturbation magnitude");
  if (magnitude == 0.0) return g;

  const int n = g.rank();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> peripheral(static_cast<std::size_t>(n), false);
  for (const auto& p : g.peripherals())
    for (const Word& w : p.generators()) {
      int first = -1;
      for (Letter x : w) {
        const int i = std::abs(x) - 1;
        peripheral[i] = true;
        if (first < 0) {
          first = i;
        } else {
          parent[find(i)] = find(first);
        }
      }
    }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = g.dim();
  auto direction = [&]() {
    Matrix e(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double re = normal(rng);
        const double im = g.field() == Field::Complex ? normal(rng) : 0.0;
        e(i, j) = Complex(re, im);
      }
    return Matrix(e * (magnitude / operator_norm(e)));
  };

  std::vector<Matrix> images = g.images();
  std::map<int, Matrix> conjugators;
  for (int i = 0; i < n; ++i) {
    if (peripheral[i]) {
      const int root = find(i);
      auto it = conjugators.find(root);
      if (it == conjugators.end()) {
        it = conjugators.emplace(root, Matrix(Matrix::Identity(d, d) + direction())).first;
      }
      const Matrix& h = it->second;
      images[i] = h * images[i] * h.inverse();
    } else {
      images[i] = images[i] + direction();
    }
  }
  return g.with_images(std::move(images));
}

}  // namespace relanosov
