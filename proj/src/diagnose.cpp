#include "relanosov/diagnose.hpp"

#include "relanosov/error.hpp"

namespace relanosov {

std::string to_string(Tag t) {
  switch (t) {
    case Tag::NotDivergent: return "not-divergent";
    case Tag::AnosovConsistent: return "EGF-consistent, Anosov-consistent";
    case Tag::NonAnosovConsistent: return "EGF-consistent, non-Anosov-consistent";
    case Tag::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Tag parse_tag(const std::string& s) {
  for (Tag t : {Tag::NotDivergent, Tag::AnosovConsistent, Tag::NonAnosovConsistent, Tag::Inconclusive}) {
    if (to_string(t) == s) return t;
  }
  if (s == "anosov") return Tag::AnosovConsistent;
  if (s == "non-anosov") return Tag::NonAnosovConsistent;
  throw Error(ErrorCode::ConfigError, "unknown diagnosis tag '" + s + "'");
}

std::vector<int> Diagnosis::parabolic_cardinalities() const {
  std::vector<int> out;
  for (const auto& f : fibers)
    if (f.parabolic) out.push_back(f.cardinality);
  return out;
}

Tag decide_tag(DivergenceVerdict divergence, const std::vector<int>& cards, std::optional<double> margin,
               double tol) {
  if (divergence == DivergenceVerdict::NotDivergent) return Tag::NotDivergent;
  if (!margin || !(*margin > tol)) return Tag::Inconclusive;
  bool all_single = true, some_multiple = false;
  for (int c : cards) {
    all_single = all_single && c == 1;
    some_multiple = some_multiple || c >= 2;
  }
  if (all_single) return Tag::AnosovConsistent;
  if (some_multiple) return Tag::NonAnosovConsistent;
  return Tag::Inconclusive;
}

Diagnosis diagnose(const MarkedGroup& g, int k, const DiagnoseConfig& config) {
  if (k < 1 || 2 * k > g.dim()) throw Error(ErrorCode::InvalidInput, "need 1 <= k <= d/2");
  Diagnosis out;
  out.divergence = certify_divergence(g, k, config.r_max, config.divergence_threshold, config.exec);
  if (out.divergence.verdict == DivergenceVerdict::NotDivergent) {
    out.tag = Tag::NotDivergent;
    return out;
  }
  for (const auto& p : g.peripherals()) {
    if (!p.is_cyclic()) {
      out.notes.push_back(p.label() + ": weak domination skipped (not cyclic)");
      continue;
    }
    try {
      out.weakdom.emplace_back(p.label(), fit_weak_domination(g, p, k, config.depth, config.weakdom_n_max,
                                                              config.weakdom_slack));
    } catch (const Error& e) {
      out.notes.push_back(p.label() + ": " + e.what());
    }
  }
  std::optional<double> margin;
  try {
    const auto samples = sample_limit_set(g, k, config.sampler);
    out.skipped = samples.skipped;
    out.fibers = analyze_fibers(samples, config.cluster_radius);
    out.audit = audit_transversality(out.fibers);
    margin = out.audit->min_margin;
  } catch (const Error& e) {
    out.notes.push_back(e.what());
  }
  out.tag = decide_tag(out.divergence.verdict, out.parabolic_cardinalities(), margin, config.margin_tol);
  return out;
}

}  // namespace relanosov
