#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relanosov/certify.hpp"

namespace relanosov {

enum class Tag { NotDivergent, AnosovConsistent, NonAnosovConsistent, Inconclusive };

std::string to_string(Tag t);
Tag parse_tag(const std::string& s);

struct DiagnoseConfig {
  int r_max = 8;
  double divergence_threshold = std::log(10.0);
  DepthFunction depth = DepthFunction::exponential(2.0);
  int weakdom_n_max = 1024;
  double weakdom_slack = 0.05;
  SamplerSpec sampler;
  double cluster_radius = 0.05;
  double margin_tol = 1e-6;
  Exec exec = Exec::Parallel;
};

struct Diagnosis {
  DivergenceReport divergence;
  std::vector<std::pair<std::string, DominationFit>> weakdom;  // per cyclic peripheral
  std::vector<FiberReport> fibers;
  int skipped = 0;
  std::optional<TransversalityAudit> audit;
  std::vector<std::string> notes;  // sub-certifier errors, in order
  Tag tag = Tag::Inconclusive;

  std::vector<int> parabolic_cardinalities() const;
};

// Decision table:
//   not divergent                                          -> NotDivergent
//   every parabolic fiber a singleton, audit margin > tol  -> AnosovConsistent
//   some parabolic fiber >= 2 points, audit margin > tol   -> NonAnosovConsistent
//   anything else (no audit, margin <= tol)                -> Inconclusive
Tag decide_tag(DivergenceVerdict divergence, const std::vector<int>& parabolic_cardinalities,
               std::optional<double> audit_margin, double tol);

// divergence -> weak domination per peripheral -> limit set -> fibers ->
// transversality -> tag. Later stages are skipped when divergence fails.
Diagnosis diagnose(const MarkedGroup& g, int k, const DiagnoseConfig& config);

}  // namespace relanosov
