#include "relanosov/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "relanosov/error.hpp"
#include "relanosov/kernels.hpp"

namespace relanosov {

namespace {

namespace fs = std::filesystem;

Exec exec_of(const RunConfig& c) { return c.workers == 1 ? Exec::Serial : Exec::Parallel; }

std::uint64_t seed_of(const RunConfig& c) {
  if (!c.seed) throw Error(ErrorCode::ConfigError, "seed is mandatory (config key 'seed' or --seed)");
  return *c.seed;
}

std::string inputs_hash(const RunConfig& c, const GalleryItem& item) {
  return hex64(fnv1a64(to_json(c).dump() + "\n" + write_group_definition(item)));
}

Json envelope(const RunConfig& c, const GalleryItem& item, const std::string& command) {
  return {{"command", command},
          {"group", item.name},
          {"k", item.k},
          {"seed", seed_of(c)},
          {"config", to_json(c)},
          {"inputs_hash", inputs_hash(c, item)},
          {"expected", item.expected ? Json(to_string(*item.expected)) : Json(nullptr)}};
}

void emit(CommandResult& res, const fs::path& path, const std::string& text) {
  write_text_file(path, text);
  res.files.push_back(path);
}

void emit_report(CommandResult& res, const fs::path& path) {
  stamp_report(res.report);
  emit(res, path, res.report.dump(2) + "\n");
}

// Exit status from whether the verdict agrees with the item's expected tag;
// an item without a claim always matches.
void settle(CommandResult& res, std::optional<bool> claim_holds) {
  res.report["match"] = claim_holds ? Json(*claim_holds) : Json(nullptr);
  res.exit_code = (claim_holds && !*claim_holds) ? kExitMismatch : kExitOk;
}

// Divergent tags imply the positive verdict of every certifier; the
// not-divergent tag denies divergence and weak domination and says nothing
// about the others.
std::optional<bool> claim(const std::optional<Tag>& expected, bool positive, bool speaks_when_not_divergent) {
  if (!expected || *expected == Tag::Inconclusive) return std::nullopt;
  if (*expected == Tag::NotDivergent) {
    if (!speaks_when_not_divergent) return std::nullopt;
    return !positive;
  }
  return positive;
}

Subspace random_subspace(int d, int k, bool complex, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Matrix m(d, k);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = complex ? Complex(n01(rng), n01(rng)) : Complex(n01(rng), 0.0);
  return Subspace(m);
}

// ---- certifiers -------------------------------------------------------------

void certify_divergence_cmd(const RunConfig& c, const GalleryItem& item, CommandResult& res) {
  const auto& g = item.group;
  const auto rep = certify_divergence(g, item.k, c.r_max, c.divergence_threshold, exec_of(c));
  Json j = to_json(rep);
  res.report["records"] = j["shells"];
  res.report["verdict"] = j["verdict"];
  res.report["nondecreasing_from"] = rep.nondecreasing_from;
  res.report["threshold"] = rep.threshold;
  std::size_t skipped = 0;
  for (const auto& s : rep.shells) skipped += s.skipped;
  res.report["skipped"] = skipped;
  const bool divergent = rep.verdict == DivergenceVerdict::DivergentConsistent;
  settle(res, claim(item.expected, divergent, true));

  std::ostringstream csv;
  write_csv_row(csv, {"word", "length_S", "log_gap_k"});
  for (int r = 1; r <= c.r_max; ++r) {
    const auto words = enumerate_sphere(g, r);
    const auto gaps = log_gaps(g, words, item.k, exec_of(c));
    for (std::size_t i = 0; i < words.size(); ++i) {
      write_csv_row(csv, {to_string(words[i]), std::to_string(r), format_number(gaps[i])});
    }
  }
  emit(res, fs::path(c.out) / "certify_divergence.csv", csv.str());
}

void certify_weakdom_cmd(const RunConfig& c, const GalleryItem& item, CommandResult& res, std::ostream& log) {
  const auto& g = item.group;
  Json records = Json::array();
  std::ostringstream csv;
  write_csv_row(csv, {"label", "index", "length_Xf", "log_gap_k"});
  bool dominated = true;
  int skipped = 0;
  auto add = [&](const std::string& label, const DominationFit& fit) {
    Json j = to_json(fit);
    j["label"] = label;
    records.push_back(std::move(j));
    dominated = dominated && fit.c > 0.0 && fit.violations == 0;
    for (std::size_t i = 0; i < fit.x.size(); ++i) {
      write_csv_row(csv, {label, std::to_string(i + 1), format_number(fit.x[i]), format_number(fit.y[i])});
    }
  };
  bool any = false;
  for (const auto& p : g.peripherals()) {
    if (!p.is_cyclic()) {
      ++skipped;
      log << "weakdom: skipping non-cyclic peripheral " << p.label() << "\n";
      continue;
    }
    add(p.label(), fit_weak_domination(g, p, item.k, c.depth, c.weakdom_n_max, c.weakdom_slack));
    any = true;
  }
  if (!any) {
    // No cusps: |.|_X is the word length, and the worst case on each sphere
    // is its minimal gap.
    const auto rep = certify_divergence(g, item.k, c.r_max, c.divergence_threshold, exec_of(c));
    std::vector<double> x, y;
    for (const auto& s : rep.shells) {
      x.push_back(s.radius);
      y.push_back(std::isfinite(s.min) ? s.min : 0.0);
    }
    add("ball", fit_domination_samples(std::move(x), std::move(y), c.weakdom_slack));
  }
  res.report["records"] = std::move(records);
  res.report["skipped"] = skipped;
  res.report["verdict"] = dominated ? "weakly-dominated-consistent" : "not-weakly-dominated";
  settle(res, claim(item.expected, dominated, true));
  emit(res, fs::path(c.out) / "certify_weakdom.csv", csv.str());
}

void certify_transversality_cmd(const RunConfig& c, const GalleryItem& item, CommandResult& res) {
  auto spec = c.sampler;
  spec.seed = seed_of(c);
  const auto samples = sample_limit_set(item.group, item.k, spec);
  const auto fibers = analyze_fibers(samples, c.cluster_radius);
  Json records = Json::array();
  for (const auto& f : fibers) records.push_back(to_json(f));
  res.report["records"] = std::move(records);
  res.report["skipped"] = samples.skipped;
  bool transverse = false;
  try {
    const auto audit = audit_transversality(fibers);
    res.report["audit"] = to_json(audit);
    transverse = audit.min_margin > c.margin_tol;
    res.report["verdict"] = transverse ? "transverse-consistent" : "not-transverse";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientLabels) throw;
    res.report["audit"] = nullptr;
    res.report["verdict"] = "insufficient-labels";
  }
  settle(res, claim(item.expected, transverse, false));
  std::ostringstream csv;
  write_flag_csv(csv, fibers);
  emit(res, fs::path(c.out) / "certify_transversality.csv", csv.str());
}

void certify_dynamics_cmd(const RunConfig& c, const GalleryItem& item, CommandResult& res) {
  const auto& g = item.group;
  const int d = g.dim(), k = item.k;
  const Word w = c.dynamics.word.empty() ? Word{1} : c.dynamics.word;
  if (w.max_generator() > g.rank()) throw Error(ErrorCode::ConfigError, "dynamics word uses unknown generators");
  std::vector<BlockProduct> seq;
  for (int j = 1; j <= c.dynamics.steps; ++j) seq.push_back(power(g, w, 1LL << j));

  std::ostringstream csv;
  write_csv_row(csv, {"sample", "step", "n", "distance"});
  res.report["word"] = to_string(w);
  bool pass = false;
  try {
    // W_0 as the tester computes it, to drop samples too close to it.
    const Subspace w0 = uk_subspace(singular_data(seq.back().inverse()), d - k);
    std::mt19937_64 rng(seed_of(c));
    std::vector<Subspace> samples;
    int skipped = 0;
    for (int i = 0; i < c.dynamics.samples; ++i) {
      auto v = random_subspace(d, k, g.field() == Field::Complex, rng);
      if (transversality_margin(v, w0) <= c.dynamics.margin) {
        ++skipped;
      } else {
        samples.push_back(std::move(v));
      }
    }
    res.report["skipped"] = skipped;
    if (samples.empty()) throw Error(ErrorCode::NotTransverse, "every sample fell within the margin of W_0");
    const auto rep = test_dynamics_preserving(seq, samples, k, std::nullopt, c.dynamics.margin);
    Json records = Json::array();
    for (std::size_t s = 0; s < rep.distances.size(); ++s) {
      const auto& dist = rep.distances[s];
      records.push_back({{"sample", s}, {"margin", rep.margins[s]}, {"final_distance", dist.back()}});
      for (std::size_t j = 0; j < dist.size(); ++j) {
        write_csv_row(csv, {std::to_string(s), std::to_string(j + 1), std::to_string(1LL << (j + 1)),
                            format_number(dist[j])});
      }
    }
    res.report["records"] = std::move(records);
    pass = rep.pass;
    res.report["verdict"] = pass ? "dynamics-preserving-consistent" : "not-dynamics-preserving";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoGap) throw;
    res.report["records"] = Json::array();
    res.report["skipped"] = c.dynamics.samples;
    res.report["verdict"] = "no-gap";
  }
  settle(res, claim(item.expected, pass, false));
  emit(res, fs::path(c.out) / "certify_dynamics.csv", csv.str());
}

}  // namespace

// ---- commands ---------------------------------------------------------------

CommandResult cmd_build_cusp(const RunConfig& c, std::ostream& log) {
  const auto item = resolve_group(c);
  const auto& g = item.group;
  CommandResult res;
  res.report = envelope(c, item, "build-cusp");

  // Admissibility over the range the depth function is known on.
  int s_max = 8, t_max = 8;
  if (const auto dom = c.depth.domain()) s_max = t_max = std::max(0, (*dom - 1) / 2);
  Admissibility adm;
  if (t_max >= 1) adm = check_depth_admissible(c.depth, s_max, t_max);
  if (!adm.admissible) {
    log << "warning: depth function is not admissible (f(" << adm.s + adm.t << ") = " << adm.lhs << " < "
        << adm.rhs << "); building anyway\n";
  }
  const auto x = build_cusped_graph(g, c.R, c.depth, c.L);
  const int root = x.index.at(Word{});
  const auto dist = bfs_distances(x.graph, root);

  std::vector<std::pair<Word, int>> ball(x.index.begin(), x.index.end());
  std::sort(ball.begin(), ball.end());
  std::vector<Word> words;
  for (const auto& [w, v] : ball) words.push_back(w);
  const auto gaps = log_gaps(g, words, item.k, exec_of(c));

  Json records = Json::array();
  std::vector<GapProfileRow> profile;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& [w, v] = ball[i];
    const int lx = dist[static_cast<std::size_t>(v)];
    records.push_back({{"word", to_string(w)},
                       {"length_S", w.size()},
                       {"length_Xf", lx},
                       {"R", c.R},
                       {"L", c.L}});
    profile.push_back({w, static_cast<int>(w.size()), lx, gaps[i]});
  }
  int max_level = 0;
  for (const auto& p : x.pieces) max_level = std::max(max_level, p.levels);

  Json delta = nullptr;
  if (x.graph.size() <= 20000) delta = estimate_delta(x.graph, static_cast<std::size_t>(c.delta_samples), seed_of(c));

  res.report["depth"] = c.depth.describe();
  res.report["admissibility"] = to_json(adm);
  res.report["admissible"] = adm.admissible;
  res.report["vertices"] = x.graph.size();
  res.report["edges"] = x.graph.edge_count();
  res.report["ball_size"] = x.ball_size();
  res.report["pieces"] = x.pieces.size();
  res.report["max_level"] = max_level;
  res.report["delta_estimate"] = delta;
  res.report["records"] = std::move(records);

  const fs::path out(c.out);
  std::ostringstream edges, vertices, gp;
  write_edges_csv(edges, x.graph);
  write_vertices_csv(vertices, x);
  write_gap_profile_csv(gp, profile);
  emit(res, out / "cusp_edges.csv", edges.str());
  emit(res, out / "cusp_vertices.csv", vertices.str());
  emit(res, out / "cusp_gap_profile.csv", gp.str());
  emit_report(res, out / "cusp_summary.json");
  return res;
}

CommandResult cmd_certify(const RunConfig& c, const std::string& which, std::ostream& log) {
  const auto item = resolve_group(c);
  CommandResult res;
  res.report = envelope(c, item, "certify");
  res.report["certifier"] = which;
  if (which == "divergence") {
    certify_divergence_cmd(c, item, res);
  } else if (which == "weakdom") {
    certify_weakdom_cmd(c, item, res, log);
  } else if (which == "transversality") {
    certify_transversality_cmd(c, item, res);
  } else if (which == "dynamics") {
    certify_dynamics_cmd(c, item, res);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown certifier '" + which + "'");
  }
  emit_report(res, fs::path(c.out) / ("certify_" + which + ".json"));
  return res;
}

CommandResult cmd_diagnose(const RunConfig& c, std::ostream&) {
  const auto item = resolve_group(c);
  CommandResult res;
  res.report = envelope(c, item, "diagnose");
  const auto dc = diagnose_config(c);
  const auto d = diagnose(item.group, item.k, dc);
  res.report["diagnosis"] = to_json(d, dc.margin_tol);
  res.report["verdict"] = to_string(d.tag);
  res.report["skipped"] = d.skipped;
  settle(res, item.expected && *item.expected != Tag::Inconclusive ? std::optional<bool>(d.tag == *item.expected)
                                                                   : std::nullopt);

  const fs::path out(c.out);
  std::ostringstream flags, gaps;
  write_flag_csv(flags, d.fibers);
  write_csv_row(gaps, {"label", "index", "length_Xf", "log_gap_k"});
  for (const auto& [label, fit] : d.weakdom)
    for (std::size_t i = 0; i < fit.x.size(); ++i)
      write_csv_row(gaps, {label, std::to_string(i + 1), format_number(fit.x[i]), format_number(fit.y[i])});
  emit(res, out / "diagnosis_flags.csv", flags.str());
  emit(res, out / "diagnosis_weakdom.csv", gaps.str());
  emit_report(res, out / "diagnosis.json");
  return res;
}

// ---- front end --------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments on relatively hyperbolic groups and their linear representations",
               "relanosov-lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir, which, example_name;
  std::optional<std::uint64_t> seed;
  int workers = -1;
  bool list = false;

  auto common = [&](CLI::App* s, bool config_required) {
    auto* opt = s->add_option("--config", config_path, "run configuration (TOML)");
    if (config_required) opt->required();
    s->add_option("--out", out_dir, "output directory (overrides the config)");
    s->add_option("--seed", seed, "seed (overrides the config)");
    s->add_option("--workers", workers, "worker threads, 0 = all")->check(CLI::NonNegativeNumber);
  };
  auto* build = app.add_subcommand("build-cusp", "build a truncated cusped space and export it");
  common(build, true);
  auto* certify = app.add_subcommand("certify", "run one certifier");
  common(certify, true);
  certify->add_option("which", which, "divergence | weakdom | transversality | dynamics")
      ->required()
      ->check(CLI::IsMember({"divergence", "weakdom", "transversality", "dynamics"}));
  auto* diag = app.add_subcommand("diagnose", "full pipeline and composite tag");
  common(diag, true);
  auto* example = app.add_subcommand("example", "list or export gallery items");
  common(example, false);
  example->add_flag("--list", list, "list gallery items with their expected tags");
  example->add_option("--name", example_name, "gallery item to export as a group file");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (example->parsed()) {
      if (list) {
        for (const auto& name : gallery_names()) {
          const auto item = make_gallery_item(name);
          out << name << "\t" << (item.expected ? to_string(*item.expected) : std::string("(no claim)")) << "\n";
        }
        return kExitOk;
      }
      if (example_name.empty() && config_path.empty()) {
        throw Error(ErrorCode::ConfigError, "example needs --list, --name or --config");
      }
      const GalleryItem item = example_name.empty() ? resolve_group(load_run_config(config_path))
                                                    : make_gallery_item(example_name);
      const std::string text = write_group_definition(item);
      if (out_dir.empty()) {
        out << text;
      } else {
        const auto path = fs::path(out_dir) / (item.name + ".toml");
        write_text_file(path, text);
        out << path.string() << "\n";
      }
      return kExitOk;
    }

    RunConfig cfg = load_run_config(config_path);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed) cfg.seed = seed;
    if (workers >= 0) cfg.workers = workers;
    seed_of(cfg);
    if (cfg.workers > 0) set_threads(cfg.workers);

    CommandResult res;
    if (build->parsed()) {
      res = cmd_build_cusp(cfg, err);
    } else if (certify->parsed()) {
      res = cmd_certify(cfg, which, err);
    } else {
      res = cmd_diagnose(cfg, err);
    }
    for (const auto& f : res.files) out << f.string() << "\n";
    if (res.report.contains("verdict")) out << "verdict: " << res.report["verdict"].get<std::string>() << "\n";
    if (res.exit_code == kExitMismatch) {
      err << "verdict does not match the expected tag " << res.report["expected"].get<std::string>() << "\n";
    }
    return res.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace relanosov
