#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "relanosov/diagnose.hpp"
#include "relanosov/gallery.hpp"
#include "relanosov/io.hpp"

namespace relanosov {

struct DynamicsSpec {
  Word word;            // empty: the first generator
  int steps = 30;       // powers 2^1 .. 2^steps
  int samples = 50;     // random k-subspaces
  double margin = 0.05; // samples this close to W_0 are skipped
};

// One run of the lab. Sections of the TOML file:
//
//   seed = 7                   mandatory (or --seed)
//   group = "gallery:cusped"   mandatory; or a group definition file, relative to the config
//   k = 1                      defaults to the item's k
//   workers = 0                0 = all cores
//   out = "out"
//   [depth]       kind = "exponential" base = 2.0 | kind = "table" values = [...]
//   [truncation]  R = 4  L = -1  delta_samples = 100000
//   [divergence]  r_max = 8  threshold = 2.302585...
//   [weakdom]     n_max = 1024  slack = 0.05
//   [sampler]     rays, ray_length, ray_separation, peripheral_n, conjugators, gap_tol,
//                 words = [{label = "a", word = "aaaa"}]
//   [tolerances]  margin = 1e-6  cluster_radius = 0.05
//   [dynamics]    word = "a"  steps = 30  samples = 50  margin = 0.05
struct RunConfig {
  std::string group;  // mandatory
  std::filesystem::path base_dir;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string out = "out";
  DepthFunction depth = DepthFunction::exponential(2.0);
  int R = 4;
  int L = -1;
  int delta_samples = 100000;
  int r_max = 8;
  double divergence_threshold = std::log(10.0);
  int weakdom_n_max = 1024;
  double weakdom_slack = 0.05;
  SamplerSpec sampler;
  double margin_tol = 1e-6;
  double cluster_radius = 0.05;
  DynamicsSpec dynamics;
};

// ConfigError on syntax errors, unknown keys and out-of-range values.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {},
                           const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

// Everything that influences results (not out/workers), in canonical form.
Json to_json(const RunConfig& c);

// The group with k applied; ConfigError unless 1 <= k <= d/2.
GalleryItem resolve_group(const RunConfig& c);

DiagnoseConfig diagnose_config(const RunConfig& c);

}  // namespace relanosov
