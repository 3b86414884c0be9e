#include "relanosov/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "relanosov/error.hpp"

namespace relanosov {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, where + ": " + what);
}

void check_keys(const toml::table& t, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, node] : t) {
    (void)node;
    if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end()) {
      bad(where, "unknown key '" + std::string(key.str()) + "'");
    }
  }
}

const toml::table* section(const toml::table& root, std::string_view name, const std::string& src) {
  const auto* n = root.get(name);
  if (!n) return nullptr;
  const auto* t = n->as_table();
  if (!t) bad(src, "[" + std::string(name) + "] must be a table");
  return t;
}

// Typed getters: absent keys leave the default, wrong types are errors.
void get_int(const toml::table& t, std::string_view key, int& out, const std::string& where, long long lo,
             long long hi) {
  const auto* n = t.get(key);
  if (!n) return;
  const auto v = n->value_exact<std::int64_t>();
  if (!v) bad(where, std::string(key) + " must be an integer");
  if (*v < lo || *v > hi) {
    bad(where, std::string(key) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  out = static_cast<int>(*v);
}

void get_double(const toml::table& t, std::string_view key, double& out, const std::string& where, double lo,
                double hi) {
  const auto* n = t.get(key);
  if (!n) return;
  const auto v = n->value<double>();
  if (!v || !(*v >= lo && *v <= hi)) {
    bad(where, std::string(key) + " must be a number in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  out = *v;
}

Word get_word(const toml::node& n, const std::string& where) {
  const auto s = n.value<std::string>();
  if (!s) bad(where, "expected a word string");
  try {
    return parse_word(*s);
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

RunConfig build(const toml::table& root, const std::filesystem::path& base_dir, const std::string& src) {
  check_keys(root,
             {"seed", "group", "k", "workers", "out", "depth", "truncation", "divergence", "weakdom", "sampler",
              "tolerances", "dynamics"},
             src);
  RunConfig c;
  c.base_dir = base_dir;
  if (const auto* n = root.get("seed")) {
    const auto v = n->value_exact<std::int64_t>();
    if (!v || *v < 0) bad(src, "seed must be a nonnegative integer");
    c.seed = static_cast<std::uint64_t>(*v);
  }
  const auto group = root["group"].value<std::string>();
  if (!group || group->empty()) bad(src, "group is required (\"gallery:<name>\" or a file)");
  c.group = *group;
  if (root.get("k")) {
    int k = 1;
    get_int(root, "k", k, src, 1, 1 << 20);
    c.k = k;
  }
  get_int(root, "workers", c.workers, src, 0, 4096);
  if (const auto* n = root.get("out")) {
    const auto v = n->value<std::string>();
    if (!v) bad(src, "out must be a string");
    c.out = *v;
  }

  if (const auto* t = section(root, "depth", src)) {
    const std::string where = src + ": [depth]";
    check_keys(*t, {"kind", "base", "values"}, where);
    const std::string kind = (*t)["kind"].value_or(std::string("exponential"));
    try {
      if (kind == "exponential") {
        double base = 2.0;
        get_double(*t, "base", base, where, 1.0, 1e6);
        c.depth = DepthFunction::exponential(base);
      } else if (kind == "table") {
        const auto* arr = (*t)["values"].as_array();
        if (!arr) bad(where, "table depth needs values");
        std::vector<double> vals;
        for (const auto& x : *arr) {
          const auto v = x.value<double>();
          if (!v) bad(where, "values must be numbers");
          vals.push_back(*v);
        }
        c.depth = DepthFunction::table(std::move(vals));
      } else {
        bad(where, "kind must be exponential or table");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError) throw;
      bad(where, e.what());
    }
  }
  if (const auto* t = section(root, "truncation", src)) {
    const std::string where = src + ": [truncation]";
    check_keys(*t, {"R", "L", "delta_samples"}, where);
    get_int(*t, "R", c.R, where, 0, 64);
    get_int(*t, "L", c.L, where, -1, 4096);
    get_int(*t, "delta_samples", c.delta_samples, where, 1, 100000000);
  }
  if (const auto* t = section(root, "divergence", src)) {
    const std::string where = src + ": [divergence]";
    check_keys(*t, {"r_max", "threshold"}, where);
    get_int(*t, "r_max", c.r_max, where, 1, 64);
    get_double(*t, "threshold", c.divergence_threshold, where, 0.0, 1e6);
  }
  if (const auto* t = section(root, "weakdom", src)) {
    const std::string where = src + ": [weakdom]";
    check_keys(*t, {"n_max", "slack"}, where);
    get_int(*t, "n_max", c.weakdom_n_max, where, 1, 1 << 24);
    get_double(*t, "slack", c.weakdom_slack, where, 0.0, 0.999);
  }
  if (const auto* t = section(root, "sampler", src)) {
    const std::string where = src + ": [sampler]";
    check_keys(*t, {"rays", "ray_length", "ray_separation", "peripheral_n", "conjugators", "words", "gap_tol"}, where);
    get_int(*t, "rays", c.sampler.rays, where, 0, 1 << 20);
    get_int(*t, "ray_length", c.sampler.ray_length, where, 1, 1 << 16);
    get_int(*t, "ray_separation", c.sampler.ray_separation, where, 0, 1 << 16);
    get_double(*t, "gap_tol", c.sampler.gap_tol, where, 0.0, 1e3);
    if (const auto* n = t->get("peripheral_n")) {
      const auto* arr = n->as_array();
      if (!arr) bad(where, "peripheral_n must be an array");
      c.sampler.peripheral_n.clear();
      for (const auto& x : *arr) {
        const auto v = x.value_exact<std::int64_t>();
        if (!v || *v <= 0) bad(where, "peripheral_n entries must be positive integers");
        c.sampler.peripheral_n.push_back(*v);
      }
    }
    if (const auto* n = t->get("conjugators")) {
      const auto* arr = n->as_array();
      if (!arr) bad(where, "conjugators must be an array of words");
      c.sampler.conjugators.clear();
      for (const auto& x : *arr) c.sampler.conjugators.push_back(get_word(x, where));
    }
    if (const auto* n = t->get("words")) {
      const auto* arr = n->as_array();
      if (!arr) bad(where, "words must be an array of tables");
      for (const auto& x : *arr) {
        const auto* e = x.as_table();
        if (!e) bad(where, "words entries must be tables");
        check_keys(*e, {"label", "word"}, where + " words");
        const auto label = (*e)["label"].value<std::string>();
        const auto* w = e->get("word");
        if (!label || !w) bad(where, "words entries need label and word");
        c.sampler.words.emplace_back(*label, get_word(*w, where));
      }
    }
  }
  if (const auto* t = section(root, "tolerances", src)) {
    const std::string where = src + ": [tolerances]";
    check_keys(*t, {"margin", "cluster_radius"}, where);
    get_double(*t, "margin", c.margin_tol, where, 0.0, 1.0);
    get_double(*t, "cluster_radius", c.cluster_radius, where, 1e-12, 2.0);
  }
  if (const auto* t = section(root, "dynamics", src)) {
    const std::string where = src + ": [dynamics]";
    check_keys(*t, {"word", "steps", "samples", "margin"}, where);
    if (const auto* n = t->get("word")) c.dynamics.word = get_word(*n, where);
    get_int(*t, "steps", c.dynamics.steps, where, 2, 60);
    get_int(*t, "samples", c.dynamics.samples, where, 1, 1 << 20);
    get_double(*t, "margin", c.dynamics.margin, where, 0.0, 1.0);
  }
  return c;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at " << e.source().begin;
    bad(source, os.str());
  }
  return build(root, base_dir, source);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path(), path.string());
}

Json to_json(const RunConfig& c) {
  Json depth = c.depth.is_table() ? Json{{"kind", "table"}, {"values", c.depth.values()}}
                                  : Json{{"kind", "exponential"}, {"base", c.depth.base()}};
  Json conj = Json::array();
  for (const auto& w : c.sampler.conjugators) conj.push_back(to_string(w));
  Json words = Json::array();
  for (const auto& [label, w] : c.sampler.words) words.push_back({{"label", label}, {"word", to_string(w)}});
  return {{"group", c.group},
          {"k", c.k ? Json(*c.k) : Json(nullptr)},
          {"seed", c.seed ? Json(*c.seed) : Json(nullptr)},
          {"depth", std::move(depth)},
          {"truncation", {{"R", c.R}, {"L", c.L}, {"delta_samples", c.delta_samples}}},
          {"divergence", {{"r_max", c.r_max}, {"threshold", c.divergence_threshold}}},
          {"weakdom", {{"n_max", c.weakdom_n_max}, {"slack", c.weakdom_slack}}},
          {"sampler",
           {{"rays", c.sampler.rays},
            {"ray_length", c.sampler.ray_length},
            {"ray_separation", c.sampler.ray_separation},
            {"peripheral_n", c.sampler.peripheral_n},
            {"conjugators", std::move(conj)},
            {"words", std::move(words)},
            {"gap_tol", c.sampler.gap_tol}}},
          {"tolerances", {{"margin", c.margin_tol}, {"cluster_radius", c.cluster_radius}}},
          {"dynamics",
           {{"word", to_string(c.dynamics.word)},
            {"steps", c.dynamics.steps},
            {"samples", c.dynamics.samples},
            {"margin", c.dynamics.margin}}}};
}

GalleryItem resolve_group(const RunConfig& c) {
  const std::string prefix = "gallery:";
  GalleryItem item = [&] {
    if (c.group.rfind(prefix, 0) == 0) return make_gallery_item(c.group.substr(prefix.size()));
    std::filesystem::path p(c.group);
    if (p.is_relative() && !c.base_dir.empty()) p = c.base_dir / p;
    return load_group_definition(p);
  }();
  if (c.k) item.k = *c.k;
  const int d = item.group.dim();
  if (item.k < 1 || 2 * item.k > d) {
    throw Error(ErrorCode::ConfigError,
                "k = " + std::to_string(item.k) + " must satisfy 1 <= k <= d/2 with d = " + std::to_string(d));
  }
  return item;
}

DiagnoseConfig diagnose_config(const RunConfig& c) {
  DiagnoseConfig d;
  d.r_max = c.r_max;
  d.divergence_threshold = c.divergence_threshold;
  d.depth = c.depth;
  d.weakdom_n_max = c.weakdom_n_max;
  d.weakdom_slack = c.weakdom_slack;
  d.sampler = c.sampler;
  d.sampler.seed = c.seed.value_or(0);
  d.cluster_radius = c.cluster_radius;
  d.margin_tol = c.margin_tol;
  d.exec = c.workers == 1 ? Exec::Serial : Exec::Parallel;
  return d;
}

}  // namespace relanosov
