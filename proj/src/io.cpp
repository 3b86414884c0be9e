#include "relanosov/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "relanosov/error.hpp"

namespace relanosov {

namespace {

[[noreturn]] void config_error(const std::string& source, const std::string& what) {
  throw Error(ErrorCode::ConfigError, source + ": " + what);
}

void check_keys(const toml::table& t, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, node] : t) {
    (void)node;
    if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end()) {
      config_error(where, "unknown key '" + std::string(key.str()) + "'");
    }
  }
}

RealMatrix read_rows(const toml::node& node, const std::string& where) {
  const auto* rows = node.as_array();
  if (!rows || rows->empty()) config_error(where, "expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows->size());
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto* row = (*rows)[static_cast<std::size_t>(i)].as_array();
    if (!row || static_cast<Eigen::Index>(row->size()) != n) config_error(where, "matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto v = (*row)[static_cast<std::size_t>(j)].value<double>();
      if (!v) config_error(where, "matrix entries must be numbers");
      m(i, j) = *v;
    }
  }
  return m;
}

Word read_word(const toml::node& node, const std::string& where) {
  const auto s = node.value<std::string>();
  if (!s) config_error(where, "expected a word string");
  try {
    return parse_word(*s);
  } catch (const Error& e) {
    config_error(where, e.what());
  }
}

std::vector<int> read_ints(const toml::node& node, const std::string& where) {
  const auto* arr = node.as_array();
  if (!arr) config_error(where, "expected an array of integers");
  std::vector<int> out;
  for (const auto& x : *arr) {
    const auto v = x.value<std::int64_t>();
    if (!v) config_error(where, "expected an array of integers");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

std::string short_tag(Tag t) {
  switch (t) {
    case Tag::NotDivergent: return "not-divergent";
    case Tag::AnosovConsistent: return "anosov";
    case Tag::NonAnosovConsistent: return "non-anosov";
    case Tag::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

toml::array matrix_rows(const RealMatrix& m) {
  toml::array rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    toml::array row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

GalleryItem build_item(const toml::table& root, const std::string& src) {
  check_keys(root,
             {"name", "field", "kind", "orders", "k", "expected", "block_sizes", "generators", "peripherals",
              "coset_table"},
             src);

  const std::string name = root["name"].value_or(std::string("custom"));
  const std::string field_s = root["field"].value_or(std::string("real"));
  Field field;
  if (field_s == "real") {
    field = Field::Real;
  } else if (field_s == "complex") {
    field = Field::Complex;
  } else {
    config_error(src, "field must be 'real' or 'complex'");
  }
  const std::string kind_s = root["kind"].value_or(std::string("free"));
  PresentationKind kind;
  if (kind_s == "free") {
    kind = PresentationKind::Free;
  } else if (kind_s == "free-product") {
    kind = PresentationKind::FreeProduct;
  } else if (kind_s == "other") {
    kind = PresentationKind::Other;
  } else {
    config_error(src, "kind must be free, free-product or other");
  }
  std::vector<int> orders;
  if (const auto* n = root.get("orders")) orders = read_ints(*n, src + ": orders");

  const auto* gens = root["generators"].as_array();
  if (!gens || gens->empty()) config_error(src, "at least one [[generators]] entry is required");
  std::vector<Matrix> images;
  for (std::size_t i = 0; i < gens->size(); ++i) {
    const std::string where = src + ": generators[" + std::to_string(i) + "]";
    const auto* t = (*gens)[i].as_table();
    if (!t) config_error(where, "expected a table");
    check_keys(*t, {"rows", "imag"}, where);
    const auto* rows = t->get("rows");
    if (!rows) config_error(where, "missing rows");
    Matrix m = from_real(read_rows(*rows, where));
    if (const auto* im = t->get("imag")) {
      const RealMatrix mi = read_rows(*im, where + ".imag");
      if (mi.rows() != m.rows()) config_error(where, "imag has a different shape");
      m += Complex(0.0, 1.0) * from_real(mi);
    }
    if (!images.empty() && m.rows() != images.front().rows()) config_error(where, "generator sizes differ");
    images.push_back(std::move(m));
  }

  std::vector<PeripheralSubgroup> peripherals;
  if (const auto* node = root.get("peripherals")) {
    const auto* arr = node->as_array();
    if (!arr) config_error(src, "peripherals must be an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string where = src + ": peripherals[" + std::to_string(i) + "]";
      const auto* t = (*arr)[i].as_table();
      if (!t) config_error(where, "expected a table");
      check_keys(*t, {"label", "generators"}, where);
      const auto label = (*t)["label"].value<std::string>();
      const auto* words = (*t)["generators"].as_array();
      if (!label || !words) config_error(where, "needs label and generators");
      std::vector<Word> ws;
      for (const auto& w : *words) ws.push_back(read_word(w, where));
      peripherals.emplace_back(*label, std::move(ws));
    }
  }

  std::optional<GalleryItem> built;
  if (const auto* ct = root["coset_table"].as_table()) {
    check_keys(*ct, {"action", "representatives"}, src + ": coset_table");
    const auto* action = (*ct)["action"].as_array();
    const auto* reps = (*ct)["representatives"].as_array();
    if (!action || !reps) config_error(src, "coset_table needs action and representatives");
    std::vector<std::vector<int>> act;
    for (const auto& row : *action) act.push_back(read_ints(row, src + ": coset_table.action"));
    std::vector<Word> rw;
    for (const auto& w : *reps) rw.push_back(read_word(w, src + ": coset_table.representatives"));
    const int rank = static_cast<int>(act.size());
    const CosetTable table(rank, std::move(act), std::move(rw));
    built = make_induced(MarkedGroup(std::move(images), field), table, std::move(peripherals), name);
  } else {
    const int d = static_cast<int>(images.front().rows());
    built = GalleryItem{name, MarkedGroup(std::move(images), field, kind, std::move(peripherals), std::move(orders)),
                       1, std::nullopt, "", {d}, 0.0};
  }
  GalleryItem item = std::move(*built);
  item.provenance = "loaded from " + src;
  if (const auto k = root["k"].value<std::int64_t>()) item.k = static_cast<int>(*k);
  if (const auto e = root["expected"].value<std::string>()) item.expected = parse_tag(*e);
  if (const auto* b = root.get("block_sizes")) item.block_sizes = read_ints(*b, src + ": block_sizes");
  return item;
}

}  // namespace

GalleryItem parse_group_definition(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at " << e.source().begin;
    config_error(source, os.str());
  }
  try {
    return build_item(root, source);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(source, e.what());
  }
}

GalleryItem load_group_definition(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open group file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_group_definition(ss.str(), path.string());
}

std::string write_group_definition(const GalleryItem& item) {
  const auto& g = item.group;
  toml::table root;
  root.insert("name", item.name);
  root.insert("field", to_string(g.field()));
  root.insert("kind", to_string(g.kind()));
  if (!g.orders().empty()) {
    toml::array o;
    for (int x : g.orders()) o.push_back(x);
    root.insert("orders", std::move(o));
  }
  root.insert("k", item.k);
  if (item.expected) root.insert("expected", short_tag(*item.expected));
  toml::array blocks;
  for (int b : item.block_sizes) blocks.push_back(b);
  root.insert("block_sizes", std::move(blocks));

  toml::array gens;
  for (const auto& m : g.images()) {
    toml::table t;
    t.insert("rows", matrix_rows(m.real()));
    if (!is_real(m)) t.insert("imag", matrix_rows(m.imag()));
    gens.push_back(std::move(t));
  }
  root.insert("generators", std::move(gens));

  if (!g.peripherals().empty()) {
    toml::array ps;
    for (const auto& p : g.peripherals()) {
      toml::table t;
      t.insert("label", p.label());
      toml::array ws;
      for (const auto& w : p.generators()) ws.push_back(to_string(w));
      t.insert("generators", std::move(ws));
      ps.push_back(std::move(t));
    }
    root.insert("peripherals", std::move(ps));
  }
  std::ostringstream os;
  os << "# " << item.name;
  if (!item.provenance.empty()) os << ": " << item.provenance;
  os << "\n" << root << "\n";
  return os.str();
}

// ---- JSON ------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string report_hash(const Json& report) {
  Json copy = report;
  if (copy.is_object()) {
    copy.erase("timestamp");
    copy.erase("report_hash");
  }
  return hex64(fnv1a64(copy.dump()));
}

void stamp_report(Json& report) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  report["report_hash"] = report_hash(report);
  report["timestamp"] = os.str();
}

namespace {

// JSON has no infinities; null marks them.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const Word& w) { return to_string(w); }

Json to_json(const Admissibility& a) {
  Json j{{"admissible", a.admissible}};
  if (!a.admissible) {
    j["violation"] = {{"s", a.s}, {"t", a.t}, {"lhs", number(a.lhs)}, {"rhs", number(a.rhs)}};
  }
  return j;
}

Json to_json(const DivergenceReport& r) {
  Json shells = Json::array();
  for (const auto& s : r.shells) {
    shells.push_back({{"radius", s.radius},
                      {"count", s.count},
                      {"skipped", s.skipped},
                      {"min", number(s.min)},
                      {"median", number(s.median)},
                      {"max", number(s.max)}});
  }
  return {{"k", r.k},
          {"threshold", r.threshold},
          {"shells", std::move(shells)},
          {"nondecreasing_from", r.nondecreasing_from},
          {"verdict", to_string(r.verdict)}};
}

Json to_json(const DominationFit& f) {
  return {{"c", number(f.c)},
          {"log_C", number(f.log_C)},
          {"r2", number(f.r2)},
          {"slack", f.slack},
          {"violations", f.violations},
          {"samples", f.samples},
          {"loglog_slope", number(f.loglog_slope)},
          {"linear", f.linear}};
}

Json to_json(const FiberReport& f) {
  return {{"label", f.label},
          {"samples", f.flags.size()},
          {"cardinality", f.cardinality},
          {"max_intra", number(f.max_intra)},
          {"min_inter", number(f.min_inter)},
          {"low_confidence", f.low_confidence},
          {"parabolic", f.parabolic}};
}

Json to_json(const TransversalityAudit& a) {
  return {{"min_margin", number(a.min_margin)},
          {"label_a", a.label_a},
          {"label_b", a.label_b},
          {"flag_a", a.flag_a},
          {"flag_b", a.flag_b}};
}

Json to_json(const Diagnosis& d, double margin_tol) {
  Json weak = Json::array();
  for (const auto& [label, fit] : d.weakdom) {
    Json j = to_json(fit);
    j["label"] = label;
    weak.push_back(std::move(j));
  }
  Json fibers = Json::array();
  for (const auto& f : d.fibers) fibers.push_back(to_json(f));
  return {{"divergence", to_json(d.divergence)},
          {"weakdom", std::move(weak)},
          {"fibers", std::move(fibers)},
          {"skipped", d.skipped},
          {"audit", d.audit ? to_json(*d.audit) : Json(nullptr)},
          {"notes", d.notes},
          {"margin_tol", margin_tol},
          {"tag", to_string(d.tag)}};
}

Tag replay_tag(const Json& j) {
  try {
    const auto verdict = j.at("divergence").at("verdict").get<std::string>() == to_string(DivergenceVerdict::DivergentConsistent)
                             ? DivergenceVerdict::DivergentConsistent
                             : DivergenceVerdict::NotDivergent;
    std::vector<int> cards;
    for (const auto& f : j.at("fibers"))
      if (f.at("parabolic").get<bool>()) cards.push_back(f.at("cardinality").get<int>());
    std::optional<double> margin;
    const auto& a = j.at("audit");
    if (!a.is_null() && !a.at("min_margin").is_null()) margin = a.at("min_margin").get<double>();
    return decide_tag(verdict, cards, margin, j.at("margin_tol").get<double>());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed diagnosis report: ") + e.what());
  }
}

// ---- CSV -------------------------------------------------------------------

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    const auto& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      os << c;
    } else {
      os << '"';
      for (char ch : c) {
        if (ch == '"') os << '"';
        os << ch;
      }
      os << '"';
    }
  }
  os << '\n';
}

void write_edges_csv(std::ostream& os, const Graph& g) {
  write_csv_row(os, {"u", "v"});
  for (const auto& [u, v] : g.edges()) write_csv_row(os, {std::to_string(u), std::to_string(v)});
}

void write_vertices_csv(std::ostream& os, const CuspedGraph& x) {
  write_csv_row(os, {"id", "word", "level", "piece"});
  for (int v = 0; v < x.graph.size(); ++v) {
    write_csv_row(os, {std::to_string(v), to_string(x.words[static_cast<std::size_t>(v)]),
                       std::to_string(x.level[static_cast<std::size_t>(v)]),
                       std::to_string(x.piece[static_cast<std::size_t>(v)])});
  }
}

void write_gap_profile_csv(std::ostream& os, const std::vector<GapProfileRow>& rows) {
  write_csv_row(os, {"word", "length_S", "length_Xf", "log_gap_k"});
  for (const auto& r : rows) {
    write_csv_row(os, {to_string(r.word), std::to_string(r.length_s), std::to_string(r.length_x),
                       format_number(r.log_gap)});
  }
}

void write_flag_csv(std::ostream& os, const std::vector<FiberReport>& fibers) {
  int d = 0, k = 0;
  for (const auto& f : fibers)
    if (!f.flags.empty()) {
      d = f.flags.front().d();
      k = f.flags.front().k();
      break;
    }
  std::vector<std::string> header{"label", "index", "cluster"};
  auto frame_header = [&](const std::string& part, int cols) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < cols; ++j) {
        const std::string cell = part + std::to_string(i) + "_" + std::to_string(j);
        header.push_back(cell + "_re");
        header.push_back(cell + "_im");
      }
  };
  frame_header("V", k);
  frame_header("W", d - k);
  write_csv_row(os, header);
  for (const auto& f : fibers) {
    for (std::size_t i = 0; i < f.flags.size(); ++i) {
      std::vector<std::string> row{f.label, std::to_string(i), std::to_string(f.cluster[i])};
      for (const Matrix* m : {&f.flags[i].V.frame(), &f.flags[i].W.frame()})
        for (Eigen::Index r = 0; r < m->rows(); ++r)
          for (Eigen::Index c = 0; c < m->cols(); ++c) {
            row.push_back(format_number((*m)(r, c).real()));
            row.push_back(format_number((*m)(r, c).imag()));
          }
      write_csv_row(os, row);
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace relanosov
