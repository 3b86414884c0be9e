#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "relanosov/certify.hpp"
#include "relanosov/cusped.hpp"
#include "relanosov/diagnose.hpp"
#include "relanosov/gallery.hpp"

namespace relanosov {

using Json = nlohmann::json;  // std::map objects, so keys come out sorted

// ---- group definition files (TOML) -----------------------------------------
//
//   name = "cusped"            optional
//   field = "real"             real | complex
//   kind = "free"              free | free-product | other
//   orders = [2, 3]            free products only, 0 = infinite
//   k = 1                      optional
//   expected = "anosov"        optional tag
//   block_sizes = [2]          optional, defaults to one block
//   [[generators]]
//   rows = [[1, 2], [0, 1]]    row-major; `imag` has the same shape
//   [[peripherals]]
//   label = "a"
//   generators = ["a"]         words, a/A style
//   [coset_table]              optional: the generators are then the images
//   action = [[1, 0], [1, 0]]  of the Schreier basis and the group loaded is
//   representatives = ["e", "a"]   the induced one
//
// Everything wrong with the file is a ConfigError.
GalleryItem parse_group_definition(std::string_view text, const std::string& source = "<string>");
GalleryItem load_group_definition(const std::filesystem::path& path);
std::string write_group_definition(const GalleryItem& item);

// ---- JSON ------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

// FNV-1a of the compact dump with "timestamp" and "report_hash" dropped.
std::string report_hash(const Json& report);
// Adds timestamp (UTC, ISO 8601) and report_hash.
void stamp_report(Json& report);

Json to_json(const Word& w);
Json to_json(const Admissibility& a);
Json to_json(const DivergenceReport& r);
Json to_json(const DominationFit& f);  // without the sample arrays
Json to_json(const FiberReport& f);    // without the flags
Json to_json(const TransversalityAudit& a);
Json to_json(const Diagnosis& d, double margin_tol);

// Reruns the decision table on a stored diagnosis.
Tag replay_tag(const Json& diagnosis);

// ---- CSV -------------------------------------------------------------------

// Shortest round-trip form; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double x);
void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

void write_edges_csv(std::ostream& os, const Graph& g);
void write_vertices_csv(std::ostream& os, const CuspedGraph& x);

struct GapProfileRow {
  Word word;
  int length_s = 0;
  int length_x = 0;
  double log_gap = 0.0;
};
void write_gap_profile_csv(std::ostream& os, const std::vector<GapProfileRow>& rows);

// One row per flag: label, index, cluster, then V and W frames flattened
// row-major as (re, im) pairs.
void write_flag_csv(std::ostream& os, const std::vector<FiberReport>& fibers);

// Writes a file, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace relanosov
