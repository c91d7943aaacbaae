#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "jspec/bounds.hpp"
#include "jspec/joint_spectrum.hpp"

namespace jspec {

inline constexpr std::string_view kTupleSchemaVersion = "jspec-1";

// On-disk tuple:
//   {"schema_version": "jspec-1", "n": n, "m": m,
//    "matrices": [ m x [ n rows x [ n x [re, im] ] ] ],
//    "metadata": {...}}
// Numbers are written with 17 significant digits, which round-trips doubles.
struct TupleFile {
  MatrixTuple tuple;
  nlohmann::json metadata = nlohmann::json::object();
};

// "%.17g"
std::string format_double(double x);

std::string serialize_tuple(const TupleFile& file);
// Throws Parse on malformed content or inconsistent dimensions.
TupleFile parse_tuple(std::string_view text);

// Throw Io on filesystem failures.
void write_tuple_file(const std::filesystem::path& path, const TupleFile& file);
TupleFile read_tuple_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

nlohmann::json complex_rows_to_json(const ComplexMatrix& rows);
nlohmann::json hypotheses_to_json(const HypothesisReport& r);
nlohmann::json tolerances_to_json(const Tolerances& t);
nlohmann::json birkhoff_to_json(const BirkhoffDecomposition& d, const OverlapMatrix& w);

// ReportFile: mirrors BoundReport; permutations are 1-indexed.
nlohmann::json report_to_json(const BoundReport& r);

}  // namespace jspec
