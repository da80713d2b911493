#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "aniso/diagnostics.hpp"
#include "aniso/precond.hpp"
#include "aniso/saddle_escape.hpp"

namespace aniso {

/// Header plus one line per row; floats printed with 17 significant digits.
void write_trace_csv(std::ostream& os, const RunTrace& trace);
/// Inverse of write_trace_csv (rows only). Throws std::runtime_error on bad input.
RunTrace read_trace_csv(std::istream& is);

/// Iterate path as CSV: iter,x0,x1,...
void write_path_csv(std::ostream& os, const RunTrace& trace);

/// 17-significant-digit decimal, "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

/// Writes `content` to `path` via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

nlohmann::json schedule_to_json(const PerturbSchedule& s);
/// Requires gamma, lambda, radius_r, time_T and tol_G; other fields default to 0.
PerturbSchedule schedule_from_json(const nlohmann::json& j);

nlohmann::json trace_summary_json(const RunTrace& trace);
nlohmann::json to_json(const L0Report& r);
nlohmann::json to_json(const EnvelopeReport& r);
nlohmann::json to_json(const HLambdaReport& r);
nlohmann::json to_json(const FdReport& r);
nlohmann::json vec_to_json(const Vec& v);

}  // namespace aniso
