#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shnr/certify.hpp"

namespace shnr {

inline constexpr const char* kVersion = "1.0.0";

/// Malformed or invalid input file.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

/// Operator bundle: {"A": m, "T": m, "S": m?, "R": m?} where each m is
/// {"rows": n, "cols": n, "data": [[re, im], ...]} in row-major order.
struct OperatorFile {
  CMatrix a;
  CMatrix t;
  std::optional<CMatrix> s;
  std::optional<CMatrix> r;
};

CMatrix matrix_from_json(const nlohmann::json& j, const std::string& name);
nlohmann::json matrix_to_json(const CMatrix& m);

OperatorFile parse_operator_file(const nlohmann::json& j);
OperatorFile read_operator_file(const std::filesystem::path& path);

/// "%.15g" formatting used for every scalar printed by the tools.
std::string format_scalar(double v);

struct ReportRecord {
  std::size_t trial = 0;
  Certificate cert;
};

struct Report {
  std::string command;
  nlohmann::json config;  // echo of the run parameters, including the seed
  std::vector<ReportRecord> records;
  SuiteSummary summary;
};

nlohmann::json report_to_json(const Report& report);
std::string report_to_csv(const Report& report);

/// Writes to a temporary sibling and renames it over `path`, so a failed run
/// never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace shnr
