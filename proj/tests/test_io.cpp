#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shnr/io.hpp"
#include "support.hpp"

using namespace shnr;
using nlohmann::json;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("shnr_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("matrix JSON: round-trip is exact") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const CMatrix m = test::random_matrix(1 + static_cast<Eigen::Index>(k % 4), 2 + static_cast<Eigen::Index>(k % 3), k);
    CHECK(matrix_from_json(json::parse(matrix_to_json(m).dump()), "M") == m);
  }
  const json j = matrix_to_json(test::mat({{1, Complex(0, 2)}, {3, 4}}));
  CHECK(j["rows"] == 2);
  CHECK(j["data"][1] == json::array({0.0, 2.0}));
}

TEST_CASE("matrix JSON: malformed input") {
  CHECK_THROWS_AS(matrix_from_json(json::array(), "A"), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 1}, {"cols", 1}}, "A"), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 1}, {"cols", 2}, {"data", {{1, 0}}}}, "A"), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 1}, {"cols", 1}, {"data", {{1}}}}, "A"), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 1}, {"cols", 1}, {"data", {{"x", 0}}}}, "A"), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 0}, {"cols", 1}, {"data", json::array()}}, "A"), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 1.5}, {"cols", 1}, {"data", {{1, 0}}}}, "A"), ParseError);
}

TEST_CASE("operator file: parsing and shape checks") {
  const json a = matrix_to_json(CMatrix::Identity(2, 2));
  const json t = matrix_to_json(test::mat({{0, 1}, {0, 0}}));
  const OperatorFile f = parse_operator_file({{"A", a}, {"T", t}});
  CHECK(f.a == CMatrix::Identity(2, 2));
  CHECK_FALSE(f.s.has_value());
  CHECK(parse_operator_file({{"A", a}, {"T", t}, {"S", t}, {"R", a}}).r.has_value());
  CHECK_THROWS_AS(parse_operator_file({{"A", a}}), ParseError);
  CHECK_THROWS_AS(parse_operator_file({{"T", t}}), ParseError);
  CHECK_THROWS_AS(parse_operator_file({{"A", a}, {"T", matrix_to_json(CMatrix::Identity(3, 3))}}), ParseError);
  CHECK_THROWS_AS(parse_operator_file({{"A", a}, {"T", matrix_to_json(CMatrix::Zero(2, 3))}}), ParseError);
  CHECK_THROWS_AS(read_operator_file(temp_path("does_not_exist.json")), ParseError);

  const auto bad = temp_path("bad.json");
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(read_operator_file(bad), ParseError);
  std::filesystem::remove(bad);
}

TEST_CASE("format_scalar: fifteen significant digits") {
  CHECK(format_scalar(2.0) == "2");
  CHECK(format_scalar(0.1) == "0.1");
  CHECK(format_scalar(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_scalar(-1e-20) == "-1e-20");
}

TEST_CASE("reports: JSON and CSV schema") {
  Report report;
  report.command = "verify";
  report.config = {{"seed", 5}};
  const Certificate cert = evaluate_certificate("PWR-BOUNDS", identity_space(2), {test::mat({{0, 1}, {0, 0}}), {}, {}});
  report.records.push_back({0, cert});
  report.summary.add(cert);

  const json j = report_to_json(report);
  CHECK(j["tool"] == "shnr");
  CHECK(j["version"] == kVersion);
  CHECK(j["config"]["seed"] == 5);
  CHECK(j["records"][0]["id"] == "PWR-BOUNDS");
  CHECK(j["records"][0]["verdict"] == "PASS");
  CHECK(j["records"][0]["terms"].size() == 3);
  CHECK(j["aggregate"]["pass"] == 1);
  CHECK(j["aggregate"]["per_id"][0]["count"] == 1);

  const std::string csv = report_to_csv(report);
  CHECK(csv.rfind("kind,trial,id,verdict,min_slack", 0) == 0);
  CHECK(csv.find("record,0,PWR-BOUNDS,PASS,") != std::string::npos);
  CHECK(csv.find("aggregate,,PWR-BOUNDS,,") != std::string::npos);
  CHECK(csv.find("total,,,,,,,1,0,0,,") != std::string::npos);
}

TEST_CASE("write_file_atomic: replaces contents, leaves no temporary") {
  const auto p = temp_path("atomic.txt");
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  CHECK(slurp(p) == "second");
  auto tmp = p;
  tmp += ".tmp";
  CHECK_FALSE(std::filesystem::exists(tmp));
  std::filesystem::remove(p);
  CHECK_THROWS_AS(write_file_atomic(temp_path("no_such_dir") / "x.txt", "x"), Error);
}
