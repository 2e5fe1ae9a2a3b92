#include "shnr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace shnr {

using nlohmann::json;

CMatrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_object()) throw ParseError(name + " must be an object with rows, cols and data");
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) throw ParseError(name + " is missing \"" + key + "\"");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw ParseError(name + ": rows and cols must be integers");
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows < 1 || cols < 1) throw ParseError(name + ": rows and cols must be positive");
  const json& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols)
    throw ParseError(name + ": data must hold rows*cols entries");
  CMatrix m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) {
    const json& e = data[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError(name + ": entry " + std::to_string(k) + " must be [re, im]");
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(name + ": non-finite entry");
    m(k / cols, k % cols) = Complex(re, im);
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back({m(i, k).real(), m(i, k).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

OperatorFile parse_operator_file(const json& j) {
  if (!j.is_object()) throw ParseError("operator file must be a JSON object");
  if (!j.contains("A")) throw ParseError("missing \"A\"");
  if (!j.contains("T")) throw ParseError("missing \"T\"");
  OperatorFile f;
  f.a = matrix_from_json(j["A"], "A");
  f.t = matrix_from_json(j["T"], "T");
  if (j.contains("S")) f.s = matrix_from_json(j["S"], "S");
  if (j.contains("R")) f.r = matrix_from_json(j["R"], "R");
  const Eigen::Index n = f.a.rows();
  auto check = [n](const CMatrix& m, const char* name) {
    if (m.rows() != m.cols()) throw ParseError(std::string(name) + " is not square");
    if (m.rows() != n) throw ParseError(std::string(name) + " does not match the dimension of A");
  };
  check(f.a, "A");
  check(f.t, "T");
  if (f.s) check(*f.s, "S");
  if (f.r) check(*f.r, "R");
  return f;
}

OperatorFile read_operator_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_operator_file(j);
}

std::string format_scalar(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

json certificate_to_json(const Certificate& c) {
  json terms = json::array();
  for (const Term& t : c.terms) terms.push_back({{"label", t.label}, {"value", t.value}, {"certified", t.certified}});
  json slacks = json::array();
  for (const Slack& s : c.slacks) {
    slacks.push_back({{"lhs", s.lhs},
                      {"rhs", s.rhs},
                      {"relation", s.relation == Relation::le ? "<=" : "="},
                      {"value", s.value},
                      {"allowance", s.allowance},
                      {"informational", s.informational}});
  }
  return {{"id", c.id},       {"verdict", to_string(c.verdict)}, {"tol", c.tol},
          {"scale", c.scale}, {"min_slack", c.min_slack()},      {"terms", std::move(terms)},
          {"slacks", std::move(slacks)}, {"notes", c.notes}};
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

json report_to_json(const Report& report) {
  json records = json::array();
  for (const ReportRecord& r : report.records) {
    json rec = certificate_to_json(r.cert);
    rec["trial"] = r.trial;
    records.push_back(std::move(rec));
  }
  json per_id = json::array();
  for (const auto& row : report.summary.rows) {
    per_id.push_back({{"id", row.id},
                      {"count", row.count},
                      {"pass", row.pass},
                      {"fail", row.fail},
                      {"inconclusive", row.inconclusive},
                      {"min_slack", row.min_slack},
                      {"mean_slack", row.mean_slack}});
  }
  return {{"tool", "shnr"},
          {"version", kVersion},
          {"command", report.command},
          {"config", report.config},
          {"records", std::move(records)},
          {"aggregate",
           {{"pass", report.summary.pass},
            {"fail", report.summary.fail},
            {"inconclusive", report.summary.inconclusive},
            {"per_id", std::move(per_id)}}}};
}

std::string report_to_csv(const Report& report) {
  std::ostringstream out;
  out << "kind,trial,id,verdict,min_slack,mean_slack,count,pass,fail,inconclusive,terms,slacks\n";
  for (const ReportRecord& r : report.records) {
    std::string terms;
    for (const Term& t : r.cert.terms) {
      if (!terms.empty()) terms += ';';
      terms += t.label + '=' + format_scalar(t.value);
    }
    std::string slacks;
    for (const Slack& s : r.cert.slacks) {
      if (!slacks.empty()) slacks += ';';
      slacks += format_scalar(s.effective());
      if (s.informational) slacks += "(info)";
    }
    out << "record," << r.trial << ',' << r.cert.id << ',' << to_string(r.cert.verdict) << ','
        << format_scalar(r.cert.min_slack()) << ",,,,,," << csv_quote(terms) << ',' << csv_quote(slacks) << '\n';
  }
  for (const auto& row : report.summary.rows) {
    out << "aggregate,," << row.id << ",," << format_scalar(row.min_slack) << ',' << format_scalar(row.mean_slack)
        << ',' << row.count << ',' << row.pass << ',' << row.fail << ',' << row.inconclusive << ",,\n";
  }
  out << "total,,,,,,," << report.summary.pass << ',' << report.summary.fail << ',' << report.summary.inconclusive
      << ",,\n";
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace shnr
