#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shnr/functionals.hpp"

namespace shnr {

enum class Verdict { pass, fail, inconclusive };
std::string_view to_string(Verdict v);

enum class Suite { all, section2, section3, section4 };
std::string_view to_string(Suite s);
std::optional<Suite> parse_suite(std::string_view name);

/// Operands an inequality needs: T alone, T and S, or T, S and R.
enum class Arity { t, ts, tsr };

struct RegistryEntry {
  std::string_view id;
  int section;
  Arity arity;
  std::string_view chain;
};

/// The closed registry, in report order.
std::span<const RegistryEntry> registry();

struct Term {
  std::string label;
  double value = 0.0;
  /// False for heuristic estimates (cos_A and sin_A at compressed rank > 3).
  bool certified = true;
};

enum class Relation { le, eq };

/// One verified link terms[lhs] (relation) terms[rhs]. For `le` the slack is
/// rhs - lhs; for `eq` it is -|lhs - rhs|. `allowance` is the documented
/// discretization error absorbed by the link. Informational links are
/// reported but never affect the verdict.
struct Slack {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  Relation relation = Relation::le;
  double value = 0.0;
  double allowance = 0.0;
  bool informational = false;

  double effective() const { return value + allowance; }
};

struct Certificate {
  std::string id;
  std::vector<Term> terms;
  std::vector<Slack> slacks;
  Verdict verdict = Verdict::pass;
  double tol = 0.0;
  double scale = 1.0;
  std::vector<std::string> notes;

  /// Smallest effective slack among the links that decide the verdict.
  double min_slack() const;
};

struct Operands {
  CMatrix t;
  std::optional<CMatrix> s;
  /// Defaults to T when absent.
  std::optional<CMatrix> r;
};

struct SuiteConfig {
  ScanConfig scan;
  double tol = 1e-8;
  std::size_t cos_starts = 16;
};

/// Sets tol, scale and the verdict from the terms and slacks: PASS iff every
/// non-informational effective slack is >= -tol * scale. FAIL if a failing link
/// joins two certified terms; INCONCLUSIVE if every failing link touches an
/// uncertified term.
void assign_verdict(Certificate& c, double tol);

Certificate evaluate_certificate(std::string_view id, const SemiHilbertSpace& sp, const Operands& ops,
                                 const SuiteConfig& cfg = {});

/// Certificates of every registry row in the suite, in registry order.
std::vector<Certificate> run_suite(Suite suite, const SemiHilbertSpace& sp, const Operands& ops,
                                   const SuiteConfig& cfg = {});

bool suite_includes(Suite suite, const RegistryEntry& row);
bool suite_needs_s(Suite suite);

/// Verdict counts and slack statistics, overall and per registry id.
struct SuiteSummary {
  struct Row {
    std::string id;
    std::size_t count = 0;
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t inconclusive = 0;
    double min_slack = 0.0;
    double mean_slack = 0.0;
  };

  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  std::vector<Row> rows;

  void add(const Certificate& cert);
};

}  // namespace shnr
