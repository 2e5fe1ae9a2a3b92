#include <doctest.h>

#include <algorithm>

#include "shnr/certify.hpp"
#include "shnr/ensembles.hpp"
#include "support.hpp"

using namespace shnr;
using shnr::test::mat;

namespace {

const CMatrix kPaperA = mat({{1, 1}, {1, 1}});
const CMatrix kPaperT = mat({{2, 2}, {0, 0}});
const CMatrix kShift = mat({{0, 1}, {0, 0}});

bool has_note(const Certificate& c, std::string_view fragment) {
  return std::any_of(c.notes.begin(), c.notes.end(),
                     [&](const std::string& n) { return n.find(fragment) != std::string::npos; });
}

}  // namespace

TEST_CASE("registry: closed, ordered, arity-tagged") {
  const auto rows = registry();
  CHECK(rows.size() == 22);
  CHECK(rows.front().id == "PWR-BOUNDS");
  CHECK(rows.back().id == "ANTICOMM-SHARP");
  std::size_t section2 = 0;
  for (const RegistryEntry& r : rows) {
    if (r.section == 2) {
      ++section2;
      CHECK(r.arity == Arity::t);
    }
  }
  CHECK(section2 == 11);
  CHECK_THROWS_AS(evaluate_certificate("NOT-A-ROW", identity_space(2), {kShift, {}, {}}), UnknownId);
}

TEST_CASE("PWR-BOUNDS: nilpotent lower tightness") {
  const Certificate c = evaluate_certificate("PWR-BOUNDS", identity_space(2), {kShift, {}, {}});
  REQUIRE(c.terms.size() == 3);
  CHECK(c.terms[0].value == doctest::Approx(0.5));
  CHECK(c.terms[1].value == doctest::Approx(0.5));
  CHECK(c.terms[2].value == doctest::Approx(1.0));
  CHECK(std::abs(c.slacks[0].value) <= 1e-9);
  CHECK(c.verdict == Verdict::pass);
}

TEST_CASE("PWR-BOUNDS: normal upper tightness") {
  const Certificate c = evaluate_certificate("PWR-BOUNDS", identity_space(2), {mat({{1, 0}, {0, Complex(0, 1)}}), {}, {}});
  CHECK(c.terms[0].value == doctest::Approx(0.5));
  CHECK(c.terms[1].value == doctest::Approx(1.0));
  CHECK(c.terms[2].value == doctest::Approx(1.0));
  CHECK(std::abs(c.slacks[1].value) <= 1e-9);
  CHECK(c.verdict == Verdict::pass);
}

TEST_CASE("SELFADJ-EQ: the worked example") {
  const Certificate c = evaluate_certificate("SELFADJ-EQ", make_space(kPaperA), {kPaperT, {}, {}});
  REQUIRE(c.terms.size() == 2);
  CHECK(c.terms[0].value == doctest::Approx(2.0));
  CHECK(c.terms[1].value == doctest::Approx(2.0));
  CHECK(c.verdict == Verdict::pass);
}

TEST_CASE("SELFADJ-EQ: non-selfadjoint T is evaluated on its real part") {
  const Certificate c = evaluate_certificate("SELFADJ-EQ", identity_space(2), {kShift, {}, {}});
  CHECK(has_note(c, "Re_A T"));
  CHECK(c.verdict == Verdict::pass);
}

TEST_CASE("verdict policy: PASS, FAIL and INCONCLUSIVE") {
  Certificate c;
  c.terms = {{"a", 1.0, true}, {"b", 0.9, false}, {"c", 1.5, true}};
  c.slacks = {{0, 2, Relation::le, 0.5, 0.0, false}, {1, 2, Relation::le, 0.6, 0.0, false}};
  assign_verdict(c, 1e-8);
  CHECK(c.verdict == Verdict::pass);
  CHECK(c.scale == 1.5);

  // Failing link touching the uncertified term.
  c.slacks.push_back({0, 1, Relation::le, -0.1, 0.0, false});
  assign_verdict(c, 1e-8);
  CHECK(c.verdict == Verdict::inconclusive);
  CHECK(has_note(c, "heuristic"));

  // Failing link between certified terms dominates.
  c.slacks.push_back({2, 0, Relation::le, -0.5, 0.0, false});
  assign_verdict(c, 1e-8);
  CHECK(c.verdict == Verdict::fail);

  // Informational links and allowances never fail.
  Certificate d;
  d.terms = {{"a", 2.0, true}, {"b", 1.0, true}};
  d.slacks = {{0, 1, Relation::le, -1.0, 0.0, true}, {0, 1, Relation::eq, -1.0, 1.0, false}};
  assign_verdict(d, 1e-8);
  CHECK(d.verdict == Verdict::pass);

  // Tolerance is relative to the largest term.
  Certificate e;
  e.terms = {{"a", 1e6, true}, {"b", 1e6 - 1e-3, true}};
  e.slacks = {{0, 1, Relation::le, -1e-3, 0.0, false}};
  assign_verdict(e, 1e-8);
  CHECK(e.verdict == Verdict::pass);
  assign_verdict(e, 1e-10);
  CHECK(e.verdict == Verdict::fail);

  SuiteSummary summary;
  summary.add(c);
  summary.add(d);
  CHECK(summary.fail == 1);
  CHECK(summary.pass == 1);
}

TEST_CASE("LOWER-SIN: heuristic cos flagged at rank > 3") {
  const test::Instance inst = test::random_instance(5, 5, 0, 41);
  const Certificate c = evaluate_certificate("LOWER-SIN", inst.sp, {inst.t, {}, {}});
  CHECK_FALSE(c.terms[1].certified);
  CHECK(has_note(c, "heuristic"));
  CHECK(c.verdict == Verdict::pass);
}

TEST_CASE("LOWER-SIN: certified at small rank") {
  const test::Instance inst = test::random_instance(4, 2, 0, 42);
  const Certificate c = evaluate_certificate("LOWER-SIN", inst.sp, {inst.t, {}, {}});
  CHECK(c.terms[1].certified);
  CHECK(c.verdict == Verdict::pass);
}

TEST_CASE("PROD-COND: S = I satisfies the hypothesis with equality") {
  const test::Instance inst = test::random_instance(3, 3, 0, 43);
  const Certificate c = evaluate_certificate("PROD-COND", inst.sp, {inst.t, CMatrix::Identity(3, 3), {}});
  CHECK_FALSE(has_note(c, "hypothesis not met"));
  CHECK(c.verdict == Verdict::pass);
  REQUIRE(c.slacks.size() == 1);
  CHECK(std::abs(c.slacks[0].value) <= 1e-9);
}

TEST_CASE("PROD-COND: unmet hypothesis is vacuous") {
  const test::Instance inst = test::random_instance(3, 3, 1, 44);
  const Certificate c = evaluate_certificate("PROD-COND", inst.sp, {inst.t, inst.s, {}});
  CHECK(has_note(c, "hypothesis not met"));
  CHECK(c.verdict == Verdict::pass);
  CHECK(std::all_of(c.slacks.begin(), c.slacks.end(), [](const Slack& s) { return s.informational; }));
}

TEST_CASE("run_suite: section2 on the worked example") {
  const auto certs = run_suite(Suite::section2, make_space(kPaperA), {kPaperT, {}, {}});
  CHECK(certs.size() == 11);
  for (const Certificate& c : certs) CHECK_MESSAGE(c.verdict == Verdict::pass, c.id);
}

TEST_CASE("run_suite: all rows pass with A = I on random 4x4 T, S") {
  for (std::size_t k = 0; k < 3; ++k) {
    const test::Instance inst = test::random_instance(4, 4, k, 45);
    const auto certs = run_suite(Suite::all, identity_space(4), {inst.t, inst.s, {}});
    CHECK(certs.size() == 22);
    for (const Certificate& c : certs) CHECK_MESSAGE(c.verdict == Verdict::pass, c.id);
  }
}

TEST_CASE("run_suite: section3 with S = I") {
  const test::Instance inst = test::random_instance(4, 2, 0, 46);
  const auto certs = run_suite(Suite::section3, inst.sp, {inst.t, CMatrix::Identity(4, 4), {}});
  for (const Certificate& c : certs) CHECK_MESSAGE(c.verdict == Verdict::pass, c.id);
  const auto cond = std::find_if(certs.begin(), certs.end(), [](const Certificate& c) { return c.id == "PROD-COND"; });
  REQUIRE(cond != certs.end());
  CHECK_FALSE(has_note(*cond, "hypothesis not met"));
}

TEST_CASE("run_suite: registry order and arity errors") {
  const test::Instance inst = test::random_instance(3, 2, 0, 47);
  const auto certs = run_suite(Suite::all, inst.sp, {inst.t, inst.s, {}});
  const auto rows = registry();
  REQUIRE(certs.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(certs[i].id == rows[i].id);
  CHECK_THROWS_AS(run_suite(Suite::section3, inst.sp, {inst.t, {}, {}}), ArityMismatch);
  CHECK_THROWS_AS(run_suite(Suite::section2, make_space(mat({{1, 0}, {0, 0}})), {kShift, {}, {}}), NoAdjoint);
}

TEST_CASE("certificates: verdict consistent with slacks and tolerance") {
  for (std::size_t k = 0; k < 6; ++k) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(k % 5);
    const test::Instance inst = test::random_instance(n, test::mixed_rank(n, k), k, 48);
    for (const Certificate& c : run_suite(Suite::all, inst.sp, {inst.t, inst.s, {}})) {
      double scale = 1.0;
      for (const Term& t : c.terms) scale = std::max(scale, std::abs(t.value));
      CHECK(c.scale == scale);
      bool fails = false;
      for (const Slack& s : c.slacks)
        if (!s.informational && s.effective() < -c.tol * scale) fails = true;
      CHECK((c.verdict == Verdict::pass) == !fails);
      CHECK(c.verdict != Verdict::fail);
    }
  }
}

TEST_CASE("distance rows: disk-shaped W where d = w") {
  // Square-zero T has a disk centred at 0 as W(T), so d = w and the d-links are tight.
  EnsembleSpec spec;
  spec.dim = 4;
  spec.rank = 4;
  spec.seed = 49;
  spec.family = Family::nilpotent_classical;
  const SemiHilbertSpace id = gen_space(spec, 0);
  const Operands ops{gen_operator(spec, id, 0, 0), gen_operator(spec, id, 0, 1), gen_operator(spec, id, 0, 2)};
  for (const char* row : {"PROD-DIST", "PROD-DIST2", "ANTI-DIST", "COMM-MAIN", "COMM-COR"}) {
    const Certificate c = evaluate_certificate(row, id, ops);
    CHECK_MESSAGE(c.verdict == Verdict::pass, row);
    CHECK(std::any_of(c.slacks.begin(), c.slacks.end(), [](const Slack& s) { return s.allowance > 0.0; }));
  }
}

TEST_CASE("ANTICOMM-SHARP: statement variant is informational") {
  const Certificate c = evaluate_certificate("ANTICOMM-SHARP", identity_space(2), {kShift, kShift, {}});
  CHECK(c.verdict == Verdict::pass);
  CHECK(std::any_of(c.slacks.begin(), c.slacks.end(), [](const Slack& s) { return s.informational && s.value < 0.0; }));
}

TEST_CASE("suite helpers") {
  CHECK(parse_suite("section4") == Suite::section4);
  CHECK_FALSE(parse_suite("section5").has_value());
  CHECK(suite_needs_s(Suite::all));
  CHECK_FALSE(suite_needs_s(Suite::section2));
  CHECK(to_string(Verdict::inconclusive) == "INCONCLUSIVE");
}
