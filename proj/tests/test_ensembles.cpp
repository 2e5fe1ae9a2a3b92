#include <doctest.h>

#include <atomic>
#include <cstdlib>

#include "shnr/campaign.hpp"
#include "shnr/ensembles.hpp"
#include "shnr/io.hpp"
#include "shnr/parallel.hpp"
#include "support.hpp"

using namespace shnr;

namespace {

EnsembleSpec spec_of(Eigen::Index n, Eigen::Index r, Family family = Family::generic, std::uint64_t seed = 11) {
  EnsembleSpec spec;
  spec.dim = n;
  spec.rank = r;
  spec.trials = 1;
  spec.seed = seed;
  spec.family = family;
  return spec;
}

}  // namespace

TEST_CASE("families: names round-trip") {
  for (Family f : {Family::generic, Family::a_selfadjoint, Family::a_positive, Family::nilpotent_classical,
                   Family::normal_classical})
    CHECK(parse_family(to_string(f)) == f);
  CHECK_FALSE(parse_family("unitary").has_value());
}

TEST_CASE("EnsembleSpec: validation") {
  CHECK_NOTHROW(spec_of(3, 2).validate());
  CHECK_THROWS_AS(spec_of(0, 0).validate(), Error);
  CHECK_THROWS_AS(spec_of(3, 4).validate(), Error);
  CHECK_THROWS_AS(spec_of(3, 0).validate(), Error);
  EnsembleSpec none = spec_of(2, 2);
  none.trials = 0;
  CHECK_THROWS_AS(none.validate(), Error);
  CHECK_THROWS_AS(spec_of(3, 2, Family::nilpotent_classical).validate(), FamilyNeedsIdentityA);
  CHECK_THROWS_AS(gen_operator(spec_of(2, 2, Family::normal_classical), make_space(test::mat({{1, 0}, {0, 2}})), 0),
                  FamilyNeedsIdentityA);
}

TEST_CASE("gen_space: deterministic, unit norm, requested rank") {
  for (std::size_t k = 0; k < 30; ++k) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(k % 5);
    const EnsembleSpec spec = spec_of(n, test::mixed_rank(n, k));
    const SemiHilbertSpace a = gen_space(spec, k);
    const SemiHilbertSpace b = gen_space(spec, k);
    CHECK(a.weight() == b.weight());
    CHECK(a.rank() == spec.rank);
    CHECK(spectral_norm(a.weight()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gen_space(spec, k + 1).weight() != a.weight());
  }
  const SemiHilbertSpace line = gen_space(spec_of(2, 1), 0);
  CHECK(line.range_projection().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("gen_operator: members of B_A(H)") {
  for (std::size_t k = 0; k < 200; ++k) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(k % 5);
    const EnsembleSpec spec = spec_of(n, test::mixed_rank(n, k));
    const SemiHilbertSpace sp = gen_space(spec, k);
    for (std::uint64_t stream = 0; stream < 3; ++stream) {
      const CMatrix t = gen_operator(spec, sp, k, stream);
      const CMatrix ta = t.adjoint() * sp.weight();
      const CMatrix off = (CMatrix::Identity(n, n) - sp.range_projection()) * ta;
      CHECK(off.norm() <= 1e-10 * std::max(1.0, ta.norm()));
      CHECK(admits_adjoint(sp, t));
    }
    CHECK(gen_operator(spec, sp, k, 0) == gen_operator(spec, sp, k, 0));
    CHECK(gen_operator(spec, sp, k, 0) != gen_operator(spec, sp, k, 1));
  }
}

TEST_CASE("gen_operator: family structure") {
  for (std::size_t k = 0; k < 20; ++k) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(k % 5);
    const Eigen::Index r = test::mixed_rank(n, k);

    const EnsembleSpec sa = spec_of(n, r, Family::a_selfadjoint);
    const SemiHilbertSpace sp = gen_space(sa, k);
    CHECK(is_A_selfadjoint(sp, gen_operator(sa, sp, k)));

    const EnsembleSpec pos = spec_of(n, r, Family::a_positive);
    CHECK(is_A_positive(sp, gen_operator(pos, sp, k)));

    const EnsembleSpec nil = spec_of(n, n, Family::nilpotent_classical);
    const SemiHilbertSpace id = gen_space(nil, k);
    CHECK(id.is_identity());
    const CMatrix t = gen_operator(nil, id, k);
    CHECK((t * t).norm() == 0.0);
    CHECK(t.norm() > 0.0);

    const EnsembleSpec nor = spec_of(n, n, Family::normal_classical);
    const CMatrix m = gen_operator(nor, id, k);
    CHECK((m * m.adjoint() - m.adjoint() * m).norm() <= 1e-12 * std::max(1.0, m.squaredNorm()));
  }
}

TEST_CASE("parallel_for: every index once, exceptions propagate") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw Error("boom");
                  }),
                  Error);
  CHECK(thread_count() >= 1);
}

TEST_CASE("run_campaign: deterministic across thread counts") {
  EnsembleSpec spec = spec_of(3, 2);
  spec.trials = 6;
  const char* saved = std::getenv("SHNR_THREADS");
  const std::string before = saved ? saved : "";
  setenv("SHNR_THREADS", "1", 1);
  const std::string one = report_to_csv(run_campaign(spec, Suite::all));
  setenv("SHNR_THREADS", "3", 1);
  const Report three = run_campaign(spec, Suite::all);
  if (saved)
    setenv("SHNR_THREADS", before.c_str(), 1);
  else
    unsetenv("SHNR_THREADS");
  CHECK(one == report_to_csv(three));
  CHECK(three.records.size() == 6 * registry().size());
  CHECK(three.summary.fail == 0);
  CHECK(three.config["seed"] == 11);
}
