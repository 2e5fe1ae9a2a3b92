#include "shnr/ensembles.hpp"

#include <array>
#include <random>

#include "shnr/random.hpp"

namespace shnr {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 5> kFamilies{{
    {Family::generic, "generic"},
    {Family::a_selfadjoint, "a_selfadjoint"},
    {Family::a_positive, "a_positive"},
    {Family::nilpotent_classical, "nilpotent_classical"},
    {Family::normal_classical, "normal_classical"},
}};

bool is_classical(Family f) { return f == Family::nilpotent_classical || f == Family::normal_classical; }

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

// Key streams: 0x5 for A, 0x10 + operand stream for operators.
constexpr std::uint64_t kSpaceStream = 0x5;
constexpr std::uint64_t kOperatorStream = 0x10;

}  // namespace

std::string_view to_string(Family f) {
  for (const auto& [family, name] : kFamilies)
    if (family == f) return name;
  return "generic";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [family, label] : kFamilies)
    if (label == name) return family;
  return std::nullopt;
}

void EnsembleSpec::validate() const {
  if (dim < 1) throw Error("dim must be at least 1");
  if (rank < 1 || rank > dim) throw Error("rank must lie in [1, dim]");
  if (trials < 1) throw Error("trials must be at least 1");
  if (is_classical(family) && rank != dim)
    throw FamilyNeedsIdentityA(std::string(to_string(family)) + " needs rank == dim");
}

SemiHilbertSpace gen_space(const EnsembleSpec& spec, std::size_t trial) {
  spec.validate();
  const Eigen::Index n = spec.dim;
  if (is_classical(spec.family)) return identity_space(n);

  CounterRng rng(stream_key(spec.seed, trial, kSpaceStream));
  const CMatrix g = ginibre(n, n, rng);
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  RVector d = RVector::Zero(n);
  for (Eigen::Index i = 0; i < spec.rank; ++i) d(i) = uniform(rng);
  CMatrix a = g.adjoint() * d.asDiagonal() * g;
  a = (a + a.adjoint()) / 2.0;
  a /= spectral_norm(a);
  return make_space(a);
}

CMatrix gen_operator(const EnsembleSpec& spec, const SemiHilbertSpace& sp, std::size_t trial, std::uint64_t stream) {
  spec.validate();
  const Eigen::Index n = sp.dim();
  if (is_classical(spec.family) && !sp.is_identity())
    throw FamilyNeedsIdentityA(std::string(to_string(spec.family)) + " was given a non-identity space");

  CounterRng rng(stream_key(spec.seed, trial, kOperatorStream + stream));
  const CMatrix t0 = ginibre(n, n, rng);
  const CMatrix& p = sp.range_projection();
  const CMatrix id = CMatrix::Identity(n, n);

  switch (spec.family) {
    case Family::generic:
      // R(T^* A) = R(P T0^* A) lies in R(A).
      return t0 * p + (id - p) * t0 * (id - p);
    case Family::a_selfadjoint: {
      const CMatrix h = (t0 + t0.adjoint()) / 2.0;
      return sp.weight_pinv() * (p * h * p);
    }
    case Family::a_positive: {
      const CMatrix h = t0 * t0.adjoint();
      return sp.weight_pinv() * (p * h * p);
    }
    case Family::nilpotent_classical: {
      // [[0, X], [0, 0]] squares to zero exactly.
      const Eigen::Index top = n / 2 > 0 ? n / 2 : 1;
      CMatrix t = CMatrix::Zero(n, n);
      if (n > 1) t.topRightCorner(top, n - top) = t0.topRightCorner(top, n - top);
      return t;
    }
    case Family::normal_classical: {
      const Eigen::HouseholderQR<CMatrix> qr(t0);
      const CMatrix u = qr.householderQ();
      const CMatrix lambda = ginibre(n, 1, rng);
      return u * lambda.col(0).asDiagonal() * u.adjoint();
    }
  }
  return t0;
}

}  // namespace shnr
