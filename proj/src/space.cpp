#include "shnr/space.hpp"

#include <string>

namespace shnr {

SemiHilbertSpace make_space(const CMatrix& a, std::optional<RankTolerance> tol, double membership_tol) {
  require_square(a, "A");
  require_finite(a, "A");
  if (!(membership_tol > 0.0)) throw Error("membership tolerance must be positive");
  const RankTolerance rank_tol = tol.value_or(RankTolerance::for_shape(a.rows(), a.cols()));
  const Eigen::Index n = a.rows();

  SemiHilbertSpace sp(rank_tol);
  sp.membership_tol_ = membership_tol;

  if (a.isIdentity(0.0)) {
    sp.identity_ = true;
    sp.a_ = CMatrix::Identity(n, n);
    sp.sqrt_a_ = sp.a_;
    sp.sqrt_a_pinv_ = sp.a_;
    sp.a_pinv_ = sp.a_;
    sp.range_basis_ = sp.a_;
    sp.projection_ = sp.a_;
    sp.range_eigenvalues_ = RVector::Ones(n);
    return sp;
  }

  const auto spec = psd_spectrum(a, rank_tol);
  const Eigen::Index r = spec.rank;
  sp.a_ = (a + a.adjoint()) / 2.0;
  sp.range_basis_ = spec.eigenvectors.rightCols(r);
  sp.range_eigenvalues_ = spec.eigenvalues.tail(r);

  const CMatrix& u = sp.range_basis_;
  const RVector root = sp.range_eigenvalues_.cwiseSqrt();
  sp.sqrt_a_ = u * root.asDiagonal() * u.adjoint();
  sp.sqrt_a_pinv_ = u * root.cwiseInverse().asDiagonal() * u.adjoint();
  sp.a_pinv_ = u * sp.range_eigenvalues_.cwiseInverse().asDiagonal() * u.adjoint();
  sp.projection_ = u * u.adjoint();
  return sp;
}

SemiHilbertSpace identity_space(Eigen::Index n) { return make_space(CMatrix::Identity(n, n)); }

namespace {

void require_vector(const SemiHilbertSpace& sp, const CVector& x, const char* name) {
  if (x.size() != sp.dim()) {
    throw DimensionMismatch(std::string(name) + " has length " + std::to_string(x.size()) +
                            ", space dimension is " + std::to_string(sp.dim()));
  }
}

}  // namespace

void require_operator(const SemiHilbertSpace& sp, const CMatrix& t, const char* name) {
  if (t.rows() != sp.dim() || t.cols() != sp.dim()) {
    throw DimensionMismatch(std::string(name) + " is " + std::to_string(t.rows()) + "x" +
                            std::to_string(t.cols()) + ", space dimension is " + std::to_string(sp.dim()));
  }
  require_finite(t, name);
}

Complex semi_inner(const SemiHilbertSpace& sp, const CVector& x, const CVector& y) {
  require_vector(sp, x, "x");
  require_vector(sp, y, "y");
  return y.dot(sp.weight() * x);  // Eigen's dot conjugates the left operand
}

double vec_seminorm(const SemiHilbertSpace& sp, const CVector& x) {
  require_vector(sp, x, "x");
  return (sp.sqrt_weight() * x).norm();
}

bool admits_adjoint(const SemiHilbertSpace& sp, const CMatrix& t) {
  require_operator(sp, t, "T");
  if (sp.is_identity() || sp.rank() == sp.dim()) return true;
  const CMatrix tsa = t.adjoint() * sp.weight();
  // (I - P) X = X - U (U^* X)
  const CMatrix outside = tsa - sp.range_basis() * (sp.range_basis().adjoint() * tsa);
  return outside.norm() <= sp.membership_tol() * std::max(1.0, tsa.norm());
}

CMatrix sharp(const SemiHilbertSpace& sp, const CMatrix& t) {
  if (!admits_adjoint(sp, t)) throw NoAdjoint("R(T*A) is not contained in R(A)");
  if (sp.is_identity()) return t.adjoint();
  return sp.weight_pinv() * (t.adjoint() * sp.weight());
}

bool is_A_selfadjoint(const SemiHilbertSpace& sp, const CMatrix& t) {
  require_operator(sp, t, "T");
  const CMatrix at = sp.weight() * t;
  return (at - at.adjoint()).norm() <= sp.membership_tol() * std::max(1.0, at.norm());
}

bool is_A_positive(const SemiHilbertSpace& sp, const CMatrix& t) {
  if (!is_A_selfadjoint(sp, t)) return false;
  const CMatrix at = sp.weight() * t;
  const CMatrix sym = (at + at.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0) >= -sp.membership_tol() * std::max(1.0, at.norm());
}

CompressedOperator compress(const SemiHilbertSpace& sp, const CMatrix& t) {
  if (!admits_adjoint(sp, t)) throw NoAdjoint("cannot compress an operator outside B_A(H)");
  if (sp.is_identity()) return {t, sp.dim()};
  const CMatrix& u = sp.range_basis();
  const RVector root = sp.range_eigenvalues().cwiseSqrt();
  // U^* S T S^+ U = D^{1/2} (U^* T U) D^{-1/2}
  CMatrix b = root.asDiagonal() * (u.adjoint() * t * u) * root.cwiseInverse().asDiagonal();
  return {std::move(b), sp.dim()};
}

CVector compress_vector(const SemiHilbertSpace& sp, const CVector& x) {
  require_vector(sp, x, "x");
  if (sp.is_identity()) return x;
  return sp.range_eigenvalues().cwiseSqrt().asDiagonal() * (sp.range_basis().adjoint() * x);
}

CVector lift_vector(const SemiHilbertSpace& sp, const CVector& y) {
  if (y.size() != sp.rank()) throw DimensionMismatch("compressed vector length differs from rank");
  if (sp.is_identity()) return y;
  return sp.range_basis() * (sp.range_eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * y);
}

}  // namespace shnr
