#pragma once

#include <optional>

#include "shnr/linalg.hpp"

namespace shnr {

/// A finite-dimensional semi-Hilbertian space (C^n, <A., .>) for a PSD weight A.
///
/// All factors derived from A are computed once in make_space(): the square
/// root S = A^{1/2}, the pseudoinverses S^+ and A^+, an orthonormal basis U_r
/// of R(A) and the orthogonal projection P = U_r U_r^* onto R(A). The object is
/// immutable afterwards and safe to share between threads.
class SemiHilbertSpace {
 public:
  Eigen::Index dim() const { return a_.rows(); }
  Eigen::Index rank() const { return range_basis_.cols(); }

  const CMatrix& weight() const { return a_; }
  const CMatrix& sqrt_weight() const { return sqrt_a_; }
  const CMatrix& sqrt_weight_pinv() const { return sqrt_a_pinv_; }
  const CMatrix& weight_pinv() const { return a_pinv_; }
  const CMatrix& range_basis() const { return range_basis_; }
  const CMatrix& range_projection() const { return projection_; }
  /// Positive eigenvalues of A, matching the columns of range_basis().
  const RVector& range_eigenvalues() const { return range_eigenvalues_; }
  RankTolerance tolerance() const { return tol_; }
  /// Relative residual used by admits_adjoint().
  double membership_tol() const { return membership_tol_; }
  /// True when A is exactly the identity matrix.
  bool is_identity() const { return identity_; }

  friend SemiHilbertSpace make_space(const CMatrix& a, std::optional<RankTolerance> tol,
                                     double membership_tol);

 private:
  SemiHilbertSpace(RankTolerance tol) : tol_(tol) {}

  CMatrix a_;
  CMatrix sqrt_a_;
  CMatrix sqrt_a_pinv_;
  CMatrix a_pinv_;
  CMatrix range_basis_;
  CMatrix projection_;
  RVector range_eigenvalues_;
  RankTolerance tol_;
  double membership_tol_ = 1e-8;
  bool identity_ = false;
};

/// Builds the space for a Hermitian PSD A. The rank tolerance defaults to
/// 1e-10 * n; slightly negative eigenvalues within it are clamped to zero.
SemiHilbertSpace make_space(const CMatrix& a, std::optional<RankTolerance> tol = std::nullopt,
                            double membership_tol = 1e-8);

/// The n x n identity space.
SemiHilbertSpace identity_space(Eigen::Index n);

/// <x, y>_A = <Ax, y> = y^* A x (linear in x, conjugate-linear in y).
Complex semi_inner(const SemiHilbertSpace& sp, const CVector& x, const CVector& y);

/// ||x||_A = ||A^{1/2} x||.
double vec_seminorm(const SemiHilbertSpace& sp, const CVector& x);

/// Finite-dimensional membership test for B_A(H): R(T^* A) within R(A),
/// checked as ||(I - P) T^* A||_F <= membership_tol * max(1, ||T^* A||_F).
bool admits_adjoint(const SemiHilbertSpace& sp, const CMatrix& t);

/// The distinguished A-adjoint T# = A^+ T^* A. Throws NoAdjoint for T outside B_A(H).
CMatrix sharp(const SemiHilbertSpace& sp, const CMatrix& t);

/// AT Hermitian (relative tolerance sp.membership_tol()).
bool is_A_selfadjoint(const SemiHilbertSpace& sp, const CMatrix& t);

/// AT Hermitian and positive semidefinite.
bool is_A_positive(const SemiHilbertSpace& sp, const CMatrix& t);

/// The r x r matrix B = U_r^* S T S^+ U_r. For T in B_A(H), the A-seminorm,
/// A-numerical radius, A-Crawford number and A-cosine of T coincide with the
/// classical quantities of B.
struct CompressedOperator {
  CMatrix b;
  Eigen::Index source_dim = 0;
};

CompressedOperator compress(const SemiHilbertSpace& sp, const CMatrix& t);

/// Maps x in C^n to its coordinates y = U_r^* S x, so that ||x||_A = ||y|| and
/// <Tx, x>_A = <By, y>.
CVector compress_vector(const SemiHilbertSpace& sp, const CVector& x);

/// Inverse of compress_vector on R(A): x = S^+ U_r y.
CVector lift_vector(const SemiHilbertSpace& sp, const CVector& y);

void require_operator(const SemiHilbertSpace& sp, const CMatrix& t, const char* name);

}  // namespace shnr
