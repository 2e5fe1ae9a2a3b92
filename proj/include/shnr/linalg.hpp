#pragma once

// Dense complex kernel shared by every other module: Hermitian eigensolver,
// SVD, Moore-Penrose pseudoinverse, PSD square root and spectral norm.
// Everything is templated on the Eigen expression so that callers can pass
// blocks, products and adjoints without materializing them first.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "shnr/errors.hpp"

namespace shnr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// |z|^2 without the hypot call std::norm makes for complex<double>.
inline double abs2(Complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

/// Fraction of the largest singular value below which a singular value is
/// treated as zero.
class RankTolerance {
 public:
  explicit RankTolerance(double relative_cutoff) : cutoff_(relative_cutoff) {
    if (!(relative_cutoff >= 0.0 && relative_cutoff < 1.0)) {
      throw Error("rank tolerance must lie in [0, 1), got " + std::to_string(relative_cutoff));
    }
  }

  /// 1e-10 * max(rows, cols).
  static RankTolerance for_shape(Eigen::Index rows, Eigen::Index cols) {
    return RankTolerance(1e-10 * static_cast<double>(std::max(rows, cols)));
  }

  double relative_cutoff() const { return cutoff_; }

 private:
  double cutoff_;
};

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<typename Eigen::NumTraits<Scalar>::Real, Eigen::Dynamic, 1>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& name) {
  if (!m.allFinite()) throw NonFinite(name);
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const std::string& name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw NonSquare(name + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

template <typename Scalar>
struct HermitianEig {
  RealVector<Scalar> eigenvalues;  // ascending
  DenseMatrix<Scalar> eigenvectors;
};

/// Eigendecomposition M = V diag(lambda) V* of a Hermitian matrix.
/// The symmetry residual ||M - M*||_F must not exceed
/// hermiticity_tol * max(1, ||M||_F); the solver then works on (M + M*)/2.
template <typename Derived>
HermitianEig<typename Derived::Scalar> hermitian_eig(
    const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar hermiticity_tol = 1e-10) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  require_square(m, "hermitian_eig input");
  const DenseMatrix<Scalar> mm = m;
  const Real asym = (mm - mm.adjoint()).norm();
  if (asym > hermiticity_tol * std::max(Real(1), mm.norm())) {
    throw NotHermitian("||M - M*||_F = " + std::to_string(static_cast<double>(asym)));
  }
  const DenseMatrix<Scalar> sym = (mm + mm.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
struct Svd {
  DenseMatrix<Scalar> u;
  RealVector<Scalar> singular_values;  // nonincreasing
  DenseMatrix<Scalar> v;
};

/// Thin SVD, M = U diag(sigma) V*.
template <typename Derived>
Svd<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  require_finite(m, "svd input");
  Eigen::JacobiSVD<DenseMatrix<Scalar>> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

template <typename Derived>
typename Derived::RealScalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return 0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  // sigma_1^2 = lambda_max of the smaller Gram matrix; the largest eigenvalue
  // carries full relative accuracy, and this is several times cheaper than a
  // Jacobi SVD at small sizes.
  const DenseMatrix<Scalar> gram = m.rows() >= m.cols() ? DenseMatrix<Scalar>(m.adjoint() * m)
                                                        : DenseMatrix<Scalar>(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(gram, Eigen::EigenvaluesOnly);
  using std::sqrt;
  return sqrt(std::max(typename Derived::RealScalar(0), solver.eigenvalues()(gram.rows() - 1)));
}

/// Moore-Penrose inverse. Singular values <= cutoff * sigma_1 are zeroed
/// instead of inverted.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& m, RankTolerance tol) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  const auto dec = svd(m);
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(m.cols(), m.rows());
  if (dec.singular_values.size() == 0 || dec.singular_values(0) == Real(0)) return out;
  const Real cutoff = Real(tol.relative_cutoff()) * dec.singular_values(0);
  for (Eigen::Index k = 0; k < dec.singular_values.size(); ++k) {
    const Real s = dec.singular_values(k);
    if (s <= cutoff) break;
    out.noalias() += (dec.v.col(k) / s) * dec.u.col(k).adjoint();
  }
  return out;
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& m) {
  return pinv(m, RankTolerance::for_shape(m.rows(), m.cols()));
}

/// Spectral data of a PSD matrix after clamping: eigenvalues in
/// [-cutoff*lambda_max, cutoff*lambda_max] become exact zeros.
template <typename Scalar>
struct PsdSpectrum {
  RealVector<Scalar> eigenvalues;  // ascending, all >= 0
  DenseMatrix<Scalar> eigenvectors;
  Eigen::Index rank = 0;  // number of strictly positive eigenvalues (the last `rank` entries)
};

template <typename Derived>
PsdSpectrum<typename Derived::Scalar> psd_spectrum(const Eigen::MatrixBase<Derived>& a, RankTolerance tol,
                                                   typename Derived::RealScalar hermiticity_tol = 1e-10) {
  using Real = typename Derived::RealScalar;
  require_finite(a, "PSD input");
  auto eig = hermitian_eig(a, hermiticity_tol);
  const Eigen::Index n = eig.eigenvalues.size();
  const Real lambda_max = std::max(Real(0), eig.eigenvalues(n - 1));
  const Real most_negative = eig.eigenvalues(0);
  const Real cutoff = Real(tol.relative_cutoff()) * lambda_max;
  if (most_negative < -cutoff && most_negative < Real(0)) {
    throw NotPSD("eigenvalue " + std::to_string(static_cast<double>(most_negative)) +
                 " below clamping threshold " + std::to_string(static_cast<double>(-cutoff)));
  }
  PsdSpectrum<typename Derived::Scalar> out;
  out.eigenvalues = eig.eigenvalues;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (out.eigenvalues(k) <= cutoff) {
      out.eigenvalues(k) = 0;
    } else {
      ++out.rank;
    }
  }
  out.eigenvectors = std::move(eig.eigenvectors);
  return out;
}

/// Hermitian PSD square root S with S^2 = A and R(S) = R(A).
template <typename Derived>
DenseMatrix<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived>& a, RankTolerance tol) {
  const auto spec = psd_spectrum(a, tol);
  const auto& v = spec.eigenvectors;
  return v * spec.eigenvalues.cwiseSqrt().asDiagonal() * v.adjoint();
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived>& a) {
  return psd_sqrt(a, RankTolerance::for_shape(a.rows(), a.cols()));
}

}  // namespace shnr
