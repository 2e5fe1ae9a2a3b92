#pragma once

#include <initializer_list>
#include <random>

#include "shnr/ensembles.hpp"
#include "shnr/random.hpp"
#include "shnr/space.hpp"

namespace shnr::test {

inline CMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.begin()->size());
  CMatrix out(n, m);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const Complex& v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t key) {
  CounterRng rng(key);
  std::normal_distribution<double> normal;
  CMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = Complex(normal(rng), normal(rng));
  return out;
}

inline CVector random_vector(Eigen::Index n, std::uint64_t key) { return random_matrix(n, 1, key).col(0); }

inline CMatrix random_hermitian(Eigen::Index n, std::uint64_t key) {
  const CMatrix g = random_matrix(n, n, key);
  return (g + g.adjoint()) / 2.0;
}

inline CMatrix random_unitary(Eigen::Index n, std::uint64_t key) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(n, n, key));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

/// ||x - y||_F / max(1, ||y||_F).
inline double rel_residual(const CMatrix& x, const CMatrix& y) { return (x - y).norm() / std::max(1.0, y.norm()); }

/// Largest singular value by power iteration on M^* M.
inline double power_norm(const CMatrix& m, int iters = 2000) {
  CVector v = random_vector(m.cols(), 0xbeef);
  double sigma = 0.0;
  for (int k = 0; k < iters; ++k) {
    const CVector w = m.adjoint() * (m * v);
    const double len = w.norm();
    if (len == 0.0) return 0.0;
    v = w / len;
    sigma = (m * v).norm();
  }
  return sigma;
}

struct Instance {
  SemiHilbertSpace sp;
  CMatrix t;
  CMatrix s;
};

inline Instance random_instance(Eigen::Index n, Eigen::Index r, std::size_t trial, std::uint64_t seed,
                                Family family = Family::generic) {
  EnsembleSpec spec;
  spec.dim = n;
  spec.rank = r;
  spec.trials = trial + 1;
  spec.seed = seed;
  spec.family = family;
  SemiHilbertSpace sp = gen_space(spec, trial);
  CMatrix t = gen_operator(spec, sp, trial, 0);
  CMatrix s = gen_operator(spec, sp, trial, 1);
  return {std::move(sp), std::move(t), std::move(s)};
}

/// Ranks {n, n - 1, ceil(n/2)} cycled by trial index, clipped to >= 1.
inline Eigen::Index mixed_rank(Eigen::Index n, std::size_t trial) {
  const Eigen::Index options[3] = {n, std::max<Eigen::Index>(1, n - 1), (n + 1) / 2};
  return options[trial % 3];
}

}  // namespace shnr::test
