#include "shnr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "shnr/parallel.hpp"
#include "shnr/random.hpp"

namespace shnr {

namespace {

constexpr std::size_t kChunk = 1 << 15;

enum class Kind { radius, crawford, norm, cosine };

struct Forms {
  CMatrix at;   // A T
  CMatrix tat;  // T^* A T
  CMatrix lift;  // S^+ U_r: compressed coordinates to C^n
};

double sample_chunk(const Forms& f, Kind kind, std::size_t count, std::uint64_t key) {
  CounterRng rng(key);
  std::normal_distribution<double> normal;
  const Eigen::Index r = f.lift.cols();
  CVector g(r);
  const bool maximize = kind == Kind::radius || kind == Kind::norm;
  double best = maximize ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    for (Eigen::Index i = 0; i < r; ++i) g(i) = Complex(normal(rng), normal(rng));
    g.normalize();
    const CVector x = f.lift * g;  // ||x||_A = 1
    double v = 0.0;
    switch (kind) {
      case Kind::radius:
      case Kind::crawford:
        v = std::abs(x.dot(f.at * x));
        break;
      case Kind::norm:
        v = std::sqrt(std::max(0.0, x.dot(f.tat * x).real()));
        break;
      case Kind::cosine: {
        const double tx = std::sqrt(std::max(0.0, x.dot(f.tat * x).real()));
        if (tx <= 1e-14) continue;
        v = std::abs(x.dot(f.at * x)) / tx;
        break;
      }
    }
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

double run(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed, Kind kind) {
  if (!admits_adjoint(sp, t)) throw NoAdjoint("oracle requires T in B_A(H)");
  if (samples == 0) throw Error("oracle needs at least one sample");
  Forms f;
  f.at = sp.weight() * t;
  f.tat = t.adjoint() * f.at;
  f.lift = sp.range_basis() * sp.range_eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  const bool maximize = kind == Kind::radius || kind == Kind::norm;
  if (f.lift.cols() == 0) return 0.0;

  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t count = std::min(kChunk, samples - c * kChunk);
    partial[c] = sample_chunk(f, kind, count, stream_key(seed, c, 0x0a11));
  });
  return maximize ? *std::max_element(partial.begin(), partial.end())
                  : *std::min_element(partial.begin(), partial.end());
}

}  // namespace

double oracle_sample_wA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed) {
  return run(sp, t, samples, seed, Kind::radius);
}

double oracle_sample_cA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed) {
  return run(sp, t, samples, seed, Kind::crawford);
}

double oracle_sample_normA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed) {
  return run(sp, t, samples, seed, Kind::norm);
}

double oracle_sample_cosA(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t samples, std::uint64_t seed) {
  return run(sp, t, samples, seed, Kind::cosine);
}

}  // namespace shnr
