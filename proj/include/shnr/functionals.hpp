#pragma once

#include <cstdint>
#include <optional>

#include "shnr/numerical_range.hpp"
#include "shnr/space.hpp"

namespace shnr {

/// Estimate of the A-cosine |cos|_A T (or the A-sine, for sin_A).
///
/// The infimum is searched by multi-start local descent. `certified` is set
/// when the compressed rank is at most kCosBruteForceRank, where a dense
/// sampling stage of kCosDenseSamples points precedes the descent.
struct CosEstimate {
  double value = 0.0;
  bool certified = false;
  std::size_t starts_used = 0;
};

inline constexpr Eigen::Index kCosBruteForceRank = 3;
inline constexpr std::size_t kCosDenseSamples = 4096;

struct DistanceEstimate {
  double value = 0.0;  // upper bound on d_A
  Complex shift{};     // the zeta attaining `value`
  Enclosure bracket;
};

struct GapBound {
  double lhs = 0.0;  // ||T||_A^2 - w_A(T)^2
  double rhs = 0.0;  // upper bound on inf_gamma ||T + gamma I||_A^2 - c_A(T + gamma I)^2
  Complex shift{};
};

/// W(B) of a Hermitian B is the segment [lambda_min, lambda_max], so w, c and
/// d follow from two eigenvalues. `skew` = ||(B - B^*)/2||_F bounds the
/// distance to the Hermitian part and widens every enclosure.
struct HermitianSegment {
  double lo = 0.0;
  double hi = 0.0;
  double skew = 0.0;

  Enclosure radius() const;
  Enclosure crawford() const;
  DistanceEstimate distance() const;
};

/// The segment of B when its skew-Hermitian part is at rounding level
/// (at most rel * max(1, ||B||_F)); nullopt otherwise.
std::optional<HermitianSegment> hermitian_segment(const CMatrix& b, double rel = 1e-12);

/// For 2x2 B, W(B) is an ellipse and d is its semi-major axis
/// a = sqrt((||B||_F^2 - |tr B|^2/2 + |tr(B)^2 - 4 det B|/2) / 4), centred at tr(B)/2.
/// Returns nullopt for other sizes and when a is too close to zero for the
/// rounding bracket to be tight.
std::optional<DistanceEstimate> ellipse_distance(const CMatrix& b);

// Classical functionals of a plain square matrix B, i.e. of the compression.

Enclosure numerical_radius(const CMatrix& b, const ScanConfig& cfg = {});
Enclosure crawford_number(const CMatrix& b, const ScanConfig& cfg = {});
CosEstimate cos_angle(const CMatrix& b, std::size_t starts = 16, std::uint64_t seed = 0x0c05);
DistanceEstimate scalar_distance(NumericalRangeScan& scan, const Enclosure& radius);
GapBound gap_bound(NumericalRangeScan& scan, const Enclosure& radius);

// A-functionals of T in B_A(H). Each throws NoAdjoint for T outside B_A(H).

double op_seminorm(const SemiHilbertSpace& sp, const CMatrix& t);
Enclosure w_A(const SemiHilbertSpace& sp, const CMatrix& t, const ScanConfig& cfg = {});
Enclosure crawford_A(const SemiHilbertSpace& sp, const CMatrix& t, const ScanConfig& cfg = {});
/// Throws ZeroOperator when ||T||_A vanishes.
CosEstimate cos_A(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t starts = 16);
CosEstimate sin_A(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t starts = 16);
/// d_A(R) = inf over complex zeta of w_A(R + zeta I).
DistanceEstimate dist_to_scalars(const SemiHilbertSpace& sp, const CMatrix& r, const ScanConfig& cfg = {});
GapBound gap_bound(const SemiHilbertSpace& sp, const CMatrix& t, const ScanConfig& cfg = {});

/// sin from cos, clamped to [0, 1].
double sine_from_cosine(double cosine);

}  // namespace shnr
