#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "shnr/linalg.hpp"

namespace shnr {

/// Parameters of the rotation-angle scan. The scan samples
/// h(theta) = lambda_max((e^{i theta} B + e^{-i theta} B^*) / 2),
/// the support function of the numerical range W(B).
struct ScanConfig {
  std::size_t grid_points = 1024;
  double refine_tol = 1e-12;
  std::size_t max_refine_iters = 200;
  /// Relative accuracy requested from the scalar-distance bracket.
  double distance_tol = 1e-10;

  void validate() const;
};

/// Certified bracket [lo, hi] of a scan-based quantity. `lo` is always attained
/// by an explicit vector, so it is the value reported as the point estimate.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;
  double lipschitz_bound = 0.0;
  std::size_t grid_used = 0;

  double width() const { return hi - lo; }
  double value() const { return lo; }
};

/// One evaluation of the support function: h = <H_theta x, x> for the top
/// eigenvector x, and the boundary point z = <Bx, x> of W(B) it touches.
struct SupportSample {
  double theta = 0.0;
  double h = 0.0;
  Complex point{};
  Complex phase{1.0, 0.0};  // e^{i theta}
};

SupportSample support_sample(const CMatrix& b, double theta);

/// Samples at theta and theta + pi from one eigendecomposition, using
/// H_{theta + pi} = -H_theta.
std::pair<SupportSample, SupportSample> support_pair(const CMatrix& b, double theta, double opposite);

/// Sampled support function of W(B) with adaptive refinement.
///
/// The initial grid is uniform in [0, 2pi). Refinement inserts midpoints into
/// the cells that can still hide the extremum. Between two neighbouring samples
/// the support function is bracketed geometrically: W(B) lies inside the two
/// supporting half-planes (upper bound) and contains the chord between the two
/// touching points (lower bound). Both bounds are second order in the cell
/// width, so certification converges quickly wherever the boundary of W(B) is
/// curved. Where h is flat across many cells (W(B) a disk) the refinement
/// stalls; the attained value `lo` is then exact up to rounding but `hi` keeps
/// the polygon excess.
class NumericalRangeScan {
 public:
  NumericalRangeScan(CMatrix b, const ScanConfig& cfg);

  /// The scan of B + gamma I, derived from this one without new
  /// eigendecompositions: the eigenvectors are unchanged, every support value
  /// moves by Re(e^{i theta} gamma) and every touching point by gamma.
  NumericalRangeScan shifted(Complex gamma) const;

  /// w(B) = max_theta h(theta) = max |z| over W(B).
  Enclosure radius();

  /// c(B) = max(0, -min_theta h(theta)), the distance from 0 to W(B).
  Enclosure crawford();

  /// min over complex zeta of w(B + zeta I): the radius of the smallest disk
  /// containing W(B). lo comes from the inscribed polygon of touching points,
  /// hi from the circumscribed polygon of supporting lines.
  Enclosure scalar_distance(double tol);

  /// The minimizing zeta of the last scalar_distance() call (minus the center).
  Complex best_shift() const { return best_shift_; }

  /// Lower bound on c(B + gamma I) from the samples taken so far.
  double crawford_lower_shifted(Complex gamma) const;

  double lipschitz() const { return lipschitz_; }
  std::span<const SupportSample> samples() const { return samples_; }
  const CMatrix& matrix() const { return b_; }
  const ScanConfig& config() const { return cfg_; }

 private:
  struct Cell {
    std::size_t left;
    std::size_t right;
    double width;
  };
  NumericalRangeScan() = default;
  Cell cell(std::size_t k) const;
  double cell_upper(const Cell& c) const;
  double cell_lower(const Cell& c) const;
  Complex cell_apex(const Cell& c) const;
  void refine(std::vector<std::size_t> cells);

  CMatrix b_;
  ScanConfig cfg_;
  double lipschitz_ = 0.0;
  double fuzz_ = 0.0;
  std::size_t grid_used_ = 0;
  std::vector<SupportSample> samples_;
  Complex best_shift_{};
  // One-entry cache of 1/cos(width/2); most cells share the grid width.
  mutable double sec_width_ = -1.0;
  mutable double sec_value_ = 1.0;
};

/// Smallest enclosing circle of a planar point set (points as complex numbers).
struct Circle {
  Complex center{};
  double radius = 0.0;
};
Circle smallest_enclosing_circle(std::span<const Complex> points);

}  // namespace shnr
