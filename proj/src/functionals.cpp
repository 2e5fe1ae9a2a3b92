#include "shnr/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace shnr {

Enclosure HermitianSegment::radius() const {
  const double m = std::max(std::abs(lo), std::abs(hi));
  return {std::max(0.0, m - skew), m + skew, 0.0, 0};
}

Enclosure HermitianSegment::crawford() const {
  const double m = lo <= 0.0 && hi >= 0.0 ? 0.0 : std::min(std::abs(lo), std::abs(hi));
  return {std::max(0.0, m - skew), m + skew, 0.0, 0};
}

DistanceEstimate HermitianSegment::distance() const {
  const double half = 0.5 * (hi - lo);
  return {half + skew, Complex(-0.5 * (lo + hi), 0.0), {std::max(0.0, half - skew), half + skew, 0.0, 0}};
}

std::optional<HermitianSegment> hermitian_segment(const CMatrix& b, double rel) {
  if (b.size() == 0) return HermitianSegment{};
  const double skew = 0.5 * (b - b.adjoint()).norm();
  if (skew > rel * std::max(1.0, b.norm())) return std::nullopt;
  const CMatrix h = 0.5 * (b + b.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return HermitianSegment{solver.eigenvalues()(0), solver.eigenvalues()(b.rows() - 1), skew};
}

std::optional<DistanceEstimate> ellipse_distance(const CMatrix& b) {
  if (b.rows() != 2 || b.cols() != 2) return std::nullopt;
  const Complex tr = b.trace();
  const Complex disc = tr * tr - 4.0 * b.determinant();
  const double fro = b.squaredNorm();
  const double q = 0.25 * (fro - 0.5 * abs2(tr) + 0.5 * std::sqrt(abs2(disc)));
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (fro + abs2(tr));
  if (q <= 1e4 * slack) return std::nullopt;
  const double hi = std::sqrt(q + slack);
  return DistanceEstimate{hi, -0.5 * tr, Enclosure{std::sqrt(q - slack), hi, 0.0, 0}};
}

Enclosure numerical_radius(const CMatrix& b, const ScanConfig& cfg) {
  if (b.size() == 0) return {};
  if (const auto seg = hermitian_segment(b)) return seg->radius();
  NumericalRangeScan scan(b, cfg);
  return scan.radius();
}

Enclosure crawford_number(const CMatrix& b, const ScanConfig& cfg) {
  if (b.size() == 0) return {};
  if (const auto seg = hermitian_segment(b)) return seg->crawford();
  NumericalRangeScan scan(b, cfg);
  return scan.crawford();
}

namespace {

// g(y) = |<By, y>|^2 / (||By||^2 ||y||^2), the squared cosine ratio. The
// buffers make repeated evaluation allocation-free.
struct CosObjective {
  const CMatrix& b;
  CMatrix bs = b.adjoint();
  mutable CVector by = CVector(b.rows());
  mutable CVector bsy = CVector(b.rows());
  mutable CVector bsby = CVector(b.rows());

  double value(const CVector& y) const {
    by.noalias() = b * y;
    const double p = by.squaredNorm();
    const double s = y.squaredNorm();
    if (p == 0.0 || s == 0.0) return 1.0;  // excluded from the infimum
    return abs2(y.dot(by)) / (p * s);
  }

  // Real gradient packed as a complex vector: 2 dg/d(conj y).
  void gradient(const CVector& y, CVector& g) const {
    by.noalias() = b * y;
    bsy.noalias() = bs * y;
    bsby.noalias() = bs * by;
    const Complex q = y.dot(by);
    const double p = by.squaredNorm();
    const double s = y.squaredNorm();
    if (p == 0.0 || s == 0.0) {
      g.setZero();
      return;
    }
    const double q2 = abs2(q);
    const double ps = p * s;
    g = (2.0 / ps) * (std::conj(q) * by + q * bsy) - (2.0 * q2 / (p * ps)) * bsby - (2.0 * q2 / (s * ps)) * y;
  }
};

// Armijo gradient descent on the unit sphere; g is scale and phase invariant.
// cos = sqrt(g) enters the certificates through sin = sqrt(1 - g), so g is
// only needed to about 1e-16 absolute.
double descend(const CosObjective& obj, const CVector& start, int max_iter = 300) {
  constexpr double kFloor = 1e-18;
  CVector y = start.normalized();
  CVector grad(y.size());
  CVector trial(y.size());
  double g = obj.value(y);
  double step = 1.0;
  for (int it = 0; it < max_iter && g > kFloor; ++it) {
    obj.gradient(y, grad);
    const double gn = grad.squaredNorm();
    if (gn < 1e-32) break;
    bool accepted = false;
    double gain = 0.0;
    while (step > 1e-14) {
      trial = y - step * grad;
      const double tn = trial.norm();
      if (tn > 0.0) {
        trial /= tn;
        const double gt = obj.value(trial);
        if (gt <= g - 1e-4 * step * gn) {
          gain = g - gt;
          y.swap(trial);
          g = gt;
          step = std::min(step * 2.0, 1e3);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted || gain <= 1e-13 * g + 1e-20) break;
  }
  return g;
}

CVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v;
}

}  // namespace

CosEstimate cos_angle(const CMatrix& b, std::size_t starts, std::uint64_t seed) {
  require_square(b, "compressed operator");
  const Eigen::Index r = b.rows();
  if (spectral_norm(b) <= 1e-13) throw ZeroOperator("|cos| is undefined for an operator with ||B|| = 0");
  if (r == 1) return {1.0, true, 0};

  const CosObjective obj{b};
  std::mt19937_64 rng(seed);
  std::vector<CVector> seeds;
  for (std::size_t k = 0; k < starts; ++k) seeds.push_back(random_vector(r, rng));

  // Extreme eigenvectors of the rotated Hermitian parts: the touching points
  // of W(B) in eight directions (H_{theta + pi} = -H_theta gives the other eight).
  for (int k = 0; k < 8; ++k) {
    const Complex phase = std::polar(1.0, std::numbers::pi * k / 8.0);
    const CMatrix h = (phase * b + std::conj(phase) * b.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    seeds.push_back(solver.eigenvectors().col(0));
    seeds.push_back(solver.eigenvectors().col(r - 1));
  }

  const bool certified = r <= kCosBruteForceRank;
  if (certified) {
    // Keep the best few of a dense random sample as extra starting points.
    constexpr std::size_t kKeep = 8;
    std::vector<std::pair<double, CVector>> best;
    std::normal_distribution<double> normal;
    CVector y(r);
    for (std::size_t k = 0; k < kCosDenseSamples; ++k) {
      for (Eigen::Index i = 0; i < r; ++i) y(i) = Complex(normal(rng), normal(rng));
      double p = 0.0;
      Complex q{};
      for (Eigen::Index i = 0; i < r; ++i) {
        Complex bi{};
        for (Eigen::Index j = 0; j < r; ++j) bi += b(i, j) * y(j);
        p += abs2(bi);
        q += std::conj(y(i)) * bi;
      }
      if (p == 0.0) continue;
      const double g = abs2(q) / (p * y.squaredNorm());
      if (best.size() == kKeep && g >= best.back().first) continue;
      if (best.size() == kKeep) best.pop_back();
      best.emplace_back(g, y);
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
    }
    for (auto& [g, v] : best) seeds.push_back(std::move(v));
  }

  double lowest = 1.0;
  for (const CVector& y : seeds) lowest = std::min(lowest, descend(obj, y));
  return {std::clamp(std::sqrt(lowest), 0.0, 1.0), certified, seeds.size()};
}

double sine_from_cosine(double cosine) {
  const double c = std::clamp(cosine, 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

DistanceEstimate scalar_distance(NumericalRangeScan& scan, const Enclosure& radius) {
  const Enclosure bracket = scan.scalar_distance(scan.config().distance_tol);
  if (radius.hi <= bracket.hi) return {radius.hi, Complex{}, bracket};
  return {bracket.hi, scan.best_shift(), bracket};
}

namespace {

using Point = std::array<double, 2>;

template <typename F>
std::pair<Point, double> nelder_mead(F&& f, Point start, double size, int max_iter) {
  std::array<Point, 3> x{start, Point{start[0] + size, start[1]}, Point{start[0], start[1] + size}};
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  auto combine = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int lo = order[0], mid = order[1], hi = order[2];
    if (std::abs(fx[hi] - fx[lo]) <= 1e-15 * (1.0 + std::abs(fx[lo]))) break;
    const Point centroid{0.5 * (x[lo][0] + x[mid][0]), 0.5 * (x[lo][1] + x[mid][1])};
    const Point reflected = combine(centroid, x[hi], -1.0);
    const double fr = f(reflected);
    if (fr < fx[lo]) {
      const Point expanded = combine(centroid, x[hi], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        x[hi] = expanded, fx[hi] = fe;
      } else {
        x[hi] = reflected, fx[hi] = fr;
      }
    } else if (fr < fx[mid]) {
      x[hi] = reflected, fx[hi] = fr;
    } else {
      const Point contracted = combine(centroid, x[hi], 0.5);
      const double fc = f(contracted);
      if (fc < fx[hi]) {
        x[hi] = contracted, fx[hi] = fc;
      } else {
        for (int k : {mid, hi}) {
          x[k] = combine(x[lo], x[k], 0.5);
          fx[k] = f(x[k]);
        }
      }
    }
  }
  const auto best = std::min_element(fx.begin(), fx.end()) - fx.begin();
  return {x[best], fx[best]};
}

}  // namespace

GapBound gap_bound(NumericalRangeScan& scan, const Enclosure& radius) {
  const CMatrix& b = scan.matrix();
  const Eigen::Index r = b.rows();
  const double norm = scan.lipschitz();
  GapBound out;
  out.lhs = norm * norm - radius.lo * radius.lo;
  if (norm == 0.0) return out;

  // The search objective bounds c from below by the samples taken so far, so
  // it over-estimates the true objective at each gamma.
  auto objective = [&](const Point& p) {
    const Complex gamma(p[0], p[1]);
    const CMatrix shifted = b + gamma * CMatrix::Identity(r, r);
    const double n = spectral_norm(shifted);
    const double c = scan.crawford_lower_shifted(gamma);
    return n * n - c * c;
  };

  const double reach = 2.0 * norm + 1.0;
  std::vector<Point> candidates{{0.0, 0.0}};
  const Complex centroid = -b.trace() / static_cast<double>(r);
  candidates.push_back({centroid.real(), centroid.imag()});
  constexpr int kGrid = 11;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const Point p{reach * (2.0 * i / (kGrid - 1) - 1.0), reach * (2.0 * j / (kGrid - 1) - 1.0)};
      if (p[0] * p[0] + p[1] * p[1] <= reach * reach) candidates.push_back(p);
    }
  }
  std::vector<std::pair<double, Point>> scored;
  for (const Point& p : candidates) scored.emplace_back(objective(p), p);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& c) { return a.first < c.first; });

  double best = scored.front().first;
  Point arg = scored.front().second;
  for (std::size_t k = 0; k < std::min<std::size_t>(2, scored.size()); ++k) {
    const auto [p, v] = nelder_mead(objective, scored[k].second, reach / kGrid, 100);
    if (v < best) best = v, arg = p;
  }
  // Re-evaluate at the chosen shift with a certified Crawford enclosure; its
  // upper end keeps the reported value at or below the true objective there.
  out.shift = Complex(arg[0], arg[1]);
  NumericalRangeScan shifted = scan.shifted(out.shift);
  const double n = shifted.lipschitz();
  const double c = shifted.crawford().hi;
  out.rhs = std::min(best, n * n - c * c);
  return out;
}

double op_seminorm(const SemiHilbertSpace& sp, const CMatrix& t) { return spectral_norm(compress(sp, t).b); }

Enclosure w_A(const SemiHilbertSpace& sp, const CMatrix& t, const ScanConfig& cfg) {
  return numerical_radius(compress(sp, t).b, cfg);
}

Enclosure crawford_A(const SemiHilbertSpace& sp, const CMatrix& t, const ScanConfig& cfg) {
  return crawford_number(compress(sp, t).b, cfg);
}

CosEstimate cos_A(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t starts) {
  const CMatrix b = compress(sp, t).b;
  if (b.size() == 0) throw ZeroOperator("A = 0");
  return cos_angle(b, starts);
}

CosEstimate sin_A(const SemiHilbertSpace& sp, const CMatrix& t, std::size_t starts) {
  CosEstimate c = cos_A(sp, t, starts);
  c.value = sine_from_cosine(c.value);
  return c;
}

DistanceEstimate dist_to_scalars(const SemiHilbertSpace& sp, const CMatrix& r, const ScanConfig& cfg) {
  const CMatrix b = compress(sp, r).b;
  if (b.size() == 0) return {};
  if (const auto seg = hermitian_segment(b)) return seg->distance();
  if (const auto ellipse = ellipse_distance(b)) return *ellipse;
  NumericalRangeScan scan(b, cfg);
  const Enclosure radius = scan.radius();
  return scalar_distance(scan, radius);
}

GapBound gap_bound(const SemiHilbertSpace& sp, const CMatrix& t, const ScanConfig& cfg) {
  const CMatrix b = compress(sp, t).b;
  if (b.size() == 0) return {};
  NumericalRangeScan scan(b, cfg);
  const Enclosure radius = scan.radius();
  return gap_bound(scan, radius);
}

}  // namespace shnr
