#include "shnr/numerical_range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace shnr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxActiveCells = 64;
constexpr int kStallRounds = 3;

}  // namespace

void ScanConfig::validate() const {
  if (grid_points < 16) throw Error("grid_points must be at least 16");
  if (!(refine_tol > 0.0)) throw Error("refine_tol must be positive");
  if (!(distance_tol > 0.0)) throw Error("distance_tol must be positive");
}

namespace {

// Per-thread storage for the rotated Hermitian part and its eigensolver.
struct EigWorkspace {
  CMatrix h;
  CVector bx;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver;

  void solve(const CMatrix& b, Complex phase) {
    h.noalias() = phase * b;
    h.noalias() += std::conj(phase) * b.adjoint();
    h *= 0.5;
    solver.compute(h);
  }

  Complex point(const CMatrix& b, Eigen::Index col) {
    const auto x = solver.eigenvectors().col(col);
    bx.noalias() = b * x;
    return x.dot(bx);
  }
};

EigWorkspace& workspace() {
  thread_local EigWorkspace ws;
  return ws;
}

}  // namespace

SupportSample support_sample(const CMatrix& b, double theta) {
  const Complex phase = std::polar(1.0, theta);
  if (b.rows() == 1) {
    const Complex z = b(0, 0);
    return {theta, (phase * z).real(), z, phase};
  }
  EigWorkspace& ws = workspace();
  ws.solve(b, phase);
  const Eigen::Index top = b.rows() - 1;
  return {theta, ws.solver.eigenvalues()(top), ws.point(b, top), phase};
}

std::pair<SupportSample, SupportSample> support_pair(const CMatrix& b, double theta, double opposite) {
  const Complex phase = std::polar(1.0, theta);
  if (b.rows() == 1) {
    const Complex z = b(0, 0);
    const double h = (phase * z).real();
    return {{theta, h, z, phase}, {opposite, -h, z, -phase}};
  }
  EigWorkspace& ws = workspace();
  ws.solve(b, phase);
  const Eigen::Index top = b.rows() - 1;
  return {{theta, ws.solver.eigenvalues()(top), ws.point(b, top), phase},
          {opposite, -ws.solver.eigenvalues()(0), ws.point(b, 0), -phase}};
}

NumericalRangeScan::NumericalRangeScan(CMatrix b, const ScanConfig& cfg) : b_(std::move(b)), cfg_(cfg) {
  cfg_.validate();
  require_square(b_, "compressed operator");
  lipschitz_ = spectral_norm(b_);
  fuzz_ = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + lipschitz_) * static_cast<double>(b_.rows());
  grid_used_ = cfg_.grid_points;
  const double n = static_cast<double>(grid_used_);
  samples_.resize(grid_used_);
  if (grid_used_ % 2 == 0) {
    const std::size_t half = grid_used_ / 2;
    for (std::size_t k = 0; k < half; ++k) {
      auto [s, t] = support_pair(b_, kTwoPi * static_cast<double>(k) / n, kTwoPi * static_cast<double>(k + half) / n);
      samples_[k] = s;
      samples_[k + half] = t;
    }
  } else {
    for (std::size_t k = 0; k < grid_used_; ++k) samples_[k] = support_sample(b_, kTwoPi * static_cast<double>(k) / n);
  }
}

NumericalRangeScan NumericalRangeScan::shifted(Complex gamma) const {
  NumericalRangeScan out;
  const Eigen::Index r = b_.rows();
  out.b_ = b_ + gamma * CMatrix::Identity(r, r);
  out.cfg_ = cfg_;
  out.lipschitz_ = spectral_norm(out.b_);
  out.fuzz_ = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + out.lipschitz_) * static_cast<double>(r);
  out.grid_used_ = grid_used_;
  out.samples_ = samples_;
  for (SupportSample& s : out.samples_) {
    s.h += (s.phase * gamma).real();
    s.point += gamma;
  }
  return out;
}

NumericalRangeScan::Cell NumericalRangeScan::cell(std::size_t k) const {
  const std::size_t right = (k + 1) % samples_.size();
  double width = samples_[right].theta - samples_[k].theta;
  if (right == 0) width += kTwoPi;
  return {k, right, width};
}

double NumericalRangeScan::cell_upper(const Cell& c) const {
  const double h1 = samples_[c.left].h;
  const double h2 = samples_[c.right].h;
  const double m = std::max(h1, h2);
  // Directions inside the cell are nonnegative combinations a*u1 + b*u2 of the
  // endpoint directions with a + b <= 1/cos(width/2).
  if (c.width != sec_width_) {
    sec_width_ = c.width;
    sec_value_ = 1.0 / std::cos(0.5 * c.width);
  }
  const double wedge = m > 0.0 ? m * sec_value_ : m;
  const double lipschitz = 0.5 * (h1 + h2) + 0.5 * lipschitz_ * c.width;
  return std::min(wedge, lipschitz) + fuzz_;
}

double NumericalRangeScan::cell_lower(const Cell& c) const {
  const SupportSample& s1 = samples_[c.left];
  const SupportSample& s2 = samples_[c.right];
  const double d = c.width;
  // h(theta1 + t) >= Re(e^{i(theta1+t)} z1) = h1 cos t - q1 sin t, likewise from
  // the right end; both are replaced by tangent lines minus |z| t^2 / 2.
  const double q1 = (s1.phase * s1.point).imag();
  const double q2 = (s2.phase * s2.point).imag();
  auto left_line = [&](double t) { return s1.h - q1 * t; };
  auto right_line = [&](double t) { return s2.h + q2 * (d - t); };
  auto upper_env = [&](double t) { return std::max(left_line(t), right_line(t)); };
  double best = std::min(upper_env(0.0), upper_env(d));
  const double slope_gap = q2 - q1;
  if (slope_gap != 0.0) {
    const double t = (s1.h - s2.h - q2 * d) / slope_gap;
    if (t > 0.0 && t < d) best = std::min(best, upper_env(t));
  }
  const double rho = std::max(std::sqrt(abs2(s1.point)), std::sqrt(abs2(s2.point)));
  const double chord = best - 0.5 * rho * d * d;
  const double lipschitz = 0.5 * (s1.h + s2.h) - 0.5 * lipschitz_ * d;
  return std::max(chord, lipschitz) - fuzz_;
}

Complex NumericalRangeScan::cell_apex(const Cell& c) const {
  const SupportSample& s1 = samples_[c.left];
  const SupportSample& s2 = samples_[c.right];
  const double sn = std::sin(c.width);
  if (!(sn > 1e-300)) return s1.point;
  // Walk along the supporting line at theta1 until it meets the one at theta2.
  const double s = ((s2.phase * s1.point).real() - s2.h) / sn;
  return s1.point + s * Complex(0.0, 1.0) * std::conj(s1.phase);
}

void NumericalRangeScan::refine(std::vector<std::size_t> cells) {
  std::vector<SupportSample> fresh;
  fresh.reserve(cells.size());
  for (std::size_t k : cells) {
    const Cell c = cell(k);
    double mid = samples_[c.left].theta + 0.5 * c.width;
    if (mid >= kTwoPi) mid -= kTwoPi;
    fresh.push_back(support_sample(b_, mid));
  }
  std::vector<SupportSample> merged;
  merged.reserve(samples_.size() + fresh.size());
  std::sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });
  std::merge(samples_.begin(), samples_.end(), fresh.begin(), fresh.end(), std::back_inserter(merged),
             [](const auto& a, const auto& b) { return a.theta < b.theta; });
  samples_ = std::move(merged);
}

namespace {

// Bisects the cells whose excess over the incumbent exceeds `target`, at most
// kMaxActiveCells per round, until none remain or the largest excess stops
// shrinking.
template <typename Prepare, typename Excess, typename Bisect>
void refine_loop(std::size_t max_rounds, Prepare&& prepare, Excess&& excess, Bisect&& bisect) {
  double previous = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    prepare();
    std::vector<std::pair<double, std::size_t>> active = excess();
    if (active.empty()) return;
    std::sort(active.begin(), active.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    const double largest = active.front().first;
    stalled = largest > 0.75 * previous ? stalled + 1 : 0;
    if (stalled >= kStallRounds) return;
    previous = std::min(previous, largest);
    if (active.size() > kMaxActiveCells) active.resize(kMaxActiveCells);
    std::vector<std::size_t> cells;
    cells.reserve(active.size());
    for (const auto& a : active) cells.push_back(a.second);
    bisect(std::move(cells));
  }
}

}  // namespace

Enclosure NumericalRangeScan::radius() {
  if (lipschitz_ == 0.0) return {0.0, 0.0, 0.0, grid_used_};
  const double target = cfg_.refine_tol * std::max(1.0, lipschitz_);
  double incumbent = 0.0;
  auto prepare = [&] {
    incumbent = 0.0;
    for (const auto& s : samples_) incumbent = std::max(incumbent, s.h);
  };
  auto excess = [&] {
    std::vector<std::pair<double, std::size_t>> out;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      const double e = cell_upper(cell(k)) - incumbent;
      if (e > target) out.emplace_back(e, k);
    }
    return out;
  };
  refine_loop(cfg_.max_refine_iters, prepare, excess, [this](std::vector<std::size_t> c) { refine(std::move(c)); });
  prepare();
  double hi = incumbent;
  for (std::size_t k = 0; k < samples_.size(); ++k) hi = std::max(hi, cell_upper(cell(k)));
  hi = std::min(hi, lipschitz_ + fuzz_);
  return {incumbent, std::max(hi, incumbent), lipschitz_, grid_used_};
}

Enclosure NumericalRangeScan::crawford() {
  if (lipschitz_ == 0.0) return {0.0, 0.0, 0.0, grid_used_};
  const double target = cfg_.refine_tol * std::max(1.0, lipschitz_);
  double incumbent = 0.0;
  auto prepare = [&] {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& s : samples_) lowest = std::min(lowest, s.h);
    incumbent = std::max(0.0, -lowest);
  };
  auto excess = [&] {
    std::vector<std::pair<double, std::size_t>> out;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      const double e = std::max(0.0, -cell_lower(cell(k))) - incumbent;
      if (e > target) out.emplace_back(e, k);
    }
    return out;
  };
  refine_loop(cfg_.max_refine_iters, prepare, excess, [this](std::vector<std::size_t> c) { refine(std::move(c)); });
  prepare();
  double hi = incumbent;
  for (std::size_t k = 0; k < samples_.size(); ++k) hi = std::max(hi, -cell_lower(cell(k)));
  return {incumbent, std::max(hi, incumbent), lipschitz_, grid_used_};
}

Enclosure NumericalRangeScan::scalar_distance(double tol) {
  if (lipschitz_ == 0.0) {
    best_shift_ = 0.0;
    return {0.0, 0.0, 0.0, grid_used_};
  }
  const double target = tol * std::max(1.0, lipschitz_);
  Circle inner;
  std::vector<Complex> points;
  auto prepare = [&] {
    points.clear();
    for (const auto& s : samples_) points.push_back(s.point);
    inner = smallest_enclosing_circle(points);
  };
  auto excess = [&] {
    std::vector<std::pair<double, std::size_t>> out;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      const double e = std::sqrt(abs2(cell_apex(cell(k)) - inner.center)) - inner.radius;
      if (e > target) out.emplace_back(e, k);
    }
    return out;
  };
  refine_loop(cfg_.max_refine_iters, prepare, excess, [this](std::vector<std::size_t> c) { refine(std::move(c)); });
  prepare();
  std::vector<Complex> apexes;
  apexes.reserve(samples_.size());
  for (std::size_t k = 0; k < samples_.size(); ++k) apexes.push_back(cell_apex(cell(k)));
  const Circle outer = smallest_enclosing_circle(apexes);
  // W(B) lies in the circumscribed polygon, so any center c gives
  // d <= max |apex - c|; try the centers of both circles.
  double at_inner = 0.0;
  for (const Complex& v : apexes) at_inner = std::max(at_inner, std::sqrt(abs2(v - inner.center)));
  double hi = outer.radius;
  best_shift_ = -outer.center;
  if (at_inner < hi) {
    hi = at_inner;
    best_shift_ = -inner.center;
  }
  hi += fuzz_;
  return {inner.radius, std::max(hi, inner.radius), lipschitz_, grid_used_};
}

double NumericalRangeScan::crawford_lower_shifted(Complex gamma) const {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& s : samples_) {
    lowest = std::min(lowest, s.h + (s.phase * gamma).real());
  }
  return std::max(0.0, -lowest);
}

namespace {

Circle circle_from(Complex a, Complex b) { return {0.5 * (a + b), 0.5 * std::sqrt(abs2(a - b))}; }

Circle circle_from(Complex a, Complex b, Complex c) {
  const Complex ab = b - a;
  const Complex ac = c - a;
  const double det = 2.0 * (ab.real() * ac.imag() - ab.imag() * ac.real());
  if (std::abs(det) <= 1e-14 * abs2(ab) + 1e-14 * abs2(ac) + 1e-300) {
    // Collinear: the two farthest points span the circle.
    Circle best = circle_from(a, b);
    for (const Circle& cand : {circle_from(a, c), circle_from(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const double nab = abs2(ab);
  const double nac = abs2(ac);
  const Complex offset((ac.imag() * nab - ab.imag() * nac) / det, (ab.real() * nac - ac.real() * nab) / det);
  return {a + offset, std::sqrt(abs2(offset))};
}

bool outside(const Circle& c, Complex p) {
  const double r = c.radius * (1.0 + 1e-13) + 1e-300;
  return abs2(p - c.center) > r * r;
}

}  // namespace

Circle smallest_enclosing_circle(std::span<const Complex> input) {
  if (input.empty()) return {};
  std::vector<Complex> pts(input.begin(), input.end());
  std::mt19937_64 shuffler(0x5eedULL);
  std::shuffle(pts.begin(), pts.end(), shuffler);
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!outside(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (!outside(c, pts[j])) continue;
      c = circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (outside(c, pts[k])) c = circle_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  // Absorb rounding in the final radius.
  double r2 = 0.0;
  for (const Complex& p : pts) r2 = std::max(r2, abs2(p - c.center));
  c.radius = std::sqrt(r2);
  return c;
}

}  // namespace shnr
