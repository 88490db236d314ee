#include "krein/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "krein/error.hpp"

namespace krein {

namespace detail {

cplx log1p(cplx w) {
  const double a = w.real(), b = w.imag();
  // q = |1 + w|^2 - 1; near |1 + w| = 0 it cancels, so take the modulus directly
  const double q = a * (2.0 + a) + b * b;
  const double re = q > -0.5 ? 0.5 * std::log1p(q) : std::log(std::hypot(1.0 + a, b));
  return {re, std::atan2(b, 1.0 + a)};
}

cplx log1p_minus(cplx w) {
  if (std::norm(w) >= 1e-6) return log1p(w) - w;
  // -w^2/2 + w^3/3 - ...
  cplx term = w * w;
  cplx sum = 0.0;
  double sign = -1.0;
  for (int k = 2; k < 40; ++k) {
    const cplx add = sign * term / static_cast<double>(k);
    sum += add;
    if (std::norm(add) <= 1e-36 * std::norm(sum)) break;
    term *= w;
    sign = -sign;
  }
  return sum;
}

}  // namespace detail

namespace {

double real_log1p_minus(double w) {
  if (std::abs(w) >= 1e-3) return std::log1p(w) - w;
  double term = w * w, sum = 0.0, sign = -1.0;
  for (int k = 2; k < 40; ++k) {
    const double add = sign * term / k;
    sum += add;
    if (std::norm(add) <= 1e-36 * std::norm(sum)) break;
    term *= w;
    sign = -sign;
  }
  return sum;
}

// log(num / den) for num, den in the closed upper half-plane
cplx log_ratio(cplx num, cplx den) {
  const double r = std::norm(num) / std::norm(den);
  const double re = r > 0.0 && std::isfinite(r) ? 0.5 * std::log(r) : std::log(std::abs(num) / std::abs(den));
  return {re, std::arg(num) - std::arg(den)};
}

// integral over [t0, t1] of (f0 + s (t - t0)) / (t - z) dt
cplx cell_cauchy(double t0, double t1, double f0, double f1, cplx z) {
  const double dt = t1 - t0;
  const double s = (f1 - f0) / dt;
  const cplx zt = z - t0;
  const cplx w = -dt * std::conj(zt) / std::norm(zt);
  if (std::norm(w) < 0.25) return f0 * detail::log1p(w) + s * zt * detail::log1p_minus(w);
  // near t1 the real part of 1 + w cancels; use z - t1 directly
  const cplx z1(z.real() - t1, z.imag());
  const cplx log = std::norm(z1) < 0.25 * std::norm(zt) ? log_ratio(z1, zt) : detail::log1p(w);
  return (f0 + s * zt) * log + s * dt;
}

// integral over [t0, t1] of (f0 + s (t - t0)) t / (t^2 + 1) dt
double cell_regularization(double t0, double t1, double f0, double f1) {
  const double dt = t1 - t0;
  const double s = (f1 - f0) / dt;
  const double m = 0.5 * (t0 + t1);
  const double fm = 0.5 * (f0 + f1);
  const double j1 = 0.5 * std::log1p(2.0 * m * dt / (t0 * t0 + 1.0));
  const double q = 1.0 + t0 * t1;
  const double datan = q > 0 ? std::atan2(dt, q) : std::atan(t1) - std::atan(t0);
  return fm * j1 + s * (dt - datan - m * j1);
}

}  // namespace

GridFunction::GridFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size())
    fail(ErrorKind::construction, "grid and values differ in length");
  if (grid_.size() == 1) fail(ErrorKind::construction, "grid function needs at least two breakpoints");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i]))
      fail(ErrorKind::construction, "non-finite breakpoint or value");
    if (i > 0 && grid_[i] < grid_[i - 1]) fail(ErrorKind::construction, "grid must be nondecreasing");
    if (i > 1 && grid_[i] == grid_[i - 1] && grid_[i] == grid_[i - 2])
      fail(ErrorKind::construction, "breakpoint repeated more than twice");
  }
  if (!grid_.empty() && grid_.front() == grid_.back())
    fail(ErrorKind::construction, "grid function support has zero length");
}

double GridFunction::right_limit(double x) const {
  if (grid_.empty() || x < grid_.front() || x >= grid_.back()) return 0.0;
  // last index with grid[i] <= x
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (grid_[i] == x) return values_[i];
  const double t0 = grid_[i], t1 = grid_[i + 1];
  return values_[i] + (values_[i + 1] - values_[i]) * (x - t0) / (t1 - t0);
}

double GridFunction::left_limit(double x) const {
  if (grid_.empty() || x <= grid_.front() || x > grid_.back()) return 0.0;
  // first index with grid[i] >= x
  const auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  if (grid_[i] == x) return values_[i];
  const double t0 = grid_[i - 1], t1 = grid_[i];
  return values_[i - 1] + (values_[i] - values_[i - 1]) * (x - t0) / (t1 - t0);
}

double GridFunction::operator()(double x) const { return right_limit(x); }

double GridFunction::integral() const {
  double sum = 0.0;
  for_each_cell([&](double t0, double t1, double f0, double f1) { sum += 0.5 * (f0 + f1) * (t1 - t0); });
  return sum;
}

double GridFunction::integral(double a, double b) const {
  const GridFunction c = clipped(a, b);
  return c.empty() ? 0.0 : c.integral();
}

cplx GridFunction::cauchy(cplx z, Kernel kernel) const {
  cplx sum = 0.0;
  for_each_cell([&](double t0, double t1, double f0, double f1) { sum += cell_cauchy(t0, t1, f0, f1, z); });
  sum /= std::numbers::pi;
  if (kernel == Kernel::K1) sum -= regularization_offset();
  return sum;
}

double GridFunction::regularization_offset() const {
  double sum = 0.0;
  for_each_cell([&](double t0, double t1, double f0, double f1) { sum += cell_regularization(t0, t1, f0, f1); });
  return sum / std::numbers::pi;
}

cplx GridFunction::boundary(double x, Kernel kernel) const {
  double re = 0.0;
  double divergent = 0.0;  // coefficient of log|0|
  double scale = 0.0;
  for_each_cell([&](double t0, double t1, double f0, double f1) {
    const double dt = t1 - t0;
    const double s = (f1 - f0) / dt;
    scale = std::max({scale, std::abs(f0), std::abs(f1)});
    if (x == t0) {
      divergent -= f0;
      re += f0 * std::log(dt) + s * dt;
    } else if (x == t1) {
      divergent += f1;
      re += -f1 * std::log(dt) + s * dt;
    } else if (x > t0 && x < t1) {
      const double fx = f0 + s * (x - t0);
      re += fx * (std::log(t1 - x) - std::log(x - t0)) + s * dt;
    } else {
      const double xt = x - t0;
      const double w = dt / (-xt);
      if (std::abs(w) < 0.5)
        re += f0 * std::log1p(w) + s * xt * real_log1p_minus(w);
      else
        re += (f0 + s * xt) * std::log1p(w) + s * dt;
    }
  });
  re /= std::numbers::pi;
  if (std::abs(divergent) > 1e-12 * std::max(scale, 1e-300))
    re = divergent > 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  if (kernel == Kernel::K1 && std::isfinite(re)) re -= regularization_offset();
  const double im = 0.5 * (left_limit(x) + right_limit(x));
  return {re, im};
}

GridFunction GridFunction::clipped(double a, double b) const {
  if (grid_.empty() || b <= a) return {};
  const double lo = std::max(a, grid_.front());
  const double hi = std::min(b, grid_.back());
  if (hi <= lo) return {};
  std::vector<double> g{lo}, v{right_limit(lo)};
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (grid_[i] > lo && grid_[i] < hi) {
      g.push_back(grid_[i]);
      v.push_back(values_[i]);
    }
  }
  g.push_back(hi);
  v.push_back(left_limit(hi));
  return GridFunction(std::move(g), std::move(v));
}

GridFunction linear_combination(const GridFunction& a, double wa, const GridFunction& b, double wb) {
  std::vector<double> positions(a.grid().begin(), a.grid().end());
  positions.insert(positions.end(), b.grid().begin(), b.grid().end());
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  if (positions.size() < 2) return {};
  std::vector<double> g, v;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const double x = positions[k];
    const double left = wa * a.left_limit(x) + wb * b.left_limit(x);
    const double right = wa * a.right_limit(x) + wb * b.right_limit(x);
    if (k == 0) {
      g.push_back(x);
      v.push_back(right);
    } else if (k + 1 == positions.size()) {
      g.push_back(x);
      v.push_back(left);
    } else {
      g.push_back(x);
      v.push_back(left);
      if (right != left) {
        g.push_back(x);
        v.push_back(right);
      }
    }
  }
  return GridFunction(std::move(g), std::move(v));
}

}  // namespace krein
