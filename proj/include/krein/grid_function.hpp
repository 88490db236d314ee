#pragma once

#include <complex>
#include <span>
#include <vector>

namespace krein {

using cplx = std::complex<double>;

/// Which Cauchy kernel to integrate against: the plain kernel 1/(t-z) or the
/// regularized kernel 1/(t-z) - t/(t^2+1).
enum class Kernel { K, K1 };

/// Piecewise-linear function on a finite breakpoint list, zero outside
/// [front, back]. Breakpoints are nondecreasing; a breakpoint repeated twice
/// encodes a jump discontinuity (left value, then right value).
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::vector<double> grid, std::vector<double> values);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  bool empty() const { return grid_.empty(); }
  double front() const { return grid_.front(); }
  double back() const { return grid_.back(); }

  /// Right-continuous point value (jumps take the right value).
  double operator()(double x) const;
  double left_limit(double x) const;
  double right_limit(double x) const;

  double integral() const;
  /// Integral over [a, b] restricted to the support.
  double integral(double a, double b) const;

  /// (1/pi) * integral of f(t) * kernel(t, z) dt, closed form per linear piece.
  cplx cauchy(cplx z, Kernel kernel) const;

  /// Exact limit of cauchy(x + i*eps) as eps -> 0: principal value real part
  /// plus i * f(x) (average of one-sided values at a jump). The real part is
  /// +-infinity at jump discontinuities.
  cplx boundary(double x, Kernel kernel) const;

  /// (1/pi) * integral of f(t) t / (t^2 + 1) dt, the K - K1 offset.
  double regularization_offset() const;

  /// Clip to [a, b]; empty result when the overlap has zero length.
  GridFunction clipped(double a, double b) const;

  bool operator==(const GridFunction&) const = default;

  /// Calls fn(t0, t1, f0, f1) for every cell of positive length.
  template <class Fn>
  void for_each_cell(Fn&& fn) const {
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
      if (grid_[i + 1] > grid_[i]) fn(grid_[i], grid_[i + 1], values_[i], values_[i + 1]);
  }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// wa * a + wb * b on the union of breakpoints.
GridFunction linear_combination(const GridFunction& a, double wa, const GridFunction& b, double wb);

namespace detail {
/// log(1 + w) accurate for small |w|.
cplx log1p(cplx w);
/// log(1 + w) - w accurate for small |w|.
cplx log1p_minus(cplx w);
}  // namespace detail

}  // namespace krein
