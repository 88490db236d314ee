#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "krein/measure.hpp"

namespace krein {

enum class EvalMode { interior, boundary_extrapolated };

struct CauchyEvaluation {
  cplx point;
  cplx value;
  EvalMode mode = EvalMode::interior;
  bool converged = true;
  /// Last extrapolation step size (zero for interior evaluations).
  double residual = 0.0;
  /// Heights actually evaluated, for boundary mode.
  std::vector<double> schedule_used;
};

/// eps_j = 2^-j, j = 4..40.
std::vector<double> default_schedule();

/// Interior transform (1/pi) * integral kernel(t, z) dtau(t); Im z must be > 0.
CauchyEvaluation cauchy_transform(const Measure& tau, cplx z, Kernel kernel = Kernel::K);

/// Result of approaching the real axis vertically along a schedule.
struct BoundaryLimit {
  cplx value;
  bool converged = false;
  double residual = 0.0;
  std::vector<double> schedule_used;
  /// Value at the smallest evaluated height.
  cplx last_sample;
  /// pi * eps * Im f(x + i eps) when it stabilizes above tol: the atom mass.
  std::optional<double> atom_mass;
};

/// Two-level Richardson-extrapolated limit of f(x + i eps) as eps decreases along the
/// schedule. Converged when two consecutive extrapolants differ by less than
/// tol * max(1, |value|).
BoundaryLimit boundary_limit(const std::function<cplx(cplx)>& f, double x, std::span<const double> schedule,
                             double tol);

struct BoundaryValue {
  CauchyEvaluation evaluation;
  std::optional<double> atom_mass;
};

BoundaryValue boundary_value(const Measure& tau, double x, std::span<const double> schedule, double tol,
                             Kernel kernel = Kernel::K);

struct RatioEstimate {
  double value = 0.0;
  bool converged = false;
  double residual = 0.0;
};

/// Limit of K(tilde_tau)/K(tau) at x + i eps. x must be an atom of tau unless
/// flagged as a tau-singular point by the caller.
RatioEstimate poltoratski_ratio(const Measure& tilde_tau, const Measure& tau, double x,
                                std::span<const double> schedule, double tol, bool singular_point = false);

namespace kernels {
/// Transform at many interior points. Both variants produce identical bits.
std::vector<cplx> cauchy_many_serial(const Measure& tau, std::span<const cplx> points, Kernel kernel);
std::vector<cplx> cauchy_many_parallel(const Measure& tau, std::span<const cplx> points, Kernel kernel);
}  // namespace kernels

}  // namespace krein
