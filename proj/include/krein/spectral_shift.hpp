#pragma once

#include <array>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "krein/cauchy.hpp"
#include "krein/grid_function.hpp"
#include "krein/measure.hpp"
#include "krein/rank_one.hpp"
#include "krein/region_set.hpp"

namespace krein {

inline constexpr double kDefaultJumpTol = 0.05 * std::numbers::pi;

/// Spectral shift function u with values in [0, pi] and the constant c in
/// 1 + pi alpha K mu = exp(K1 u + c). u is zero outside the grid, so a
/// nonzero value at either end is a jump.
class ShiftFunction {
 public:
  ShiftFunction() = default;
  /// Values within 1e-9 outside [0, pi] are clamped; anything further is a
  /// construction error.
  ShiftFunction(GridFunction u, double c);
  ShiftFunction(std::vector<double> grid, std::vector<double> values, double c);

  const GridFunction& u() const { return u_; }
  double c() const { return c_; }
  bool is_zero() const;

  bool operator==(const ShiftFunction&) const = default;

 private:
  GridFunction u_;
  double c_ = 0.0;
};

struct ShiftOptions {
  std::vector<double> schedule = default_schedule();
  double tol = 1e-12;
  /// Resolve 0 -> pi and pi -> 0 transitions to exact discontinuities.
  bool refine_jumps = true;
};

struct ShiftResult {
  ShiftFunction shift;
  /// max |u - u'| over grid points where both arguments are regular.
  double consistency_residual = 0.0;
  std::size_t points = 0;
  std::size_t nonconverged = 0;
  /// |arg(1 + pi alpha K mu(i)) - Im K1 u(i)| at the fitting point.
  double fit_residual = 0.0;
  std::string normalization;
};

/// u(x) = arg(1 + pi alpha K mu(x + i0)) on the grid, u' from the perturbed
/// measure, c fitted at z = i.
ShiftResult shift_from_measure(const RankOneFamily& family, std::span<const double> grid,
                               const ShiftOptions& options = {});

struct Normalization {
  enum class Kind { fitted, reference_mass };
  Kind kind = Kind::fitted;
  double point = 0.0;
  double mass = 1.0;

  /// c such that K mu(iy) -> 0 as y -> infinity, i.e. mu is a finite measure.
  static Normalization fitted() { return {}; }
  /// c such that mu has an atom of the given mass at point.
  static Normalization reference(double point, double mass) { return {Kind::reference_mass, point, mass}; }
};

struct ReconstructionOptions {
  std::vector<double> schedule = default_schedule();
  double tol = 1e-12;
  /// Local spacing relative to the distance from a singular point.
  double grading = 0.01;
  /// Uniform subdivisions of each cell of u.
  int subdivisions = 4;
  /// Closest sample to a singular point, relative to max(1, |p|).
  double min_spacing = 1e-14;
};

struct ShiftPair {
  Measure mu;
  Measure nu;
  double c = 0.0;
  std::string normalization;
};

/// Inverse direction with alpha = 1: 1 + pi K mu = exp(K1 u + c) and
/// 1 - pi K nu = exp(-K1 u - c).
ShiftPair measures_from_shift(const ShiftFunction& u, const Normalization& normalization = Normalization::fitted(),
                              const ReconstructionOptions& options = {});

/// mu_alpha for a base with an a.c. part: the alpha = 1 problem for the
/// base dilated by 1/alpha, solved through its shift function on grid / alpha,
/// then dilated back. The grid must cover the supports of mu and mu_alpha.
Measure perturb_via_shift(const RankOneFamily& family, std::span<const double> grid,
                          const ShiftOptions& shift_options = {}, const ReconstructionOptions& options = {});

/// u unchanged off O; |u - min(dist(x, R \ O), pi/2)| on O. u must take only
/// the values 0 and pi on O.
ShiftFunction dm_surgery(const ShiftFunction& u, const RegionSet& region);

struct SurgeryBound {
  double max_deviation = 0.0;
  double bound = 0.0;
  bool holds = false;
  std::vector<double> points;
};

/// sup of |K1(u - u_tilde)| over n points of R \ O against |O|.
SurgeryBound surgery_bound(const ShiftFunction& u, const ShiftFunction& u_tilde, const RegionSet& region,
                           std::size_t n_points = 200);

struct ShiftClassification {
  std::vector<double> up_jumps;
  std::vector<double> down_jumps;
  RegionSet ac_region;
};

ShiftClassification classify_shift(const ShiftFunction& u, double jump_tol = kDefaultJumpTol);

namespace kernels {

struct ShiftPoint {
  enum class Kind { regular, atom_mu, atom_mu_alpha };
  Kind kind = Kind::regular;
  double u = 0.0;
  /// -arg(1 - pi alpha K mu_alpha); NaN when not regular.
  double u_alt = 0.0;
  bool converged = true;
};

struct ShiftContext {
  const RankOneFamily* family = nullptr;
  /// Oracle measure for u', or null to use the Aronszajn-Krein transform.
  const Measure* perturbed = nullptr;
  std::span<const double> schedule;
  double tol = 1e-12;
};

ShiftPoint shift_at(const ShiftContext& ctx, double x, bool with_alt);

/// Grid-point evaluations. Both variants produce identical bits.
std::vector<ShiftPoint> shift_points_serial(const ShiftContext& ctx, std::span<const double> xs);
std::vector<ShiftPoint> shift_points_parallel(const ShiftContext& ctx, std::span<const double> xs);

/// (density of mu, density of nu) reconstructed from u and c at points off
/// the discontinuities of u.
std::vector<std::array<double, 2>> shift_densities_serial(const GridFunction& u, double c, std::span<const double> xs);
std::vector<std::array<double, 2>> shift_densities_parallel(const GridFunction& u, double c,
                                                            std::span<const double> xs);

}  // namespace kernels

}  // namespace krein
