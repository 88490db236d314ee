#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krein/grid_function.hpp"
#include "krein/region_set.hpp"

namespace krein {

/// Atoms closer than this are merged by build_measure.
inline constexpr double kAtomMergeTolerance = 1e-9;

struct Atom {
  double position;
  double mass;
  bool operator==(const Atom&) const = default;
};

/// Records that the atoms approximate a singular-continuous measure.
struct ScTag {
  std::string generator;
  int depth = 0;
  bool operator==(const ScTag&) const = default;
};

/// Finite positive measure on the real line: atoms plus piecewise-linear
/// absolutely continuous pieces with pairwise disjoint interiors.
class Measure {
 public:
  Measure() = default;

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<GridFunction>& ac_pieces() const { return ac_; }
  const std::optional<ScTag>& sc_tag() const { return sc_tag_; }

  bool is_atomic() const { return ac_.empty(); }
  bool is_zero() const { return atoms_.empty() && ac_.empty(); }
  double atomic_mass() const;
  double ac_mass() const;
  double total_mass() const { return atomic_mass() + ac_mass(); }
  /// Integral of dmu(t) / (t^2 + 1).
  double k1_weight() const;
  /// Density of the a.c. part (right-continuous).
  double density(double x) const;
  /// Smallest closed interval containing the support; requires !is_zero().
  Interval support_hull() const;

  /// Unchecked transform (1/pi) * integral kernel(t, z) dmu(t).
  cplx transform(cplx z, Kernel kernel) const;
  /// Exact boundary value of the transform at real x for this piecewise-linear
  /// representation; the real part is infinite at atoms and density jumps.
  cplx boundary_exact(double x, Kernel kernel) const;

  Measure scaled(double factor) const;
  /// Image under t -> -t.
  Measure reflected() const;
  /// Image under t -> s t for s != 0 (same total mass).
  Measure dilated(double s) const;

  /// Assemble from parts that already satisfy every invariant.
  static Measure from_normalized(std::vector<Atom> atoms, std::vector<GridFunction> ac,
                                 std::optional<ScTag> tag = std::nullopt);

  bool operator==(const Measure&) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<GridFunction> ac_;
  std::optional<ScTag> sc_tag_;
};

/// Validate and normalize: atoms sorted with positions within
/// kAtomMergeTolerance merged (masses summed, first position kept);
/// overlapping a.c. pieces summed into one piece.
Measure build_measure(std::vector<Atom> atoms, std::vector<GridFunction> ac_pieces,
                      std::optional<ScTag> tag = std::nullopt);

Measure uniform_measure(double a, double b, double density = 1.0);
Measure sum(const Measure& a, const Measure& b);

/// 2^depth atoms of mass 2^-depth at the midpoints of the level-depth
/// middle-thirds Cantor intervals of [0, 1].
Measure cantor_measure(int depth);

/// Lebesgue measure on the union of intervals of width 2^-n centered at the
/// first n_max + 1 rationals of [0, 3] (enumerated by denominator, then
/// numerator).
Measure rational_intervals_measure(int n_max);

Measure restrict(const Measure& mu, const RegionSet& region);

struct EsuppOptions {
  double resolution = 1e-3;
  double theta = 1e-6;
  double upper = 1e6;
};

/// Cell-wise estimate of the essential support of the a.c. part.
RegionSet essential_support_ac(const Measure& mu, const RegionSet& window, const EsuppOptions& options = {});

enum class Relation { mutually_singular, equivalent, one_sided, neither };

struct Comparison {
  Relation relation = Relation::neither;
  /// Bounds on d(second)/d(first) when equivalent.
  double c = 0.0;
  double C = 0.0;
  bool first_ac_wrt_second = false;
  bool second_ac_wrt_first = false;
  double overlap_mass = 0.0;
  std::size_t matched_atoms = 0;
};

std::string to_string(Relation relation);

Comparison compare_measures(const Measure& first, const Measure& second, const RegionSet& region, double tol);

}  // namespace krein
