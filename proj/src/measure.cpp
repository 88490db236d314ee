#include "krein/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "krein/error.hpp"

namespace krein {

namespace {

// Pointwise sum of pieces whose supports overlap, as one piece with jumps
// encoded by repeated breakpoints.
GridFunction sum_pieces(const std::vector<GridFunction>& group) {
  if (group.size() == 1) return group.front();
  std::vector<double> positions;
  for (const auto& p : group) positions.insert(positions.end(), p.grid().begin(), p.grid().end());
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  std::vector<double> g, v;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const double x = positions[k];
    double left = 0.0, right = 0.0;
    for (const auto& p : group) {
      left += p.left_limit(x);
      right += p.right_limit(x);
    }
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

std::vector<GridFunction> normalize_pieces(std::vector<GridFunction> pieces) {
  std::erase_if(pieces, [](const GridFunction& p) { return p.empty(); });
  std::sort(pieces.begin(), pieces.end(),
            [](const GridFunction& a, const GridFunction& b) { return a.front() < b.front(); });
  std::vector<GridFunction> out;
  std::vector<GridFunction> group;
  double group_end = -std::numeric_limits<double>::infinity();
  for (auto& p : pieces) {
    if (!group.empty() && p.front() >= group_end) {
      out.push_back(sum_pieces(group));
      group.clear();
    }
    group_end = group.empty() ? p.back() : std::max(group_end, p.back());
    group.push_back(std::move(p));
  }
  if (!group.empty()) out.push_back(sum_pieces(group));
  return out;
}

}  // namespace

double Measure::atomic_mass() const {
  double sum = 0.0;
  for (const auto& a : atoms_) sum += a.mass;
  return sum;
}

double Measure::ac_mass() const {
  double sum = 0.0;
  for (const auto& p : ac_) sum += p.integral();
  return sum;
}

double Measure::k1_weight() const {
  double sum = 0.0;
  for (const auto& a : atoms_) sum += a.mass / (a.position * a.position + 1.0);
  for (const auto& p : ac_) {
    // (1/pi) Im K(i) of a density equals the integral of f(t) / (t^2 + 1)
    sum += std::numbers::pi * p.cauchy(cplx(0.0, 1.0), Kernel::K).imag();
  }
  return sum;
}

double Measure::density(double x) const {
  double sum = 0.0;
  for (const auto& p : ac_) sum += p(x);
  return sum;
}

Interval Measure::support_hull() const {
  if (is_zero()) fail(ErrorKind::argument, "zero measure has no support");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  if (!atoms_.empty()) {
    lo = atoms_.front().position;
    hi = atoms_.back().position;
  }
  for (const auto& p : ac_) {
    lo = std::min(lo, p.front());
    hi = std::max(hi, p.back());
  }
  return {lo, hi};
}

cplx Measure::transform(cplx z, Kernel kernel) const {
  cplx sum = 0.0;
  double offset = 0.0;
  for (const auto& a : atoms_) {
    const cplx d = a.position - z;
    sum += a.mass * std::conj(d) / std::norm(d);
    if (kernel == Kernel::K1) offset += a.mass * a.position / (a.position * a.position + 1.0);
  }
  sum = (sum - offset) / std::numbers::pi;
  for (const auto& p : ac_) sum += p.cauchy(z, kernel);
  return sum;
}

cplx Measure::boundary_exact(double x, Kernel kernel) const {
  double re = 0.0;
  for (const auto& a : atoms_) {
    if (a.position == x) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    re += a.mass / (a.position - x);
    if (kernel == Kernel::K1) re -= a.mass * a.position / (a.position * a.position + 1.0);
  }
  cplx sum(re / std::numbers::pi, 0.0);
  for (const auto& p : ac_) sum += p.boundary(x, kernel);
  return sum;
}

Measure Measure::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) fail(ErrorKind::argument, "scale factor must be positive");
  Measure out = *this;
  for (auto& a : out.atoms_) a.mass *= factor;
  for (auto& p : out.ac_) {
    std::vector<double> v(p.values().begin(), p.values().end());
    for (auto& x : v) x *= factor;
    p = GridFunction(std::vector<double>(p.grid().begin(), p.grid().end()), std::move(v));
  }
  return out;
}

Measure Measure::reflected() const {
  std::vector<Atom> atoms;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) atoms.push_back({-it->position, it->mass});
  std::vector<GridFunction> ac;
  for (auto it = ac_.rbegin(); it != ac_.rend(); ++it) {
    std::vector<double> g, v;
    for (std::size_t i = it->size(); i-- > 0;) {
      g.push_back(-it->grid()[i]);
      v.push_back(it->values()[i]);
    }
    ac.emplace_back(std::move(g), std::move(v));
  }
  return from_normalized(std::move(atoms), std::move(ac), sc_tag_);
}

Measure Measure::dilated(double s) const {
  if (!(std::isfinite(s) && s != 0.0)) fail(ErrorKind::argument, "dilation factor must be finite and nonzero");
  if (s < 0.0) return reflected().dilated(-s);
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({s * a.position, a.mass});
  std::vector<GridFunction> ac;
  for (const auto& piece : ac_) {
    std::vector<double> g, v;
    for (std::size_t i = 0; i < piece.size(); ++i) {
      g.push_back(s * piece.grid()[i]);
      v.push_back(piece.values()[i] / s);
    }
    ac.emplace_back(std::move(g), std::move(v));
  }
  return from_normalized(std::move(atoms), std::move(ac), sc_tag_);
}

Measure Measure::from_normalized(std::vector<Atom> atoms, std::vector<GridFunction> ac, std::optional<ScTag> tag) {
  Measure m;
  m.atoms_ = std::move(atoms);
  m.ac_ = std::move(ac);
  m.sc_tag_ = std::move(tag);
  return m;
}

bool Measure::operator==(const Measure& other) const {
  return atoms_ == other.atoms_ && ac_ == other.ac_ && sc_tag_ == other.sc_tag_;
}

Measure build_measure(std::vector<Atom> atoms, std::vector<GridFunction> ac_pieces, std::optional<ScTag> tag) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.position) || !std::isfinite(a.mass))
      fail(ErrorKind::integrability, "atom with non-finite position or mass");
    if (!(a.mass > 0.0)) fail(ErrorKind::construction, "atom masses must be strictly positive");
  }
  for (const auto& p : ac_pieces)
    for (double v : p.values())
      if (v < 0.0) fail(ErrorKind::construction, "densities must be nonnegative");

  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
  std::vector<Atom> merged;
  double anchor = 0.0;
  for (const auto& a : atoms) {
    if (!merged.empty() && a.position - anchor <= kAtomMergeTolerance) {
      merged.back().mass += a.mass;
    } else {
      merged.push_back(a);
      anchor = a.position;
    }
  }
  Measure m = Measure::from_normalized(std::move(merged), normalize_pieces(std::move(ac_pieces)), std::move(tag));
  if (!std::isfinite(m.k1_weight())) fail(ErrorKind::integrability, "integral of dmu/(t^2+1) is not finite");
  return m;
}

Measure uniform_measure(double a, double b, double density) {
  return build_measure({}, {GridFunction({a, b}, {density, density})});
}

Measure sum(const Measure& a, const Measure& b) {
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  std::vector<GridFunction> ac = a.ac_pieces();
  ac.insert(ac.end(), b.ac_pieces().begin(), b.ac_pieces().end());
  return build_measure(std::move(atoms), std::move(ac));
}

Measure cantor_measure(int depth) {
  if (depth < 0) fail(ErrorKind::argument, "depth must be nonnegative");
  if (depth > 24) fail(ErrorKind::resource, "cantor depth above 24 exceeds the atom budget");
  // Left endpoints of level-depth intervals are sum_i d_i * 2 * 3^(depth-i) / 3^depth.
  const std::size_t count = std::size_t{1} << depth;
  long long pow3 = 1;
  for (int i = 0; i < depth; ++i) pow3 *= 3;
  const double mass = std::ldexp(1.0, -depth);
  std::vector<Atom> atoms(count);
  for (std::size_t k = 0; k < count; ++k) {
    long long left = 0, digit = pow3;
    for (int i = depth - 1; i >= 0; --i) {
      digit /= 3;
      if ((k >> i) & 1u) left += 2 * digit;
    }
    atoms[k] = {static_cast<double>(2 * left + 1) / static_cast<double>(2 * pow3), mass};
  }
  // Sibling midpoints at depth >= 19 are closer than the merge tolerance, so
  // the atoms are assembled directly rather than through build_measure.
  return Measure::from_normalized(std::move(atoms), {}, ScTag{"cantor-middle-thirds", depth});
}

Measure rational_intervals_measure(int n_max) {
  if (n_max < 0) fail(ErrorKind::argument, "truncation index must be nonnegative");
  std::vector<double> centers;
  for (long long den = 1; static_cast<int>(centers.size()) <= n_max; ++den)
    for (long long num = 0; num <= 3 * den && static_cast<int>(centers.size()) <= n_max; ++num)
      if (std::gcd(num, den) == 1 || den == 1) centers.push_back(static_cast<double>(num) / static_cast<double>(den));
  std::vector<Interval> intervals;
  for (int n = 0; n <= n_max; ++n) {
    const double half = std::ldexp(1.0, -n - 1);
    intervals.push_back({centers[n] - half, centers[n] + half});
  }
  const RegionSet merged(std::move(intervals));
  std::vector<GridFunction> pieces;
  for (const auto& iv : merged.intervals()) pieces.emplace_back(std::vector{iv.lo, iv.hi}, std::vector{1.0, 1.0});
  return build_measure({}, std::move(pieces));
}

Measure restrict(const Measure& mu, const RegionSet& region) {
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms())
    if (region.contains(a.position)) atoms.push_back(a);
  std::vector<GridFunction> ac;
  for (const auto& iv : region.intervals())
    for (const auto& p : mu.ac_pieces()) {
      GridFunction c = p.clipped(iv.lo, iv.hi);
      if (!c.empty()) ac.push_back(std::move(c));
    }
  std::sort(ac.begin(), ac.end(), [](const GridFunction& a, const GridFunction& b) { return a.front() < b.front(); });
  return Measure::from_normalized(std::move(atoms), std::move(ac), mu.sc_tag());
}

RegionSet essential_support_ac(const Measure& mu, const RegionSet& window, const EsuppOptions& options) {
  if (window.empty()) fail(ErrorKind::argument, "empty window");
  if (!(options.resolution > 0.0)) fail(ErrorKind::argument, "resolution must be positive");
  if (!(options.theta < options.upper)) fail(ErrorKind::argument, "theta must be below the upper threshold");

  // Halving schedule 1, 1/2, ... down to the last width not below resolution/2.
  std::vector<double> widths{1.0};
  while (widths.back() * 0.5 >= 0.5 * options.resolution) widths.push_back(widths.back() * 0.5);
  if (widths.back() > 0.5 * options.resolution) widths.push_back(0.5 * options.resolution);

  auto ac_mass = [&](double a, double b) {
    double m = 0.0;
    for (const auto& p : mu.ac_pieces())
      if (p.back() > a && p.front() < b) m += p.integral(a, b);
    return m;
  };
  auto atom_at = [&](double x) {
    auto it = std::lower_bound(mu.atoms().begin(), mu.atoms().end(), x - kAtomMergeTolerance,
                               [](const Atom& a, double v) { return a.position < v; });
    return it != mu.atoms().end() && it->position <= x + kAtomMergeTolerance;
  };

  std::vector<Interval> cells;
  for (const auto& iv : window.intervals()) {
    const auto n = static_cast<long long>(std::ceil(iv.length() / options.resolution));
    for (long long k = 0; k < n; ++k) {
      const double lo = iv.lo + static_cast<double>(k) * options.resolution;
      const double hi = std::min(iv.hi, lo + options.resolution);
      const double x = 0.5 * (lo + hi);
      // Atoms contribute only at their own position, where the averages diverge.
      if (atom_at(x)) continue;
      double limsup = 0.0;
      const std::size_t tail = widths.size() >= 2 ? widths.size() - 2 : 0;
      for (std::size_t j = tail; j < widths.size(); ++j) {
        const double eps = widths[j];
        limsup = std::max(limsup, ac_mass(x - eps, x + eps) / (2.0 * eps));
      }
      if (limsup > options.theta && limsup < options.upper) {
        if (!cells.empty() && cells.back().hi == lo)
          cells.back().hi = hi;
        else
          cells.push_back({lo, hi});
      }
    }
  }
  return RegionSet(std::move(cells));
}

std::string to_string(Relation relation) {
  switch (relation) {
    case Relation::mutually_singular: return "mutually-singular";
    case Relation::equivalent: return "equivalent";
    case Relation::one_sided: return "one-sided";
    case Relation::neither: return "neither";
  }
  return "neither";
}

Comparison compare_measures(const Measure& first, const Measure& second, const RegionSet& region, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::argument, "tolerance must be positive");
  const Measure a = restrict(first, region);
  const Measure b = restrict(second, region);
  if ((a.sc_tag() && !b.is_atomic()) || (b.sc_tag() && !a.is_atomic()))
    fail(ErrorKind::representation, "atomic approximant of a singular-continuous measure cannot be compared with a density");

  Comparison out;
  double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0.0;
  auto note_ratio = [&](double r) {
    ratio_lo = std::min(ratio_lo, r);
    ratio_hi = std::max(ratio_hi, r);
  };

  // atoms: merge-walk the two sorted lists
  std::size_t unmatched_a = 0, unmatched_b = 0;
  {
    std::size_t i = 0, j = 0;
    const auto& aa = a.atoms();
    const auto& bb = b.atoms();
    while (i < aa.size() || j < bb.size()) {
      if (i < aa.size() && j < bb.size() && std::abs(aa[i].position - bb[j].position) <= tol) {
        ++out.matched_atoms;
        out.overlap_mass += std::min(aa[i].mass, bb[j].mass);
        note_ratio(bb[j].mass / aa[i].mass);
        ++i;
        ++j;
      } else if (j >= bb.size() || (i < aa.size() && aa[i].position < bb[j].position)) {
        ++unmatched_a;
        ++i;
      } else {
        ++unmatched_b;
        ++j;
      }
    }
  }

  // a.c. parts on the union of breakpoints, where both densities are linear
  std::vector<double> positions;
  for (const auto* m : {&a, &b})
    for (const auto& p : m->ac_pieces()) positions.insert(positions.end(), p.grid().begin(), p.grid().end());
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  double scale = 0.0;
  for (const auto* m : {&a, &b})
    for (const auto& p : m->ac_pieces())
      for (double v : p.values()) scale = std::max(scale, v);
  const double zero = 1e-12 * std::max(scale, 1.0);
  double only_a = 0.0, only_b = 0.0;
  auto density_right = [](const Measure& m, double x) {
    double s = 0.0;
    for (const auto& p : m.ac_pieces()) s += p.right_limit(x);
    return s;
  };
  auto density_left = [](const Measure& m, double x) {
    double s = 0.0;
    for (const auto& p : m.ac_pieces()) s += p.left_limit(x);
    return s;
  };
  for (std::size_t k = 0; k + 1 < positions.size(); ++k) {
    const double p = positions[k], q = positions[k + 1];
    const double fa0 = density_right(a, p), fa1 = density_left(a, q);
    const double fb0 = density_right(b, p), fb1 = density_left(b, q);
    const double len = q - p;
    const bool a_zero = std::max(fa0, fa1) <= zero;
    const bool b_zero = std::max(fb0, fb1) <= zero;
    if (a_zero && b_zero) continue;
    if (b_zero) {
      only_a += 0.5 * (fa0 + fa1) * len;
      continue;
    }
    if (a_zero) {
      only_b += 0.5 * (fb0 + fb1) * len;
      continue;
    }
    // integral of min of two linear functions
    const double d0 = fa0 - fb0, d1 = fa1 - fb1;
    if (d0 * d1 >= 0.0) {
      out.overlap_mass += 0.5 * (std::min(fa0, fb0) + std::min(fa1, fb1)) * len;
    } else {
      const double s = d0 / (d0 - d1);
      const double xm = s * len;
      const double fm = fa0 + (fa1 - fa0) * s;
      out.overlap_mass += 0.5 * (std::min(fa0, fb0) + fm) * xm + 0.5 * (fm + std::min(fa1, fb1)) * (len - xm);
    }
    const double mids[3][2] = {{fa0, fb0}, {0.5 * (fa0 + fa1), 0.5 * (fb0 + fb1)}, {fa1, fb1}};
    for (const auto& m : mids)
      if (m[0] > zero && m[1] > zero) note_ratio(m[1] / m[0]);
  }

  const bool b_ll_a = unmatched_b == 0 && only_b < tol;  // second << first
  const bool a_ll_b = unmatched_a == 0 && only_a < tol;
  out.second_ac_wrt_first = b_ll_a;
  out.first_ac_wrt_second = a_ll_b;
  if (out.overlap_mass < tol && out.matched_atoms == 0) {
    out.relation = Relation::mutually_singular;
  } else if (a_ll_b && b_ll_a) {
    out.relation = Relation::equivalent;
    out.c = ratio_hi > 0.0 ? ratio_lo : 1.0;
    out.C = ratio_hi > 0.0 ? ratio_hi : 1.0;
  } else if (a_ll_b || b_ll_a) {
    out.relation = Relation::one_sided;
  } else {
    out.relation = Relation::neither;
  }
  return out;
}

}  // namespace krein
