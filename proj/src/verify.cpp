#include "krein/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "krein/anderson.hpp"
#include "krein/cauchy.hpp"
#include "krein/error.hpp"
#include "krein/rank_one.hpp"
#include "krein/rng.hpp"
#include "krein/spectral_shift.hpp"

namespace krein::verify {

namespace {

using std::numbers::pi;

class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  double uniform(double a, double b) { return a + (b - a) * rng::uniform01(seed_, stream_, counter_++); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform(0.0, 1.0) * (hi - lo + 1)); }
  std::uint64_t bits() { return rng::counter_mix(seed_, stream_, counter_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

struct Suite {
  std::string name;
  std::vector<Check> checks;

  void add(std::string check, bool passed, double value, double threshold, std::string detail = {}) {
    checks.push_back({name, std::move(check), passed, value, threshold, std::move(detail)});
  }
  /// value <= threshold
  void below(std::string check, double value, double threshold, std::string detail = {}) {
    add(std::move(check), value <= threshold, value, threshold, std::move(detail));
  }
};

// atoms at distinct positions in [lo, hi], masses normalized to 1
Measure random_atomic(Draw& d, int n, double lo, double hi) {
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    atoms.push_back({d.uniform(lo, hi), d.uniform(0.05, 1.0)});
    total += atoms.back().mass;
  }
  for (auto& a : atoms) a.mass /= total;
  return build_measure(std::move(atoms), {});
}

GridFunction random_density(Draw& d, double a, double b, int points, double lo, double hi) {
  std::vector<double> g, v;
  for (int i = 0; i < points; ++i) {
    g.push_back(a + (b - a) * i / (points - 1));
    v.push_back(d.uniform(lo, hi));
  }
  return GridFunction(std::move(g), std::move(v));
}

Measure random_mixed(Draw& d) {
  std::vector<Atom> atoms;
  const int n = d.integer(0, 5);
  for (int i = 0; i < n; ++i) atoms.push_back({d.uniform(-4.0, 4.0), d.uniform(0.01, 1.0)});
  const double a = d.uniform(-3.0, 2.0);
  std::vector<GridFunction> ac{random_density(d, a, a + d.uniform(0.2, 2.0), d.integer(2, 8), 0.0, 2.0)};
  return build_measure(std::move(atoms), std::move(ac));
}

std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) g[i] = a + (b - a) * i / n;
  return g;
}

bool alternates(const ShiftClassification& c) {
  std::vector<std::pair<double, int>> all;
  for (double x : c.up_jumps) all.push_back({x, +1});
  for (double x : c.down_jumps) all.push_back({x, -1});
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i].second != (i % 2 == 0 ? 1 : -1)) return false;
  return true;
}

double atom_position_error(const Measure& mu, std::span<const double> expected) {
  if (mu.atoms().size() != expected.size()) return std::numeric_limits<double>::infinity();
  double e = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) e = std::max(e, std::abs(mu.atoms()[i].position - expected[i]));
  return e;
}

std::vector<Check> measures_suite(std::uint64_t seed) {
  Suite s{"measures", {}};
  {
    const Measure c = cantor_measure(2);
    const double expected[] = {1.0 / 18, 5.0 / 18, 13.0 / 18, 17.0 / 18};
    double e = atom_position_error(c, expected);
    for (const auto& a : c.atoms()) e = std::max(e, std::abs(a.mass - 0.25));
    s.below("cantor depth 2 atoms", e, 1e-15);
  }
  {
    double worst = 0.0;
    bool counts = true;
    for (int k = 0; k <= 16; ++k) {
      const Measure c = cantor_measure(k);
      worst = std::max(worst, std::abs(c.total_mass() - 1.0));
      counts = counts && c.atoms().size() == (std::size_t{1} << k) && c.sc_tag().has_value();
    }
    s.add("cantor mass and atom count, depth 0..16", counts && worst == 0.0, worst, 0.0);
  }
  {
    const Measure m = build_measure({{0.0, 0.5}, {0.5 * kAtomMergeTolerance, 0.5}}, {});
    const bool ok = m.atoms().size() == 1 && m.atoms()[0].position == 0.0 && m.atoms()[0].mass == 1.0;
    s.add("atom merge rule", ok, static_cast<double>(m.atoms().size()), 1.0);
  }
  {
    Draw d(seed, 101);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Measure mu = random_mixed(d);
      std::vector<Interval> ivs;
      const int k = d.integer(1, 3);
      for (int i = 0; i < k; ++i) {
        const double a = d.uniform(-5.0, 4.0);
        ivs.push_back({a, a + d.uniform(0.1, 2.0)});
      }
      const RegionSet S(ivs);
      const double total = restrict(mu, S).total_mass() + restrict(mu, S.complement(-100.0, 100.0)).total_mass();
      worst = std::max(worst, std::abs(total - mu.total_mass()));
    }
    s.below("restriction mass additivity (50 random measures)", worst, 1e-12);
  }
  {
    Draw d(seed, 102);
    std::size_t nonempty = 0;
    for (int t = 0; t < 10; ++t) {
      const Measure mu = random_atomic(d, d.integer(1, 20), -2.0, 2.0);
      for (double res : {0.1, 0.01, 1e-3})
        if (!essential_support_ac(mu, RegionSet{{-3.0, 3.0}}, {res}).empty()) ++nonempty;
    }
    s.below("esupp of atomic measures is empty", static_cast<double>(nonempty), 0.0);
  }
  {
    const double res = 1e-3;
    const RegionSet e = essential_support_ac(uniform_measure(0.0, 1.0), RegionSet{{-1.0, 2.0}}, {res});
    s.below("esupp of uniform[0,1] within one cell of (0,1)", e.empty() ? 1.0 : hausdorff(e, RegionSet{{0.0, 1.0}}),
            res * (1.0 + 1e-9));
  }
  {
    const Measure mu = rational_intervals_measure(20);
    const Interval hull = mu.support_hull();
    const RegionSet e = essential_support_ac(mu, RegionSet{{hull.lo - 0.5, hull.hi + 0.5}});
    const double gap = hull.length() - e.length();
    s.add("rational-intervals esupp shorter than support hull (N = 20)", gap >= 0.5, gap, 0.5,
          "hull " + io::format_double(hull.length()) + ", esupp " + io::format_double(e.length()));
  }
  {
    Draw d(seed, 103);
    const RegionSet window{{-10.0, 10.0}};
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
      Measure a, b;
      switch (t % 3) {
        case 0: {
          a = random_atomic(d, d.integer(1, 8), -3.0, 3.0);
          std::vector<Atom> atoms;
          for (const auto& at : a.atoms()) atoms.push_back({at.position, at.mass * d.uniform(0.2, 5.0)});
          b = build_measure(std::move(atoms), {});
          break;
        }
        case 1:
          a = random_atomic(d, d.integer(1, 8), -3.0, -0.5);
          b = random_atomic(d, d.integer(1, 8), 0.5, 3.0);
          break;
        default:
          a = uniform_measure(0.0, 1.0, d.uniform(0.5, 2.0));
          b = uniform_measure(0.0, 1.0, d.uniform(0.5, 2.0));
      }
      const Comparison ab = compare_measures(a, b, window, 1e-9);
      const Comparison ba = compare_measures(b, a, window, 1e-9);
      ok = ok && ab.relation == ba.relation;
      if (ab.relation == Relation::equivalent) {
        worst = std::max(worst, std::abs(ab.c * ba.C - 1.0));
        worst = std::max(worst, std::abs(ab.C * ba.c - 1.0));
      }
    }
    s.add("compare_measures symmetry (30 random pairs)", ok && worst <= 1e-12, worst, 1e-12);
  }
  {
    const RegionSet window{{-10.0, 10.0}};
    const Measure d0 = build_measure({{0.0, 1.0}}, {});
    const Measure d1 = build_measure({{1.0, 1.0}}, {});
    const Measure u = uniform_measure(0.0, 1.0);
    const Comparison singular = compare_measures(d0, d1, window, 1e-9);
    const Comparison equiv = compare_measures(u, uniform_measure(0.0, 1.0, 2.0), window, 1e-9);
    const Comparison one = compare_measures(sum(d0, u), u, window, 1e-9);
    const bool ok = singular.relation == Relation::mutually_singular && equiv.relation == Relation::equivalent &&
                    std::abs(equiv.c - 2.0) < 1e-12 && std::abs(equiv.C - 2.0) < 1e-12 &&
                    one.relation == Relation::one_sided && one.second_ac_wrt_first && !one.first_ac_wrt_second;
    s.add("compare_measures reference classifications", ok, ok ? 1.0 : 0.0, 1.0);
  }
  return s.checks;
}

std::vector<Check> cauchy_suite(std::uint64_t seed) {
  Suite s{"cauchy", {}};
  const cplx i(0.0, 1.0);
  {
    const Measure d0 = build_measure({{0.0, 1.0}}, {});
    double e = std::abs(cauchy_transform(d0, i).value - i / pi);
    e = std::max(e, std::abs(cauchy_transform(uniform_measure(0.0, 1.0), i).value - std::log(1.0 + i) / pi));
    e = std::max(e, std::abs(cauchy_transform(d0, i, Kernel::K1).value - i / pi));
    s.below("closed-form transforms at z = i", e, 1e-15);
  }
  {
    Draw d(seed, 201);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (int t = 0; t < 100; ++t) {
      const Measure mu = t % 2 ? random_mixed(d) : random_atomic(d, d.integer(1, 30), -5.0, 5.0);
      for (int k = 0; k < 100; ++k) {
        const cplx z(d.uniform(-8.0, 8.0), std::exp(d.uniform(std::log(1e-3), std::log(10.0))));
        const double im = cauchy_transform(mu, z).value.imag();
        worst = std::min(worst, im);
        if (!(im > -1e-14)) ++violations;
      }
    }
    s.add("Herglotz positivity (100 measures x 100 points)", violations == 0, worst, -1e-14,
          std::to_string(violations) + " violations");
  }
  {
    Draw d(seed, 202);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Measure mu = random_mixed(d);
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int k = 0; k < 10; ++k) {
        const cplx z(d.uniform(-5.0, 5.0), d.uniform(0.01, 5.0));
        const cplx diff = cauchy_transform(mu, z, Kernel::K1).value - cauchy_transform(mu, z).value;
        lo = std::min(lo, diff.real());
        hi = std::max(hi, diff.real());
        worst = std::max(worst, std::abs(diff.imag()));
      }
      worst = std::max(worst, hi - lo);
    }
    s.below("K1 - K is a real constant", worst, 1e-10);
  }
  {
    Draw d(seed, 203);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Measure mu = random_mixed(d), nu = random_mixed(d);
      const double a = d.uniform(0.0, 3.0), b = d.uniform(0.0, 3.0);
      const Measure combo = sum(mu.scaled(a), nu.scaled(b));
      for (int k = 0; k < 10; ++k) {
        const cplx z(d.uniform(-5.0, 5.0), d.uniform(0.01, 5.0));
        const cplx lhs = cauchy_transform(combo, z).value;
        const cplx rhs = a * cauchy_transform(mu, z).value + b * cauchy_transform(nu, z).value;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
    }
    s.below("linearity", worst, 1e-12);
  }
  {
    Draw d(seed, 204);
    const double tol = 1e-9;
    const auto schedule = default_schedule();
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const GridFunction f = random_density(d, 0.0, 1.0, 6, 0.5, 2.0);
      const Measure mu = build_measure({}, {f});
      for (std::size_t k = 1; k + 1 < f.size(); ++k) {
        const double x = f.grid()[k];
        const BoundaryValue bv = boundary_value(mu, x, schedule, tol);
        worst = std::max(worst, std::abs(bv.evaluation.value.imag() - f(x)));
      }
    }
    s.below("boundary a.c. recovery at interior grid points", worst, 10 * tol);
  }
  {
    const auto schedule = default_schedule();
    const BoundaryValue atom = boundary_value(build_measure({{0.0, 1.0}}, {}), 0.0, schedule, 1e-12);
    const BoundaryValue off = boundary_value(build_measure({{0.0, 1.0}}, {}), 0.5, schedule, 1e-12);
    const BoundaryValue ac = boundary_value(uniform_measure(0.0, 1.0), 0.5, schedule, 1e-12);
    double e = atom.atom_mass ? std::abs(*atom.atom_mass - 1.0) : 1.0;
    e = std::max(e, std::abs(off.evaluation.value - cplx(-2.0 / pi, 0.0)));
    e = std::max(e, std::abs(ac.evaluation.value.imag() - 1.0));
    const bool ok = e <= 1e-10 && !off.atom_mass && !ac.atom_mass;
    s.add("boundary values and atom report", ok, e, 1e-10);
  }
  {
    const auto schedule = default_schedule();
    const Measure d0 = build_measure({{0.0, 1.0}}, {});
    const Measure two = build_measure({{0.0, 1.0}, {1.0, 1.0}}, {});
    const Measure two_w = build_measure({{0.0, 2.0}, {1.0, 3.0}}, {});
    double e = std::abs(poltoratski_ratio(d0.scaled(2.0), d0, 0.0, schedule, 1e-12).value - 2.0);
    e = std::max(e, std::abs(poltoratski_ratio(two_w, two, 0.0, schedule, 1e-12).value - 2.0));
    e = std::max(e, std::abs(poltoratski_ratio(two_w, two, 1.0, schedule, 1e-12).value - 3.0));
    e = std::max(e, std::abs(poltoratski_ratio(sum(d0, uniform_measure(2.0, 3.0)), d0, 0.0, schedule, 1e-12).value - 1.0));
    s.below("Poltoratski ratio limits", e, 1e-9);
  }
  return s.checks;
}

std::vector<Check> rank_one_suite(std::uint64_t seed) {
  Suite s{"rank_one", {}};
  {
    Draw d(seed, 301);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const RankOneFamily fam{random_atomic(d, d.integer(1, 50), -5.0, 5.0), d.uniform(-3.0, 3.0)};
      const Measure oracle = perturb_discrete(fam);
      for (int k = 0; k < 100; ++k) {
        const cplx z(d.uniform(-6.0, 6.0), std::exp(d.uniform(std::log(1e-2), std::log(10.0))));
        const cplx a = perturbed_transform(fam, z);
        const cplx b = cauchy_transform(oracle, z).value;
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
      }
    }
    s.below("Aronszajn-Krein vs matrix oracle (100 bases x 100 points)", worst, 1e-9);
  }
  {
    const RankOneFamily fam{build_measure({{-1.0, 0.5}, {1.0, 0.5}}, {}), 1.0};
    const double expected[] = {(1.0 - std::sqrt(5.0)) / 2.0, (1.0 + std::sqrt(5.0)) / 2.0};
    const std::vector<double> roots = secular_roots(fam);
    double e = atom_position_error(perturb_discrete(fam), expected);
    e = std::max(e, roots.size() == 2 ? std::max(std::abs(roots[0] - expected[0]), std::abs(roots[1] - expected[1]))
                                      : std::numeric_limits<double>::infinity());
    s.below("golden-ratio family", e, 1e-10);
  }
  {
    Draw d(seed, 302);
    bool ok = true;
    double mass = 0.0, trace = 0.0, roots = 0.0;
    for (int t = 0; t < 40; ++t) {
      const double alpha = t < 20 ? 0.7 : d.uniform(-3.0, 3.0);
      const RankOneFamily fam{random_atomic(d, 10, -2.0, 2.0), alpha};
      const Measure out = perturb_discrete(fam);
      const auto& base = fam.base.atoms();
      const auto& pert = out.atoms();
      if (pert.size() != base.size()) {
        ok = false;
        continue;
      }
      for (std::size_t k = 0; k < base.size(); ++k) {
        // alpha > 0 pushes each eigenvalue into the gap above its atom
        const double lo = alpha > 0 ? base[k].position : (k == 0 ? -1e300 : base[k - 1].position);
        const double hi = alpha > 0 ? (k + 1 < base.size() ? base[k + 1].position : 1e300) : base[k].position;
        ok = ok && pert[k].position > lo && pert[k].position < hi;
      }
      mass = std::max(mass, std::abs(out.total_mass() - 1.0));
      double m1 = 0.0, m0 = 0.0;
      for (const auto& a : pert) m1 += a.position * a.mass;
      for (const auto& a : base) m0 += a.position * a.mass;
      trace = std::max(trace, std::abs(m1 - m0 - alpha));
      const std::vector<double> r = secular_roots(fam);
      if (r.size() != pert.size()) {
        ok = false;
        continue;
      }
      for (std::size_t k = 0; k < r.size(); ++k) roots = std::max(roots, std::abs(r[k] - pert[k].position));
    }
    s.add("strict interlacing (40 random 10-atom bases)", ok, ok ? 1.0 : 0.0, 1.0);
    s.below("mass conservation", mass, 1e-10);
    s.below("first-moment shift equals alpha", trace, 1e-9);
    s.below("secular roots match oracle eigenvalues", roots, 1e-9);
  }
  {
    Draw d(seed, 303);
    double dist = std::numeric_limits<double>::infinity(), secular = 0.0;
    bool ok = true;
    for (int t = 0; t < 50; ++t) {
      const Measure base = random_atomic(d, d.integer(1, 20), -3.0, 3.0);
      double alpha = d.uniform(-3.0, 3.0), beta = d.uniform(-3.0, 3.0);
      const auto r = verify_aronszajn_donoghue(base, alpha, beta, 1e-8);
      ok = ok && r.applicable && r.atoms_disjoint && r.secular_condition;
      dist = std::min(dist, r.min_atom_distance);
      secular = std::max(secular, r.max_secular_deviation);
    }
    s.add("Aronszajn-Donoghue: disjoint atoms (50 bases)", ok && dist > 1e-8, dist, 1e-8);
    s.below("Aronszajn-Donoghue: secular condition at atoms", secular, 1e-8);
  }
  {
    const auto r = verify_aronszajn_donoghue(build_measure({{0.0, 1.0}}, {}), 1.0, 1.0, 1e-8);
    s.add("Aronszajn-Donoghue: alpha = beta not applicable", !r.applicable, r.applicable ? 1.0 : 0.0, 0.0, r.note);
  }
  return s.checks;
}

std::vector<Check> spectral_shift_suite(std::uint64_t seed) {
  Suite s{"spectral_shift", {}};
  const double half_ln2 = 0.5 * std::log(2.0);
  const auto step = [](double a, double b, double v) { return ShiftFunction({a, b}, {v, v}, 0.0); };
  {
    const std::vector<double> grid = uniform_grid(-1.0, 2.0, 300);
    const ShiftResult r = shift_from_measure({build_measure({{0.0, 1.0}}, {}), 1.0}, grid);
    const double cell = grid[1] - grid[0];
    double err = 0.0, range = 0.0;
    for (double x : grid) {
      const double u = r.shift.u()(x);
      range = std::max({range, -u, u - pi});
      if (std::abs(x) <= 2 * cell || std::abs(x - 1.0) <= 2 * cell) continue;
      err = std::max(err, std::abs(u - (x > 0.0 && x < 1.0 ? pi : 0.0)));
    }
    s.below("shift of (delta_0, 1): sup error off jump cells", err, 1e-6);
    s.below("shift of (delta_0, 1): consistency residual", r.consistency_residual, 1e-6);
    s.below("shift of (delta_0, 1): c", std::abs(r.shift.c() - half_ln2), 1e-6);
    s.below("shift values within [0, pi]", range, 0.0);
  }
  const ShiftFunction box = step(0.0, 1.0, pi);
  {
    const ShiftPair p = measures_from_shift(box, Normalization::reference(0.0, 1.0));
    const double d0[] = {0.0}, d1[] = {1.0};
    double e = std::max(atom_position_error(p.mu, d0), atom_position_error(p.nu, d1));
    if (e < 1.0) e = std::max({e, std::abs(p.mu.atoms()[0].mass - 1.0), std::abs(p.nu.atoms()[0].mass - 1.0)});
    e = std::max(e, std::abs(p.c - half_ln2));
    const bool pure = p.mu.is_atomic() && p.nu.is_atomic();
    s.add("inverse of pi 1_(0,1): delta_0, delta_1, c = ln2 / 2", pure && e <= 1e-6, e, 1e-6);
  }
  {
    const ShiftFunction half = step(0.0, 1.0, pi / 2);
    const ShiftPair p = measures_from_shift(half);
    const std::vector<double> grid = uniform_grid(-0.5, 1.5, 200);
    const ShiftResult r = shift_from_measure({p.mu, 1.0}, grid);
    const double cell = grid[1] - grid[0];
    double err = 0.0;
    for (double x : grid) {
      if (std::abs(x) <= 2 * cell + 1e-12 || std::abs(x - 1.0) <= 2 * cell + 1e-12) continue;
      err = std::max(err, std::abs(r.shift.u()(x) - half.u()(x)));
    }
    const bool ac = p.mu.atoms().empty() && p.nu.atoms().empty() && !p.mu.ac_pieces().empty();
    s.add("half plateau: purely a.c. pair", ac, static_cast<double>(p.mu.atoms().size() + p.nu.atoms().size()), 0.0);
    s.below("half plateau: round trip sup error", err, 1e-4);
  }
  {
    Draw d(seed, 401);
    bool alternating = true;
    bool equivalent = true;
    double ratio = 0.0;
    for (int t = 0; t < 4; ++t) {
      const RankOneFamily fam{random_atomic(d, d.integer(1, 10), -2.0, 2.0), d.uniform(0.2, 2.0)};
      const std::vector<double> grid = uniform_grid(-3.0, 5.0, 400);
      const ShiftResult r = shift_from_measure(fam, grid);
      const ShiftClassification c = classify_shift(r.shift);
      alternating = alternating && alternates(c) && c.up_jumps.size() == fam.base.atoms().size() &&
                    c.down_jumps.size() == fam.base.atoms().size();
      // the inverse uses the alpha = 1 convention: rescale the family first
      const RankOneFamily unit{fam.base.dilated(1.0 / fam.alpha), 1.0};
      std::vector<double> scaled = grid;
      for (double& x : scaled) x /= fam.alpha;
      const ShiftResult ru = shift_from_measure(unit, scaled);
      const ShiftPair p = measures_from_shift(ru.shift);
      const RegionSet window{{scaled.front() - 1.0, scaled.back() + 1.0}};
      const Comparison cm = compare_measures(unit.base, p.mu, window, 1e-6);
      const Comparison cn = compare_measures(perturb_discrete(unit), p.nu, window, 1e-6);
      equivalent = equivalent && cm.relation == Relation::equivalent && cn.relation == Relation::equivalent;
      if (cm.relation == Relation::equivalent && cn.relation == Relation::equivalent)
        ratio = std::max({ratio, std::abs(cm.c - 1.0), std::abs(cm.C - 1.0), std::abs(cn.c - 1.0), std::abs(cn.C - 1.0)});
    }
    s.add("atomic families: up and down jumps alternate", alternating, alternating ? 1.0 : 0.0, 1.0);
    s.add("atomic families: reconstruction reproduces (mu, mu_alpha)", equivalent && ratio <= 1e-6, ratio, 1e-6,
          "max |Radon-Nikodym bound - 1|");
  }
  {
    const RegionSet O{{2.0, 3.0}};
    const ShiftFunction ut = dm_surgery(box, O);
    const SurgeryBound b = surgery_bound(box, ut, O, 200);
    s.add("surgery bound |K1(u - u~)| <= |O| off O", b.holds, b.max_deviation, b.bound);

    bool local = true;
    for (double x : uniform_grid(-2.0, 5.0, 700))
      if (!O.contains_closed(x)) local = local && ut.u()(x) == box.u()(x);
    double tent = 0.0;
    for (double x : uniform_grid(2.0, 3.0, 64)) tent = std::max(tent, std::abs(ut.u()(x) - std::min({x - 2.0, 3.0 - x, pi / 2})));
    s.add("surgery changes u only on O", local, local ? 1.0 : 0.0, 1.0);
    s.below("surgery tent on O", tent, 1e-12);

    const ShiftPair p = measures_from_shift(box);
    const ShiftPair q = measures_from_shift(ut);
    const RegionSet off = O.complement(-10.0, 10.0);
    const Comparison cm = compare_measures(p.mu, q.mu, off, 1e-6);
    const Comparison cn = compare_measures(p.nu, q.nu, off, 1e-6);
    const bool ok = cm.relation == Relation::equivalent && cn.relation == Relation::equivalent;
    s.add("surgery: restricted pairs equivalent off O", ok, ok ? cm.C : 0.0, 0.0,
          "mu (c, C) = (" + io::format_double(cm.c) + ", " + io::format_double(cm.C) + "), nu (c, C) = (" +
              io::format_double(cn.c) + ", " + io::format_double(cn.C) + ")");
  }
  {
    const ShiftClassification a = classify_shift(box);
    const bool box_ok = a.up_jumps.size() == 1 && a.down_jumps.size() == 1 && std::abs(a.up_jumps[0]) < 1e-12 &&
                        std::abs(a.down_jumps[0] - 1.0) < 1e-12 && a.ac_region.empty();
    const ShiftClassification h = classify_shift(step(0.0, 1.0, pi / 2));
    const bool half_ok = h.up_jumps.empty() && h.down_jumps.empty() && !h.ac_region.empty() &&
                         hausdorff(h.ac_region, RegionSet{{0.0, 1.0}}) < 1e-12;
    const ShiftFunction blocks({0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 5.0, 5.0},
                               {0.0, pi, pi, 0.0, 0.0, pi, pi, 0.0, 0.0, pi, pi, 0.0}, 0.0);
    const ShiftClassification k = classify_shift(blocks);
    const bool blocks_ok = k.up_jumps.size() == 3 && k.down_jumps.size() == 3 && alternates(k) && k.ac_region.empty();
    s.add("classification of reference shift functions", box_ok && half_ok && blocks_ok, 1.0, 1.0);
  }
  {
    const Measure mu = uniform_measure(0.0, 1.0);
    const std::vector<double> grid = uniform_grid(-1.0, 2.0, 150);
    const ShiftResult r = shift_from_measure({mu, 0.5}, grid);
    const ShiftClassification c = classify_shift(r.shift);
    const RegionSet e = essential_support_ac(mu, RegionSet{{-1.0, 2.0}}, {grid[1] - grid[0]});
    const double h = c.ac_region.empty() || e.empty() ? std::numeric_limits<double>::infinity() : hausdorff(c.ac_region, e);
    s.below("a.c. region of the shift matches esupp of mu", h, grid[1] - grid[0] + 1e-12);
  }
  return s.checks;
}

std::vector<Check> anderson_suite(std::uint64_t seed) {
  Suite s{"anderson", {}};
  const std::uint64_t master = Draw(seed, 501).bits();
  {
    AndersonModel m;
    m.L = 3;
    m.distribution = Distribution::constant(0.0);
    const SpectralSample mid = spectral_measure_at_site(m, sample_omega(m, 0), 1);
    const double r2 = std::sqrt(2.0);
    double e = std::max({std::abs(mid.eigenvalues[0] - (2 - r2)), std::abs(mid.eigenvalues[1] - 2.0),
                         std::abs(mid.eigenvalues[2] - (2 + r2))});
    s.below("free 3-site chain eigenvalues", e, 1e-14);
    s.below("middle-site weight at eigenvalue 2", mid.weights[1], 1e-15);
  }
  {
    Draw d(seed, 502);
    AndersonModel m;
    m.dim = 2;
    m.L = 6;
    m.boundary = Boundary::periodic;
    m.distribution = Distribution::uniform(0.0, 1.0);
    m.master_seed = master;
    double sum = 0.0, moment = 0.0, count = 0.0;
    bool symmetric = true;
    for (int t = 0; t < 5; ++t) {
      const OmegaRealization w = sample_omega(m, static_cast<std::uint64_t>(t));
      const linalg::SymmetricMatrix a = build_hamiltonian(m, w).dense();
      for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < a.n; ++j) symmetric = symmetric && a(i, j) == a(j, i);
      const std::size_t site = static_cast<std::size_t>(d.integer(0, 35));
      const SpectralSample sm = spectral_measure_at_site(m, w, site);
      double total = 0.0, first = 0.0;
      for (std::size_t k = 0; k < sm.weights.size(); ++k) {
        total += sm.weights[k];
        first += sm.eigenvalues[k] * sm.weights[k];
      }
      sum = std::max(sum, std::abs(total - 1.0));
      moment = std::max(moment, std::abs(first - (4.0 + w.values[site])));
      count = std::max(count, std::abs(static_cast<double>(sm.eigenvalues.size()) - 36.0));
    }
    s.add("Hamiltonian is exactly symmetric", symmetric, symmetric ? 1.0 : 0.0, 1.0);
    s.below("site weights sum to 1", sum, 1e-10);
    s.below("first moment equals the diagonal entry", moment, 1e-10);
    s.below("eigenvalue count equals volume", count, 0.0);
  }
  {
    AndersonModel zero, shifted;
    zero.L = shifted.L = 40;
    zero.distribution = Distribution::constant(0.0);
    shifted.distribution = Distribution::constant(0.75);
    const auto a = kernels::sample_spectra_serial(zero, 0, 1);
    const auto b = kernels::sample_spectra_serial(shifted, 0, 1);
    double e = 0.0;
    for (std::size_t k = 0; k < a[0].eigenvalues.size(); ++k)
      e = std::max(e, std::abs(b[0].eigenvalues[k] - a[0].eigenvalues[k] - 0.75));
    s.below("constant potential shifts the spectrum", e, 1e-12);
  }
  {
    AndersonModel m;
    m.L = 1;
    m.distribution = Distribution::uniform(0.0, 1.0);
    m.master_seed = master;
    double mean = 0.0;
    const int n = 10000;
    for (int t = 0; t < n; ++t) mean += sample_omega(m, static_cast<std::uint64_t>(t)).values[0];
    mean /= n;
    const double bound = 3.0 * std::sqrt(m.distribution.variance()) / 100.0;
    s.below("empirical mean of 10^4 samples", std::abs(mean - m.distribution.mean()), bound);
  }
  {
    AndersonModel m;
    m.L = 1000;
    m.distribution = Distribution::constant(0.0);
    EstimateOptions o;
    o.resolution = 0.01;
    const DeterministicReport r = estimate_deterministic_sets(m, 2, o);
    const double h = r.sigma_ess_estimate.empty() ? std::numeric_limits<double>::infinity()
                                                  : hausdorff(r.sigma_ess_estimate, RegionSet{{0.0, 4.0}});
    s.below("free Laplacian L = 1000: spectrum estimate vs [0, 4]", h, 0.01);
  }
  AndersonModel disorder;
  disorder.L = 200;
  disorder.distribution = Distribution::uniform(0.0, 1.0);
  disorder.master_seed = master;
  {
    EstimateOptions o;
    o.resolution = 0.1;
    const DeterministicReport r = estimate_deterministic_sets(disorder, 50, o);
    const double bound = 2 * o.resolution * (1 + 1e-9);
    s.below("sigma_ess halves agree (50 samples)", r.batch_variation[0], bound);
    s.below("a.c. support halves agree (50 samples)", r.batch_variation[1], bound);
    s.add("eigenvalues inside [0, 5]", r.min_eigenvalue >= 0.0 && r.max_eigenvalue <= 5.0, r.max_eigenvalue, 5.0);

    Draw d(seed, 503);
    AndersonModel edited = disorder;
    const int k = d.integer(1, 3);
    for (int i = 0; i < k; ++i)
      edited.edits.push_back({static_cast<std::size_t>(d.integer(0, disorder.L - 1)), d.uniform(-4.0, 8.0)});
    const DeterministicReport e = estimate_deterministic_sets(edited, 50, o);
    s.below("sigma_ess stable under finite-rank edits", hausdorff(r.sigma_ess_estimate, e.sigma_ess_estimate), bound);
    s.below("a.c. support stable under finite-rank edits", hausdorff(r.ac_support_estimate, e.ac_support_estimate), bound);

    const DeterministicReport again = estimate_deterministic_sets(disorder, 50, o);
    const bool same = again.sigma_ess_estimate == r.sigma_ess_estimate &&
                      again.ac_support_estimate == r.ac_support_estimate && again.batch_variation == r.batch_variation;
    s.add("Monte Carlo report is reproducible", same, same ? 1.0 : 0.0, 1.0);
  }
  {
    const auto a = kernels::sample_spectra_serial(disorder, 0, 8);
    const auto b = kernels::sample_spectra_parallel(disorder, 0, 8);
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i)
      same = same && a[i].eigenvalues == b[i].eigenvalues && a[i].weights == b[i].weights;
    s.add("serial and parallel sampling agree bitwise", same, same ? 1.0 : 0.0, 1.0);
  }
  {
    std::size_t shared = 0;
    const RegionSet far{{10.0, 11.0}};
    bool empty = true;
    for (std::uint64_t t = 0; t < 100; ++t) {
      const PairwiseReport r = pairwise_checks(disorder, 2 * t, 2 * t + 1, far, 1e-9);
      shared += r.close_pairs;
      empty = empty && r.open_set == OpenSetStatus::empty;
    }
    s.below("independent pairs share no eigenvalue within 1e-9 (100 pairs)", static_cast<double>(shared), 0.0);
    s.add("far open set has empty intersection", empty, empty ? 1.0 : 0.0, 1.0);
    const PairwiseReport same = pairwise_checks(disorder, 3, 3, far, 1e-9);
    s.add("identical realization reported", same.identical && same.close_pairs >= 200,
          static_cast<double>(same.close_pairs), 200.0, same.note);
    AndersonModel flat = disorder;
    flat.distribution = Distribution::constant(0.5);
    const PairwiseReport na = pairwise_checks(flat, 0, 1, far, 1e-9);
    s.add("constant disorder: singularity check not applicable", !na.applicable, na.applicable ? 1.0 : 0.0, 0.0,
          na.note);
  }
  return s.checks;
}

const std::vector<std::pair<std::string, std::function<std::vector<Check>(std::uint64_t)>>>& registry() {
  static const std::vector<std::pair<std::string, std::function<std::vector<Check>(std::uint64_t)>>> r = {
      {"measures", measures_suite},
      {"cauchy", cauchy_suite},
      {"rank_one", rank_one_suite},
      {"spectral_shift", spectral_shift_suite},
      {"anderson", anderson_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<Check> out;
  bool found = false;
  for (const auto& [name, fn] : registry()) {
    if (suite != "all" && suite != name) continue;
    found = true;
    auto checks = fn(seed);
    out.insert(out.end(), checks.begin(), checks.end());
  }
  if (!found) fail(ErrorKind::argument, "unknown suite '" + suite + "'");
  return out;
}

io::json to_json(const std::vector<Check>& checks, const std::string& suite, std::uint64_t seed) {
  io::json out;
  out["suite"] = suite;
  out["seed"] = seed;
  std::size_t passed = 0;
  io::json list = io::json::array();
  for (const auto& c : checks) {
    passed += c.passed ? 1 : 0;
    io::json j;
    j["suite"] = c.suite;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["value"] = c.value;
    j["threshold"] = c.threshold;
    if (!c.detail.empty()) j["detail"] = c.detail;
    list.push_back(std::move(j));
  }
  out["passed"] = passed;
  out["failed"] = checks.size() - passed;
  out["checks"] = std::move(list);
  return out;
}

}  // namespace krein::verify
