#include "krein/rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "krein/cauchy.hpp"
#include "krein/error.hpp"
#include "krein/linalg.hpp"

namespace krein {

namespace {

std::vector<double> atom_positions(const Measure& mu) {
  std::vector<double> out;
  for (const auto& a : mu.atoms()) out.push_back(a.position);
  return out;
}

void require_atomic(const Measure& mu, const char* what) {
  if (!mu.is_atomic() || mu.atoms().empty()) fail(ErrorKind::representation, std::string(what) + " needs a purely atomic base");
}

// 1 + alpha * sum m_i / (t_i - x), i.e. 1 + pi alpha K mu(x) on the real axis
double secular_function(const std::vector<Atom>& atoms, double alpha, double x) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass / (a.position - x);
  return 1.0 + alpha * s;
}

double bisect(const std::vector<Atom>& atoms, double alpha, double lo, double hi) {
  // secular function increases on each gap when alpha > 0 and decreases when alpha < 0
  const double sign = alpha > 0 ? 1.0 : -1.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sign * secular_function(atoms, alpha, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

cplx perturbed_transform(const RankOneFamily& family, cplx z) {
  const cplx k = cauchy_transform(family.base, z).value;
  const cplx den = 1.0 + std::numbers::pi * family.alpha * k;
  if (std::abs(den) < 1e-300) fail(ErrorKind::pole_proximity, "Aronszajn-Krein denominator vanishes");
  return k / den;
}

Measure perturb_discrete(const RankOneFamily& family) {
  require_atomic(family.base, "matrix oracle");
  const auto& atoms = family.base.atoms();
  const std::size_t n = atoms.size();
  if (n > 4000) fail(ErrorKind::resource, "matrix oracle limited to 4000 atoms");
  if (std::abs(family.base.total_mass() - 1.0) > 1e-10)
    fail(ErrorKind::normalization, "matrix oracle needs a unit cyclic vector (total mass 1)");
  if (!std::isfinite(family.alpha)) fail(ErrorKind::argument, "coupling must be finite");

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::sqrt(atoms[i].mass);
  linalg::SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = family.alpha * w[i] * w[j] + (i == j ? atoms[i].position : 0.0);
  const linalg::EigenSystem es = linalg::jacobi_eigen(std::move(m));

  std::vector<Atom> out;
  for (std::size_t k = 0; k < n; ++k) {
    double proj = 0.0;
    const auto v = es.vector(k);
    for (std::size_t i = 0; i < n; ++i) proj += v[i] * w[i];
    const double mass = proj * proj;
    if (mass > 0.0) out.push_back({es.values[k], mass});
  }
  return Measure::from_normalized(std::move(out), {});
}

std::vector<double> secular_roots(const RankOneFamily& family) {
  require_atomic(family.base, "secular equation");
  if (family.alpha == 0.0) fail(ErrorKind::argument, "coupling must be nonzero");
  const auto& atoms = family.base.atoms();
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
    roots.push_back(bisect(atoms, family.alpha, atoms[i].position, atoms[i + 1].position));

  const double cap = 10.0 * (1.0 + std::abs(family.alpha));
  if (family.alpha > 0) {
    const double t = atoms.back().position;
    double step = std::max(1e-3, 1e-3 * std::abs(family.alpha));
    double hi = t + step;
    while (secular_function(atoms, family.alpha, hi) < 0.0 && hi < t + cap) {
      step *= 2.0;
      hi = std::min(t + step, t + cap);
    }
    roots.push_back(bisect(atoms, family.alpha, t, hi));
  } else {
    const double t = atoms.front().position;
    double step = std::max(1e-3, 1e-3 * std::abs(family.alpha));
    double lo = t - step;
    while (secular_function(atoms, family.alpha, lo) < 0.0 && lo > t - cap) {
      step *= 2.0;
      lo = std::max(t - step, t - cap);
    }
    roots.insert(roots.begin(), bisect(atoms, family.alpha, lo, t));
  }
  return roots;
}

AronszajnDonoghueReport verify_aronszajn_donoghue(const Measure& base, double alpha, double beta, double tol) {
  AronszajnDonoghueReport report;
  if (alpha == beta) {
    report.applicable = false;
    report.note = "identical family member; theorem not applicable";
    return report;
  }
  require_atomic(base, "Aronszajn-Donoghue check");
  // bisected roots stay ulp-accurate between tightly clustered base atoms
  report.atoms_alpha = alpha == 0.0 ? atom_positions(base) : secular_roots({base, alpha});
  report.atoms_beta = beta == 0.0 ? atom_positions(base) : secular_roots({base, beta});

  double dmin = std::numeric_limits<double>::infinity();
  for (double x : report.atoms_alpha) {
    auto it = std::lower_bound(report.atoms_beta.begin(), report.atoms_beta.end(), x);
    if (it != report.atoms_beta.end()) dmin = std::min(dmin, *it - x);
    if (it != report.atoms_beta.begin()) dmin = std::min(dmin, x - *std::prev(it));
  }
  report.min_atom_distance = dmin;
  report.atoms_disjoint = dmin > tol;

  if (alpha == 0.0) {
    report.note = "alpha = 0: secular condition is vacuous";
    report.secular_condition = true;
    return report;
  }
  const double target = -1.0 / (std::numbers::pi * alpha);
  double worst = 0.0;
  for (double x : report.atoms_alpha) worst = std::max(worst, std::abs(base.boundary_exact(x, Kernel::K).real() - target));
  report.max_secular_deviation = worst;
  report.secular_condition = worst <= tol;
  return report;
}

}  // namespace krein
