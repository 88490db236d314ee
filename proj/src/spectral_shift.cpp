#include "krein/spectral_shift.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <cmath>
#include <limits>
#include <numbers>

#include "krein/error.hpp"
#include "krein/parallel.hpp"

namespace krein {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// |1 + pi alpha K mu| below this marks an atom of mu_alpha
constexpr double kSecularZero = 1e-8;
// values this close to 0 or pi count as exactly two-valued
constexpr double kTwoValuedTol = 1e-9;

// principal argument restricted to the closed upper half-plane
double upper_arg(cplx w) {
  const double im = w.imag() > 0.0 ? w.imag() : 0.0;
  return std::clamp(std::atan2(im, w.real()), 0.0, pi);
}

GridFunction clamp_values(GridFunction u) {
  if (u.empty()) return u;
  std::vector<double> g(u.grid().begin(), u.grid().end());
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) {
    if (x < -1e-9 || x > pi + 1e-9) fail(ErrorKind::construction, "shift function values must lie in [0, pi]");
    x = std::clamp(x, 0.0, pi);
  }
  return GridFunction(std::move(g), std::move(v));
}

struct Discontinuity {
  double x;
  double left;
  double right;
};

// Jumps of u including the implicit ones at the ends of the grid.
std::vector<Discontinuity> discontinuities(const GridFunction& u) {
  std::vector<Discontinuity> out;
  if (u.empty()) return out;
  const auto g = u.grid();
  const auto v = u.values();
  if (v.front() != 0.0) out.push_back({g.front(), 0.0, v.front()});
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (g[i] == g[i + 1] && v[i] != v[i + 1]) out.push_back({g[i], v[i], v[i + 1]});
  if (v.back() != 0.0) out.push_back({g.back(), v.back(), 0.0});
  return out;
}

bool full_up(const Discontinuity& d) { return d.left <= kTwoValuedTol && d.right >= pi - kTwoValuedTol; }
bool full_down(const Discontinuity& d) { return d.left >= pi - kTwoValuedTol && d.right <= kTwoValuedTol; }

struct Entry {
  double x;
  int rank;  // order among entries at the same x: left side first
  double v;
};

GridFunction assemble(std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.x < b.x || (a.x == b.x && a.rank < b.rank);
  });
  std::vector<double> g, v;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j + 1 < entries.size() && entries[j + 1].x == entries[i].x) ++j;
    g.push_back(entries[i].x);
    v.push_back(entries[i].v);
    if (j > i && entries[j].v != entries[i].v) {
      g.push_back(entries[j].x);
      v.push_back(entries[j].v);
    }
    i = j + 1;
  }
  return GridFunction(std::move(g), std::move(v));
}

void check_grid(std::span<const double> grid) {
  if (grid.size() < 2) fail(ErrorKind::argument, "grid needs at least two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) fail(ErrorKind::argument, "grid points must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) fail(ErrorKind::argument, "grid must be strictly increasing");
  }
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

// bisect a full 0 <-> pi transition of u inside (lo, hi) down to adjacent doubles
double locate_jump(const kernels::ShiftContext& ctx, double lo, double hi, bool up) {
  const auto want = up ? kernels::ShiftPoint::Kind::atom_mu : kernels::ShiftPoint::Kind::atom_mu_alpha;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const kernels::ShiftPoint p = kernels::shift_at(ctx, mid, false);
    if (p.kind == want) return mid;
    const bool low_side = p.kind == kernels::ShiftPoint::Kind::regular ? (p.u < 0.5 * pi) == up : true;
    if (low_side)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace

ShiftFunction::ShiftFunction(GridFunction u, double c) : u_(clamp_values(std::move(u))), c_(c) {
  if (!std::isfinite(c)) fail(ErrorKind::construction, "normalization constant must be finite");
}

ShiftFunction::ShiftFunction(std::vector<double> grid, std::vector<double> values, double c)
    : ShiftFunction(GridFunction(std::move(grid), std::move(values)), c) {}

bool ShiftFunction::is_zero() const {
  return std::all_of(u_.values().begin(), u_.values().end(), [](double v) { return v == 0.0; });
}

namespace kernels {

ShiftPoint shift_at(const ShiftContext& ctx, double x, bool with_alt) {
  const double alpha = ctx.family->alpha;
  const Measure& mu = ctx.family->base;
  ShiftPoint p;
  std::vector<cplx> samples;
  const BoundaryLimit lim = boundary_limit(
      [&](cplx z) {
        samples.push_back(mu.transform(z, Kernel::K));
        return samples.back();
      },
      x, ctx.schedule, ctx.tol);
  if (lim.atom_mass) {
    p.kind = ShiftPoint::Kind::atom_mu;
    p.u = 0.5 * pi;
    p.u_alt = kNaN;
    return p;
  }
  const cplx w = 1.0 + pi * alpha * lim.value;
  if (std::abs(w) < kSecularZero) {
    p.kind = ShiftPoint::Kind::atom_mu_alpha;
    p.u = 0.5 * pi;
    p.u_alt = kNaN;
    return p;
  }
  p.converged = lim.converged;
  p.u = upper_arg(lim.converged ? w : 1.0 + pi * alpha * lim.last_sample);
  if (!with_alt) return p;

  // the Aronszajn-Krein route revisits the same heights, so reuse K mu there
  std::size_t call = 0;
  const BoundaryLimit alt = boundary_limit(
      [&](cplx z) {
        if (ctx.perturbed) return ctx.perturbed->transform(z, Kernel::K);
        const cplx k = call < samples.size() ? samples[call] : mu.transform(z, Kernel::K);
        ++call;
        const cplx den = 1.0 + pi * alpha * k;
        if (std::abs(den) < 1e-300) fail(ErrorKind::pole_proximity, "Aronszajn-Krein denominator vanishes");
        return k / den;
      },
      x, ctx.schedule, ctx.tol);
  const cplx w_alt = 1.0 - pi * alpha * (alt.converged ? alt.value : alt.last_sample);
  if (alt.atom_mass || std::abs(w_alt) < kSecularZero)
    p.u_alt = kNaN;
  else
    p.u_alt = upper_arg(std::conj(w_alt));
  return p;
}

std::vector<ShiftPoint> shift_points_serial(const ShiftContext& ctx, std::span<const double> xs) {
  std::vector<ShiftPoint> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = shift_at(ctx, xs[i], true);
  return out;
}

std::vector<ShiftPoint> shift_points_parallel(const ShiftContext& ctx, std::span<const double> xs) {
  std::vector<ShiftPoint> out(xs.size());
  const auto n = static_cast<long long>(xs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8) num_threads(parallel::thread_count())
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = shift_at(ctx, xs[i], true);
    } catch (...) {
#pragma omp critical(krein_shift_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

namespace {

std::array<double, 2> densities_at(const GridFunction& u, double c, double x) {
  const cplx b = u.boundary(x, Kernel::K1);
  if (!std::isfinite(b.real())) fail(ErrorKind::numeric, "density requested at a discontinuity of u");
  const double re = b.real() + c;
  const double s = std::max(0.0, std::sin(b.imag()));
  return {std::exp(re) * s / pi, std::exp(-re) * s / pi};
}

}  // namespace

std::vector<std::array<double, 2>> shift_densities_serial(const GridFunction& u, double c, std::span<const double> xs) {
  std::vector<std::array<double, 2>> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = densities_at(u, c, xs[i]);
  return out;
}

std::vector<std::array<double, 2>> shift_densities_parallel(const GridFunction& u, double c,
                                                            std::span<const double> xs) {
  std::vector<std::array<double, 2>> out(xs.size());
  const auto n = static_cast<long long>(xs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(static) num_threads(parallel::thread_count())
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = densities_at(u, c, xs[i]);
    } catch (...) {
#pragma omp critical(krein_density_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace kernels

ShiftResult shift_from_measure(const RankOneFamily& family, std::span<const double> grid, const ShiftOptions& options) {
  if (!(family.alpha > 0.0) || !std::isfinite(family.alpha))
    fail(ErrorKind::argument, "shift function needs a finite coupling alpha > 0");
  check_grid(grid);

  const Measure& mu = family.base;
  std::optional<Measure> oracle;
  if (!mu.is_zero() && mu.is_atomic() && mu.atoms().size() <= 4000 && std::abs(mu.total_mass() - 1.0) <= 1e-10)
    oracle = perturb_discrete(family);

  kernels::ShiftContext ctx{&family, oracle ? &*oracle : nullptr, options.schedule, options.tol};
  const std::vector<kernels::ShiftPoint> pts = kernels::shift_points_parallel(ctx, grid);

  ShiftResult result;
  result.points = pts.size();
  using Kind = kernels::ShiftPoint::Kind;
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    switch (p.kind) {
      case Kind::regular:
        entries.push_back({grid[i], 0, p.u});
        if (!p.converged) ++result.nonconverged;
        if (std::isfinite(p.u_alt))
          result.consistency_residual = std::max(result.consistency_residual, std::abs(p.u - p.u_alt));
        break;
      case Kind::atom_mu:
        entries.push_back({grid[i], -1, 0.0});
        entries.push_back({grid[i], 1, pi});
        break;
      case Kind::atom_mu_alpha:
        entries.push_back({grid[i], -1, pi});
        entries.push_back({grid[i], 1, 0.0});
        break;
    }
  }
  if (result.nonconverged * 20 > result.points)
    fail(ErrorKind::accuracy, "boundary values did not converge at more than 5% of grid points");
  if (entries.front().v > kDefaultJumpTol || entries.back().v > kDefaultJumpTol)
    fail(ErrorKind::argument, "grid does not cover the supports of mu and mu_alpha");

  if (options.refine_jumps) {
    if (oracle) {
      auto insert_known = [&](const std::vector<Atom>& atoms, Kind kind, double left, double right) {
        for (const auto& a : atoms) {
          const double x = a.position;
          if (x <= grid.front() || x >= grid.back()) continue;
          const auto it = std::lower_bound(grid.begin(), grid.end(), x);
          const std::size_t j = static_cast<std::size_t>(it - grid.begin());
          if (near(grid[j], x) && pts[j].kind == kind) continue;
          if (near(grid[j - 1], x) && pts[j - 1].kind == kind) continue;
          entries.push_back({x, -1, left});
          entries.push_back({x, 1, right});
        }
      };
      insert_known(mu.atoms(), Kind::atom_mu, 0.0, pi);
      insert_known(oracle->atoms(), Kind::atom_mu_alpha, pi, 0.0);
    } else {
      const double lo_tol = kDefaultJumpTol, hi_tol = pi - kDefaultJumpTol;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i].kind != Kind::regular || pts[i + 1].kind != Kind::regular) continue;
        const double a = pts[i].u, b = pts[i + 1].u;
        const bool up = a <= lo_tol && b >= hi_tol;
        const bool down = a >= hi_tol && b <= lo_tol;
        if (!up && !down) continue;
        const double x = locate_jump(ctx, grid[i], grid[i + 1], up);
        entries.push_back({x, -1, a});
        entries.push_back({x, 1, b});
      }
    }
  }

  GridFunction u = assemble(std::move(entries));
  const cplx w_ref = 1.0 + pi * family.alpha * cauchy_transform(mu, cplx(0.0, 1.0)).value;
  const cplx f_ref = u.cauchy(cplx(0.0, 1.0), Kernel::K1);
  const double c = std::log(std::abs(w_ref)) - f_ref.real();
  result.fit_residual = std::abs(std::arg(w_ref) - f_ref.imag());
  result.shift = ShiftFunction(std::move(u), c);
  result.normalization = "fitted at z = i";
  return result;
}

ShiftPair measures_from_shift(const ShiftFunction& shift, const Normalization& normalization,
                              const ReconstructionOptions& options) {
  const GridFunction& u = shift.u();
  ShiftPair out;

  if (normalization.kind == Normalization::Kind::fitted) {
    out.c = u.empty() ? 0.0 : u.regularization_offset();
    out.normalization = "fitted: K mu vanishes at infinity";
  } else {
    if (!(normalization.mass > 0.0) || !std::isfinite(normalization.mass))
      fail(ErrorKind::argument, "reference mass must be positive and finite");
    if (shift.is_zero() || u.empty())
      fail(ErrorKind::normalization, "zero shift function admits no atom at the reference point");
    const BoundaryLimit lim = boundary_limit([&](cplx z) { return std::exp(u.cauchy(z, Kernel::K1)) / pi; },
                                             normalization.point, options.schedule, options.tol);
    if (!lim.atom_mass)
      fail(ErrorKind::normalization, "no admissible c: u has no full upward jump at the reference point");
    out.c = std::log(normalization.mass) - std::log(*lim.atom_mass);
    out.normalization = "reference mass";
  }
  if (u.empty() || shift.is_zero()) return out;
  const double c = out.c;

  std::vector<Atom> mu_atoms, nu_atoms;
  const auto jumps = discontinuities(u);
  for (const auto& d : jumps) {
    if (full_up(d)) {
      const BoundaryLimit lim = boundary_limit(
          [&](cplx z) { return (std::exp(u.cauchy(z, Kernel::K1) + c) - 1.0) / pi; }, d.x, options.schedule,
          options.tol);
      if (!lim.atom_mass) fail(ErrorKind::accuracy, "atom of mu at an upward jump could not be resolved");
      mu_atoms.push_back({d.x, *lim.atom_mass});
    } else if (full_down(d)) {
      const BoundaryLimit lim = boundary_limit(
          [&](cplx z) { return (1.0 - std::exp(-u.cauchy(z, Kernel::K1) - c)) / pi; }, d.x, options.schedule,
          options.tol);
      if (!lim.atom_mass) fail(ErrorKind::accuracy, "atom of nu at a downward jump could not be resolved");
      nu_atoms.push_back({d.x, *lim.atom_mass});
    }
  }

  // a.c. components: maximal runs of cells where u is not identically 0 or pi
  const auto g = u.grid();
  const auto v = u.values();
  auto flat = [](double a, double b) {
    return (a <= 1e-12 && b <= 1e-12) || (a >= pi - 1e-12 && b >= pi - 1e-12);
  };
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // first and last cell index per component
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (!(g[i + 1] > g[i]) || flat(v[i], v[i + 1])) continue;
    if (!cells.empty() && g[cells.back().second + 1] == g[i])
      cells.back().second = i;
    else
      cells.push_back({i, i});
  }

  std::vector<GridFunction> mu_pieces, nu_pieces;
  for (const auto& [first, last] : cells) {
    const double a = g[first], b = g[last + 1];
    std::vector<double> singular{a, b};
    for (const auto& d : jumps)
      if (d.x > a && d.x < b) singular.push_back(d.x);

    std::vector<double> xs;
    for (std::size_t i = first; i <= last; ++i) {
      if (!(g[i + 1] > g[i])) continue;
      for (int k = 0; k < options.subdivisions; ++k)
        xs.push_back(g[i] + (g[i + 1] - g[i]) * k / options.subdivisions);
    }
    xs.push_back(b);
    std::sort(singular.begin(), singular.end());
    for (std::size_t k = 0; k < singular.size(); ++k) {
      const double p = singular[k];
      const double s_min = options.min_spacing * std::max(1.0, std::abs(p));
      for (int side : {-1, 1}) {
        // grade out to half the distance to the neighbouring singular point
        double reach = 0.0;
        if (side < 0 && k > 0) reach = 0.5 * (p - singular[k - 1]);
        if (side > 0 && k + 1 < singular.size()) reach = 0.5 * (singular[k + 1] - p);
        for (double d = s_min; d < reach; d *= 1.0 + options.grading) xs.push_back(p + side * d);
      }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // evaluation points: one-sided offsets at the singular points
    std::vector<double> positions, evals;
    for (double x : xs) {
      const double delta = 0.5 * options.min_spacing * std::max(1.0, std::abs(x));
      const bool jump = std::any_of(jumps.begin(), jumps.end(), [x](const Discontinuity& d) { return d.x == x; });
      if (x == a) {
        positions.push_back(x);
        evals.push_back(x + delta);
      } else if (x == b) {
        positions.push_back(x);
        evals.push_back(x - delta);
      } else if (jump) {
        positions.push_back(x);
        evals.push_back(x - delta);
        positions.push_back(x);
        evals.push_back(x + delta);
      } else {
        positions.push_back(x);
        evals.push_back(std::clamp(x, a + delta, b - delta));
      }
    }
    const auto dens = kernels::shift_densities_parallel(u, c, evals);
    std::vector<double> rho_mu(dens.size()), rho_nu(dens.size());
    for (std::size_t k = 0; k < dens.size(); ++k) {
      rho_mu[k] = dens[k][0];
      rho_nu[k] = dens[k][1];
    }
    mu_pieces.emplace_back(positions, std::move(rho_mu));
    nu_pieces.emplace_back(std::move(positions), std::move(rho_nu));
  }

  out.mu = build_measure(std::move(mu_atoms), std::move(mu_pieces));
  out.nu = build_measure(std::move(nu_atoms), std::move(nu_pieces));
  return out;
}

Measure perturb_via_shift(const RankOneFamily& family, std::span<const double> grid,
                          const ShiftOptions& shift_options, const ReconstructionOptions& options) {
  const double alpha = family.alpha;
  if (alpha == 0.0) return family.base;
  if (!std::isfinite(alpha)) fail(ErrorKind::argument, "coupling must be finite");
  std::vector<double> scaled(grid.begin(), grid.end());
  for (double& x : scaled) x /= alpha;
  if (alpha < 0.0) std::reverse(scaled.begin(), scaled.end());
  const RankOneFamily unit{family.base.dilated(1.0 / alpha), 1.0};
  const ShiftResult forward = shift_from_measure(unit, scaled, shift_options);
  const ShiftPair pair = measures_from_shift(forward.shift, Normalization::fitted(), options);
  return pair.nu.dilated(alpha);
}

ShiftFunction dm_surgery(const ShiftFunction& shift, const RegionSet& region) {
  const GridFunction& u = shift.u();
  if (region.empty() || u.empty()) return shift;

  // two-valuedness of u on O, checked at every breakpoint inside O and the
  // inner limits at the component endpoints
  auto two_valued = [](double x) { return x <= kTwoValuedTol || x >= pi - kTwoValuedTol; };
  for (const auto& iv : region.intervals()) {
    std::vector<double> samples{u.right_limit(iv.lo)};
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u.grid()[i] > iv.lo && u.grid()[i] < iv.hi) samples.push_back(u.values()[i]);
    samples.push_back(u.left_limit(iv.hi));
    for (double s : samples)
      if (!two_valued(s)) fail(ErrorKind::precondition, "shift function is not two-valued on the surgery region");
    std::vector<double> xs{iv.lo};
    for (double x : u.grid())
      if (x > iv.lo && x < iv.hi) xs.push_back(x);
    xs.push_back(iv.hi);
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      if (!(xs[k + 1] > xs[k])) continue;
      if (std::abs(u.right_limit(xs[k]) - u.left_limit(xs[k + 1])) > kTwoValuedTol)
        fail(ErrorKind::precondition, "shift function is not two-valued on the surgery region");
    }
  }

  std::vector<double> positions(u.grid().begin(), u.grid().end());
  for (const auto& iv : region.intervals()) {
    const double a = iv.lo, b = iv.hi, mid = 0.5 * (a + b);
    for (double x : {a, b, mid, a + 0.5 * pi, b - 0.5 * pi})
      if (x >= a && x <= b) positions.push_back(x);
    for (int k = 1; k < 32; ++k) positions.push_back(a + (b - a) * k / 32.0);
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());

  auto tent = [&](double x) {
    return region.contains(x) ? std::min(region.distance_to_complement(x), 0.5 * pi) : 0.0;
  };
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const double x = positions[k];
    const double t = tent(x);
    const double left = std::abs(u.left_limit(x) - t);
    const double right = std::abs(u.right_limit(x) - t);
    if (k > 0) entries.push_back({x, -1, left});
    if (k + 1 < positions.size()) entries.push_back({x, 1, right});
  }
  GridFunction out = assemble(std::move(entries));
  const double c = out.regularization_offset();
  return ShiftFunction(std::move(out), c);
}

SurgeryBound surgery_bound(const ShiftFunction& u, const ShiftFunction& u_tilde, const RegionSet& region,
                           std::size_t n_points) {
  SurgeryBound out;
  out.bound = region.length();
  if (n_points == 0) fail(ErrorKind::argument, "surgery bound needs at least one point");
  const GridFunction diff = linear_combination(u.u(), 1.0, u_tilde.u(), -1.0);

  double lo = region.empty() ? 0.0 : region.lower(), hi = region.empty() ? 1.0 : region.upper();
  for (const GridFunction* f : {&u.u(), &u_tilde.u()}) {
    if (f->empty()) continue;
    lo = std::min(lo, f->front());
    hi = std::max(hi, f->back());
  }
  lo -= 1.0;
  hi += 1.0;

  for (const auto& iv : region.intervals()) {
    out.points.push_back(iv.lo);
    out.points.push_back(iv.hi);
  }
  if (out.points.size() < n_points) {
    const RegionSet outside = region.complement(lo, hi);
    const double total = outside.length();
    const std::size_t m = n_points - out.points.size();
    std::size_t j = 0;
    double before = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double s = (k + 0.5) * total / m;
      while (j + 1 < outside.intervals().size() && s > before + outside.intervals()[j].length()) {
        before += outside.intervals()[j].length();
        ++j;
      }
      out.points.push_back(outside.intervals()[j].lo + (s - before));
    }
  } else {
    out.points.resize(n_points);
  }
  std::sort(out.points.begin(), out.points.end());

  for (double x : out.points) {
    const double r = diff.empty() ? 0.0 : diff.boundary(x, Kernel::K1).real();
    out.max_deviation = std::max(out.max_deviation, std::abs(r));
  }
  out.holds = out.max_deviation <= out.bound;
  return out;
}

ShiftClassification classify_shift(const ShiftFunction& shift, double jump_tol) {
  ShiftClassification out;
  const GridFunction& u = shift.u();
  if (u.empty()) return out;

  // breakpoints with the implicit zero values beyond the ends
  std::vector<double> xs{u.front()}, vs{0.0};
  xs.insert(xs.end(), u.grid().begin(), u.grid().end());
  vs.insert(vs.end(), u.values().begin(), u.values().end());
  xs.push_back(u.back());
  vs.push_back(0.0);

  enum class Level { low, mid, high };
  auto level = [&](double v) { return v <= jump_tol ? Level::low : v >= pi - jump_tol ? Level::high : Level::mid; };

  std::vector<bool> in_jump(xs.size(), false);  // cell k = (xs[k], xs[k+1])
  std::size_t e = 0;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const Level lk = level(vs[k]);
    if (lk == Level::mid) continue;
    const Level le = level(vs[e]);
    if (lk != le) {
      std::size_t cells = 0;
      for (std::size_t j = e + 1; j <= k; ++j)
        if (xs[j] > xs[j - 1]) ++cells;
      if (cells <= 2) {
        double at = xs[k];
        for (std::size_t j = e; j < k; ++j) {
          const double a = vs[j] - 0.5 * pi, b = vs[j + 1] - 0.5 * pi;
          if ((a <= 0.0) != (b <= 0.0) || b == 0.0) {
            at = xs[j] == xs[j + 1] || a == b ? xs[j] : xs[j] + (xs[j + 1] - xs[j]) * a / (a - b);
            break;
          }
        }
        (lk == Level::high ? out.up_jumps : out.down_jumps).push_back(at);
        for (std::size_t j = e; j < k; ++j) in_jump[j] = true;
      }
    }
    e = k;
  }

  std::vector<Interval> cells;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    if (!(xs[k + 1] > xs[k]) || in_jump[k]) continue;
    const double m = 0.5 * (vs[k] + vs[k + 1]);
    if (m <= jump_tol || m >= pi - jump_tol) continue;
    if (!cells.empty() && cells.back().hi == xs[k])
      cells.back().hi = xs[k + 1];
    else
      cells.push_back({xs[k], xs[k + 1]});
  }
  out.ac_region = RegionSet(std::move(cells));
  return out;
}

}  // namespace krein
