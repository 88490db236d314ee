#include "krein/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "krein/error.hpp"
#include "krein/parallel.hpp"

namespace krein {

std::vector<double> default_schedule() {
  std::vector<double> s;
  for (int j = 4; j <= 40; ++j) s.push_back(std::ldexp(1.0, -j));
  return s;
}

CauchyEvaluation cauchy_transform(const Measure& tau, cplx z, Kernel kernel) {
  if (!(z.imag() > 0.0)) fail(ErrorKind::domain, "Cauchy transform needs Im z > 0");
  CauchyEvaluation out;
  out.point = z;
  out.value = tau.transform(z, kernel);
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
    fail(ErrorKind::integrability, "transform is not finite");
  return out;
}

namespace {

void check_schedule(std::span<const double> schedule) {
  if (schedule.size() < 4) fail(ErrorKind::argument, "schedule needs at least four heights");
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    if (!(schedule[j] > 0.0)) fail(ErrorKind::argument, "schedule heights must be positive");
    if (j > 0 && !(schedule[j] < schedule[j - 1])) fail(ErrorKind::argument, "schedule must be strictly decreasing");
  }
}

}  // namespace

BoundaryLimit boundary_limit(const std::function<cplx(cplx)>& f, double x, std::span<const double> schedule,
                             double tol) {
  check_schedule(schedule);
  BoundaryLimit out;
  std::vector<cplx> samples;
  std::vector<cplx> first;
  std::vector<double> atom_products;
  cplx previous_extrapolant;
  bool have_previous = false;
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    const double eps = schedule[j];
    const cplx v = f(cplx(x, eps));
    samples.push_back(v);
    atom_products.push_back(std::numbers::pi * eps * v.imag());
    out.schedule_used.push_back(eps);
    out.last_sample = v;
    if (j == 0) {
      out.value = v;
      continue;
    }
    // two Richardson levels: the first removes the O(eps) term, the second the
    // O(eps) remainder of an eps log eps term (density kinks)
    const double e0 = schedule[j - 1], e1 = eps;
    first.push_back((e0 * v - e1 * samples[j - 1]) / (e0 - e1));
    if (j == 1) {
      out.value = first.back();
      continue;
    }
    const cplx r = (e0 * first.back() - e1 * first[first.size() - 2]) / (e0 - e1);
    out.value = r;
    if (have_previous) {
      out.residual = std::abs(r - previous_extrapolant);
      if (out.residual <= tol * std::max(1.0, std::abs(r))) {
        out.converged = true;
        break;
      }
    }
    previous_extrapolant = r;
    have_previous = true;
  }
  if (atom_products.size() >= 4) {
    const auto tail = std::span(atom_products).last(4);
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    if (*lo > tol && *hi <= 1.01 * *lo) out.atom_mass = tail.back();
  }
  return out;
}

BoundaryValue boundary_value(const Measure& tau, double x, std::span<const double> schedule, double tol,
                             Kernel kernel) {
  const BoundaryLimit lim = boundary_limit([&](cplx z) { return tau.transform(z, kernel); }, x, schedule, tol);
  BoundaryValue out;
  out.evaluation.point = cplx(x, 0.0);
  out.evaluation.value = lim.value;
  out.evaluation.mode = EvalMode::boundary_extrapolated;
  out.evaluation.converged = lim.converged;
  out.evaluation.residual = lim.residual;
  out.evaluation.schedule_used = lim.schedule_used;
  out.atom_mass = lim.atom_mass;
  return out;
}

RatioEstimate poltoratski_ratio(const Measure& tilde_tau, const Measure& tau, double x,
                                std::span<const double> schedule, double tol, bool singular_point) {
  if (!singular_point) {
    const bool is_atom = std::any_of(tau.atoms().begin(), tau.atoms().end(), [x](const Atom& a) {
      return std::abs(a.position - x) <= kAtomMergeTolerance;
    });
    if (!is_atom) fail(ErrorKind::argument, "ratio limit requested away from the singular part of tau");
  }
  bool any_usable = false;
  const BoundaryLimit lim = boundary_limit(
      [&](cplx z) {
        const cplx den = tau.transform(z, Kernel::K);
        if (std::abs(den) < 1e-300) return cplx(0.0, 0.0);
        any_usable = true;
        return tilde_tau.transform(z, Kernel::K) / den;
      },
      x, schedule, tol);
  if (!any_usable) fail(ErrorKind::indeterminate_ratio, "K(tau) underflows along the whole schedule");
  return {lim.value.real(), lim.converged, lim.residual};
}

namespace kernels {

std::vector<cplx> cauchy_many_serial(const Measure& tau, std::span<const cplx> points, Kernel kernel) {
  std::vector<cplx> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = tau.transform(points[i], kernel);
  return out;
}

std::vector<cplx> cauchy_many_parallel(const Measure& tau, std::span<const cplx> points, Kernel kernel) {
  std::vector<cplx> out(points.size());
  const auto n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(static) num_threads(parallel::thread_count())
  for (long long i = 0; i < n; ++i) out[i] = tau.transform(points[i], kernel);
  return out;
}

}  // namespace kernels

}  // namespace krein
