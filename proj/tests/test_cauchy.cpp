#include <doctest.h>

#include <cmath>
#include <numbers>

#include "krein/cauchy.hpp"
#include "krein/error.hpp"
#include "krein/parallel.hpp"
#include "support.hpp"

using namespace krein;
using std::numbers::pi;

namespace {

const Measure delta0 = build_measure({{0.0, 1.0}}, {});

// (1/pi) * integral of a linear density against 1/(t - z) by composite
// Gauss-Legendre; independent of the closed forms used by the library
cplx quadrature_K(const GridFunction& f, cplx z) {
  static const double x[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static const double w[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                             0.2369268850561891};
  cplx sum = 0.0;
  f.for_each_cell([&](double t0, double t1, double f0, double f1) {
    const int sub = 400;
    for (int s = 0; s < sub; ++s) {
      const double a = t0 + (t1 - t0) * s / sub, b = t0 + (t1 - t0) * (s + 1) / sub;
      for (int k = 0; k < 5; ++k) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * x[k];
        const double ft = f0 + (f1 - f0) * (t - t0) / (t1 - t0);
        sum += 0.5 * (b - a) * w[k] * ft / (t - z);
      }
    }
  });
  return sum / pi;
}

}  // namespace

TEST_CASE("closed-form transforms at z = i") {
  const cplx i(0.0, 1.0);
  CHECK(std::abs(cauchy_transform(delta0, i).value - i / pi) < 1e-16);
  CHECK(std::abs(cauchy_transform(delta0, i, Kernel::K1).value - i / pi) < 1e-16);

  const cplx u = cauchy_transform(uniform_measure(0.0, 1.0), i).value;
  CHECK(std::abs(u - std::log(1.0 + i) / pi) < 1e-15);
  CHECK(u.real() == doctest::Approx(0.110318).epsilon(1e-5));
  CHECK(u.imag() == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("linear densities agree with quadrature") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Measure mu = test::random_mixed(s);
    test::Draw d(s, 3);
    for (int k = 0; k < 10; ++k) {
      const cplx z(d.uniform(-4.0, 4.0), d.uniform(0.2, 3.0));
      cplx expected = 0.0;
      for (const auto& a : mu.atoms()) expected += a.mass / (a.position - z) / pi;
      for (const auto& g : mu.ac_pieces()) expected += quadrature_K(g, z);
      CHECK(std::abs(cauchy_transform(mu, z).value - expected) < 1e-11);
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(cauchy_transform(delta0, cplx(1.0, 0.0)), Error);
  CHECK_THROWS_AS(cauchy_transform(delta0, cplx(1.0, -1.0)), Error);
}

TEST_CASE("Herglotz positivity") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Measure mu = s % 2 ? test::random_mixed(s) : test::random_atomic(s, 10, -3.0, 3.0);
    test::Draw d(s, 4);
    for (int k = 0; k < 50; ++k) {
      const cplx z(d.uniform(-6.0, 6.0), std::exp(d.uniform(-12.0, 3.0)));
      CHECK(cauchy_transform(mu, z).value.imag() > -1e-14);
      CHECK(cauchy_transform(mu, z, Kernel::K1).value.imag() > -1e-14);
    }
  }
}

TEST_CASE("K and K1 differ by a real constant") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Measure mu = test::random_mixed(s);
    test::Draw d(s, 6);
    std::vector<cplx> diffs;
    for (int k = 0; k < 10; ++k) {
      const cplx z(d.uniform(-5.0, 5.0), d.uniform(0.01, 5.0));
      diffs.push_back(cauchy_transform(mu, z, Kernel::K1).value - cauchy_transform(mu, z).value);
    }
    for (const cplx& c : diffs) {
      CHECK(std::abs(c - diffs.front()) < 1e-10);
      CHECK(std::abs(c.imag()) < 1e-10);
    }
  }
}

TEST_CASE("linearity") {
  const Measure a = test::random_mixed(1), b = test::random_mixed(2);
  const double wa = 0.3, wb = 2.5;
  const Measure ab = sum(a.scaled(wa), b.scaled(wb));
  for (double x : {-2.0, 0.1, 1.7}) {
    const cplx z(x, 0.3);
    const cplx expected = wa * cauchy_transform(a, z).value + wb * cauchy_transform(b, z).value;
    CHECK(std::abs(cauchy_transform(ab, z).value - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("boundary values") {
  const auto schedule = default_schedule();
  CHECK(schedule.front() == 1.0 / 16);
  CHECK(schedule.size() == 37);

  const BoundaryValue u = boundary_value(uniform_measure(0.0, 1.0), 0.5, schedule, 1e-10);
  CHECK(u.evaluation.mode == EvalMode::boundary_extrapolated);
  CHECK(u.evaluation.converged);
  CHECK(u.evaluation.value.imag() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(u.evaluation.schedule_used.empty());
  CHECK_FALSE(u.atom_mass.has_value());

  const BoundaryValue d = boundary_value(delta0, 0.5, schedule, 1e-10);
  CHECK(d.evaluation.value.real() == doctest::Approx(-2.0 / pi).epsilon(1e-10));
  CHECK(std::abs(d.evaluation.value.imag()) < 1e-9);

  const BoundaryValue at = boundary_value(delta0, 0.0, schedule, 1e-10);
  REQUIRE(at.atom_mass.has_value());
  CHECK(*at.atom_mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary a.c. recovery at interior grid points") {
  const double tol = 1e-10;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Measure mu = test::random_mixed(s + 50);
    const GridFunction& g = mu.ac_pieces().front();
    for (std::size_t k = 1; k + 1 < g.size(); ++k) {
      const double x = g.grid()[k];
      bool near_atom = false;
      for (const auto& a : mu.atoms()) near_atom |= std::abs(a.position - x) < 1e-3;
      if (near_atom) continue;
      const BoundaryValue b = boundary_value(mu, x, default_schedule(), tol);
      CHECK(std::abs(b.evaluation.value.imag() - g.values()[k]) <= 10 * tol);
    }
  }
}

TEST_CASE("Poltoratski ratio") {
  const auto sched = default_schedule();
  CHECK(poltoratski_ratio(delta0.scaled(2.0), delta0, 0.0, sched, 1e-10).value == doctest::Approx(2.0));

  const Measure tau = build_measure({{0.0, 1.0}, {1.0, 1.0}}, {});
  const Measure tilde = build_measure({{0.0, 2.0}, {1.0, 3.0}}, {});
  const RatioEstimate r0 = poltoratski_ratio(tilde, tau, 0.0, sched, 1e-10);
  const RatioEstimate r1 = poltoratski_ratio(tilde, tau, 1.0, sched, 1e-10);
  CHECK(r0.converged);
  CHECK(r0.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r1.value == doctest::Approx(3.0).epsilon(1e-9));

  const RatioEstimate far = poltoratski_ratio(sum(delta0, uniform_measure(2.0, 3.0)), delta0, 0.0, sched, 1e-10);
  CHECK(far.value == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(poltoratski_ratio(delta0, delta0, 0.5, sched, 1e-10), Error);
}

TEST_CASE("transform kernel: serial and parallel agree bitwise") {
  const Measure mu = sum(test::random_mixed(3), cantor_measure(6));
  std::vector<cplx> z;
  for (int i = 0; i < 2000; ++i) z.push_back({-4.0 + 8.0 * i / 2000, 1e-3 + 0.001 * (i % 7)});
  const auto serial = kernels::cauchy_many_serial(mu, z, Kernel::K1);
  for (int threads : {1, 2, 4}) {
    parallel::set_thread_count(threads);
    const auto par = kernels::cauchy_many_parallel(mu, z, Kernel::K1);
    REQUIRE(par.size() == serial.size());
    bool same = true;
    for (std::size_t i = 0; i < z.size(); ++i) same = same && par[i] == serial[i];
    CHECK(same);
  }
  parallel::set_thread_count(0);
}

TEST_CASE("grid function boundary values and jumps") {
  const GridFunction step({0.0, 0.0, 1.0, 1.0}, {0.0, 1.0, 1.0, 0.0});
  CHECK(step(0.0) == 1.0);
  CHECK(step.left_limit(0.0) == 0.0);
  CHECK(step.integral() == doctest::Approx(1.0));
  const cplx b = step.boundary(0.5, Kernel::K);
  CHECK(b.imag() == 1.0);
  CHECK(b.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::isinf(step.boundary(0.0, Kernel::K).real()));
  // near a kink the closed form keeps full precision
  const GridFunction tent({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  const cplx near = tent.cauchy(cplx(1.0, 1e-9), Kernel::K);
  CHECK(near.imag() == doctest::Approx(1.0).epsilon(1e-8));
}
