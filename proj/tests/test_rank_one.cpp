#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "krein/cauchy.hpp"
#include "krein/error.hpp"
#include "krein/rank_one.hpp"
#include "support.hpp"

using namespace krein;
using std::numbers::pi;

namespace {

const Measure delta0 = build_measure({{0.0, 1.0}}, {});
const Measure pair = build_measure({{-1.0, 0.5}, {1.0, 0.5}}, {});
const double golden_lo = (1.0 - std::sqrt(5.0)) / 2, golden_hi = (1.0 + std::sqrt(5.0)) / 2;

// eigen-decomposition of diag(t) + alpha w w^T by Eigen's QR-based solver
Measure eigen_oracle(const RankOneFamily& fam) {
  const auto& atoms = fam.base.atoms();
  const auto n = static_cast<Eigen::Index>(atoms.size());
  Eigen::VectorXd w(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = atoms[i].position;
    w(i) = std::sqrt(atoms[i].mass);
  }
  m += fam.alpha * w * w.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  std::vector<Atom> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double p = es.eigenvectors().col(k).dot(w);
    if (p * p > 0.0) out.push_back({es.eigenvalues()(k), p * p});
  }
  return Measure::from_normalized(std::move(out), {});
}

}  // namespace

TEST_CASE("Aronszajn-Krein formula: closed forms") {
  const cplx i(0.0, 1.0);
  const cplx v = perturbed_transform({delta0, 1.0}, i);
  CHECK(std::abs(v - (1.0 + i) / (2 * pi)) < 1e-16);
  CHECK(std::abs(v - cauchy_transform(build_measure({{1.0, 1.0}}, {}), i).value) < 1e-16);

  const Measure mu = test::random_mixed(3);
  const cplx z(0.3, 0.7);
  CHECK(perturbed_transform({mu, 0.0}, z) == cauchy_transform(mu, z).value);
}

TEST_CASE("Aronszajn-Krein formula: poles of the continuation at the golden-ratio points") {
  // 1 + pi K mu vanishes where mu_1 has its atoms
  for (double x : {golden_lo, golden_hi}) {
    const cplx k = pair.boundary_exact(x, Kernel::K);
    CHECK(std::abs(1.0 + pi * k) < 1e-14);
    CHECK(std::abs(perturbed_transform({pair, 1.0}, cplx(x, 1e-8))) > 1e6);
  }
}

TEST_CASE("matrix oracle: small cases") {
  const Measure one = perturb_discrete({delta0, 1.0});
  REQUIRE(one.atoms().size() == 1);
  CHECK(one.atoms()[0].position == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.atoms()[0].mass == doctest::Approx(1.0).epsilon(1e-15));

  const Measure two = perturb_discrete({pair, 1.0});
  REQUIRE(two.atoms().size() == 2);
  CHECK(std::abs(two.atoms()[0].position - golden_lo) < 1e-12);
  CHECK(std::abs(two.atoms()[1].position - golden_hi) < 1e-12);
  CHECK(two.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("matrix oracle: agrees with an independent eigensolver") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    test::Draw d(s, 11);
    const RankOneFamily fam{test::random_atomic(s, d.integer(2, 40), -3.0, 3.0), d.uniform(-3.0, 3.0)};
    const Measure a = perturb_discrete(fam), b = eigen_oracle(fam);
    REQUIRE(a.atoms().size() == b.atoms().size());
    for (std::size_t k = 0; k < a.atoms().size(); ++k) {
      CHECK(std::abs(a.atoms()[k].position - b.atoms()[k].position) < 1e-12);
      CHECK(std::abs(a.atoms()[k].mass - b.atoms()[k].mass) < 1e-10);
    }
  }
}

TEST_CASE("matrix oracle: preconditions") {
  CHECK_THROWS_AS(perturb_discrete({uniform_measure(0.0, 1.0), 1.0}), Error);
  try {
    perturb_discrete({build_measure({{0.0, 0.7}}, {}), 1.0});
    FAIL("mass 0.7 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::normalization);
  }
}

TEST_CASE("Aronszajn-Krein formula matches the matrix oracle") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    test::Draw d(s, 12);
    const RankOneFamily fam{test::random_atomic(s, d.integer(1, 50), -5.0, 5.0), d.uniform(-3.0, 3.0)};
    const Measure oracle = perturb_discrete(fam);
    for (int k = 0; k < 30; ++k) {
      const cplx z(d.uniform(-6.0, 6.0), std::exp(d.uniform(-4.0, 2.0)));
      cplx direct = 0.0;
      for (const auto& a : oracle.atoms()) direct += a.mass / (a.position - z);
      direct /= pi;
      worst = std::max(worst, std::abs(perturbed_transform(fam, z) - direct) / std::abs(direct));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("secular roots") {
  for (double alpha : {-2.0, 0.5, 3.0}) {
    const auto r = secular_roots({delta0, alpha});
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(alpha).epsilon(1e-13));
  }
  const auto g = secular_roots({pair, 1.0});
  REQUIRE(g.size() == 2);
  CHECK(std::abs(g[0] - golden_lo) < 1e-10);
  CHECK(std::abs(g[1] - golden_hi) < 1e-10);
  CHECK_THROWS_AS(secular_roots({pair, 0.0}), Error);
}

TEST_CASE("interlacing, mass conservation and the first-moment shift") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    test::Draw d(s, 13);
    const double alpha = s < 15 ? 0.7 : d.uniform(-3.0, 3.0);
    const RankOneFamily fam{test::random_atomic(s, 10, -2.0, 2.0), alpha};
    const auto& base = fam.base.atoms();
    const Measure out = perturb_discrete(fam);
    const auto roots = secular_roots(fam);
    REQUIRE(out.atoms().size() == base.size());
    REQUIRE(roots.size() == base.size());
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k) {
      const double x = out.atoms()[k].position;
      if (alpha > 0) {
        CHECK(x > base[k].position);
        if (k + 1 < base.size()) CHECK(x < base[k + 1].position);
      } else {
        CHECK(x < base[k].position);
        if (k > 0) CHECK(x > base[k - 1].position);
      }
      CHECK(std::abs(roots[k] - x) < 1e-9);
      m0 += base[k].position * base[k].mass;
      m1 += x * out.atoms()[k].mass;
    }
    CHECK(std::abs(out.total_mass() - 1.0) <= 1e-10);
    CHECK(std::abs(m1 - m0 - alpha) <= 1e-9);
  }
}

TEST_CASE("Aronszajn-Donoghue report") {
  const auto r = verify_aronszajn_donoghue(pair, 1.0, 2.0, 1e-8);
  CHECK(r.applicable);
  CHECK(r.atoms_disjoint);
  CHECK(r.min_atom_distance > 0.1);
  CHECK(r.secular_condition);

  const auto one = verify_aronszajn_donoghue(delta0, 1.0, 3.0, 1e-8);
  REQUIRE(one.atoms_alpha.size() == 1);
  CHECK(one.atoms_alpha[0] == doctest::Approx(1.0));
  CHECK(delta0.boundary_exact(1.0, Kernel::K).real() == doctest::Approx(-1.0 / pi).epsilon(1e-15));
  CHECK(one.max_secular_deviation < 1e-12);

  const auto same = verify_aronszajn_donoghue(delta0, 1.0, 1.0, 1e-8);
  CHECK_FALSE(same.applicable);
  CHECK(same.note.find("not applicable") != std::string::npos);
}

TEST_CASE("Aronszajn-Donoghue report: clustered base atoms") {
  const Measure base = build_measure({{-1.0, 0.25}, {0.0, 0.02}, {2.5e-5, 0.03}, {1.0, 0.7}}, {});
  const auto r = verify_aronszajn_donoghue(base, 1.17, 1.44, 1e-8);
  CHECK(r.secular_condition);
  CHECK(r.max_secular_deviation <= 1e-8);
  CHECK(r.min_atom_distance > 0.0);
  const Measure oracle = eigen_oracle({base, 1.17});
  REQUIRE(oracle.atoms().size() == r.atoms_alpha.size());
  for (std::size_t k = 0; k < r.atoms_alpha.size(); ++k)
    CHECK(std::abs(oracle.atoms()[k].position - r.atoms_alpha[k]) < 1e-12);
  // both members keep one atom inside the 2.5e-5 gap
  const auto inside = [](const std::vector<double>& xs) {
    return std::count_if(xs.begin(), xs.end(), [](double x) { return x > 0.0 && x < 2.5e-5; });
  };
  CHECK(inside(r.atoms_alpha) == 1);
  CHECK(inside(r.atoms_beta) == 1);
}
