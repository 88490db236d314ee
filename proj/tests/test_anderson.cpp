#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "krein/anderson.hpp"
#include "krein/error.hpp"
#include "krein/linalg.hpp"
#include "krein/parallel.hpp"
#include "krein/rng.hpp"

using namespace krein;
using std::numbers::pi;

namespace {

AndersonModel chain(int L, Distribution d, std::uint64_t seed = 11) {
  AndersonModel m;
  m.L = L;
  m.distribution = d;
  m.master_seed = seed;
  return m;
}

bool same_spectra(const std::vector<SampleSpectrum>& a, const std::vector<SampleSpectrum>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].omega_index != b[i].omega_index || a[i].eigenvalues != b[i].eigenvalues || a[i].weights != b[i].weights)
      return false;
  return true;
}

}  // namespace

TEST_CASE("counter-based mix: frozen reference values") {
  // first SplitMix64 outputs for states 0 and 1
  CHECK(rng::splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(rng::splitmix64(1) == 0x910a2dec89025cc1ULL);
  CHECK(rng::counter_mix(0, 0, 0) == 0x238275bc38fcbe91ULL);
  CHECK(rng::counter_mix(1, 2, 3) == 0xd0734750fde362b3ULL);
  CHECK(rng::counter_mix(42, 7, 199) == 0x64b831024c44179cULL);
  CHECK(rng::uniform01(0, 0, 0) == 0.13870941014555427);
  CHECK(rng::uniform01(42, 7, 199) == 0.3934355383501187);
}

TEST_CASE("distributions") {
  const Distribution u = Distribution::uniform(-1.0, 3.0);
  CHECK(u.quantile(0.0) == -1.0);
  CHECK(u.quantile(0.5) == 1.0);
  CHECK(u.mean() == 1.0);
  CHECK(u.variance() == doctest::Approx(16.0 / 12));
  const Distribution b = Distribution::bernoulli(0.0, 2.0, 0.25);
  CHECK(b.quantile(0.74) == 0.0);
  CHECK(b.quantile(0.76) == 2.0);
  CHECK(b.mean() == doctest::Approx(0.5));
  CHECK(Distribution::constant(0.3).is_constant());
  CHECK(Distribution::bernoulli(1.0, 1.0, 0.5).is_constant());
}

TEST_CASE("sample_omega: determinism, range and mean") {
  AndersonModel m = chain(50, Distribution::uniform(0.0, 1.0));
  const OmegaRealization a = sample_omega(m, 4), b = sample_omega(m, 4);
  CHECK(a.values == b.values);
  CHECK(sample_omega(m, 5).values != a.values);
  for (double v : a.values) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  // values are the documented mix pushed through the inverse CDF
  CHECK(a.values[17] == rng::uniform01(m.master_seed, 4, 17));

  m.L = 1;
  double mean = 0.0;
  for (std::uint64_t t = 0; t < 10000; ++t) mean += sample_omega(m, t).values[0];
  mean /= 10000;
  CHECK(std::abs(mean - 0.5) <= 3.0 * std::sqrt(1.0 / 12) / 100);

  m.distribution = Distribution::bernoulli(0.0, 1.0, 0.3);
  double hits = 0.0;
  for (std::uint64_t t = 0; t < 10000; ++t) hits += sample_omega(m, t).values[0];
  CHECK(std::abs(hits / 10000 - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7) / 100);
}

TEST_CASE("model validation") {
  AndersonModel m = chain(10, Distribution::uniform(0.0, 1.0));
  m.dim = 3;
  CHECK_THROWS_AS(m.validate(), Error);
  m.dim = 2;
  m.L = 201;
  try {
    m.validate();
    FAIL("volume 40401 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::resource);
  }
  m.L = 10;
  m.distribution = Distribution::bernoulli(0.0, 1.0, 1.5);
  CHECK_THROWS_AS(m.validate(), Error);
  m.distribution = Distribution::uniform(0.0, std::nan(""));
  CHECK_THROWS_AS(m.validate(), Error);
  m.distribution = Distribution::uniform(0.0, 1.0);
  m.sites = {100};
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("Hamiltonian: free three-site chain") {
  const AndersonModel m = chain(3, Distribution::constant(0.0));
  const SpectralSample mid = spectral_measure_at_site(m, sample_omega(m, 0), 1);
  REQUIRE(mid.eigenvalues.size() == 3);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(mid.eigenvalues[k - 1] - (2.0 - 2.0 * std::cos(k * pi / 4))) < 1e-14);
  CHECK(mid.weights[1] < 1e-15);
  CHECK(mid.weights[0] == doctest::Approx(0.5));
}

TEST_CASE("Hamiltonian: closed-form spectra of free boxes") {
  // periodic ring: 2 - 2 cos(2 pi k / L)
  AndersonModel ring = chain(12, Distribution::constant(0.0));
  ring.boundary = Boundary::periodic;
  std::vector<double> expected;
  for (int k = 0; k < 12; ++k) expected.push_back(2.0 - 2.0 * std::cos(2 * pi * k / 12));
  std::sort(expected.begin(), expected.end());
  const auto r = kernels::sample_spectra_serial(ring, 0, 1);
  for (std::size_t k = 0; k < 12; ++k) CHECK(std::abs(r[0].eigenvalues[k] - expected[k]) < 1e-13);

  // 2D Dirichlet square: sums of two 1D spectra
  AndersonModel sq = chain(5, Distribution::constant(0.0));
  sq.dim = 2;
  expected.clear();
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b) expected.push_back(4.0 - 2.0 * std::cos(a * pi / 6) - 2.0 * std::cos(b * pi / 6));
  std::sort(expected.begin(), expected.end());
  const auto s = kernels::sample_spectra_serial(sq, 0, 1);
  REQUIRE(s[0].eigenvalues.size() == 25);
  for (std::size_t k = 0; k < 25; ++k) CHECK(std::abs(s[0].eigenvalues[k] - expected[k]) < 1e-13);

  // a single periodic site bonds to itself twice
  AndersonModel dot = chain(1, Distribution::constant(0.0));
  dot.boundary = Boundary::periodic;
  CHECK(std::abs(kernels::sample_spectra_serial(dot, 0, 1)[0].eigenvalues[0]) < 1e-15);
}

TEST_CASE("Hamiltonian: symmetry, weights and first moments") {
  AndersonModel m = chain(6, Distribution::uniform(0.0, 1.0));
  m.dim = 2;
  m.boundary = Boundary::periodic;
  for (std::uint64_t t = 0; t < 4; ++t) {
    const OmegaRealization w = sample_omega(m, t);
    const linalg::SymmetricMatrix a = build_hamiltonian(m, w).dense();
    bool symmetric = true;
    for (std::size_t i = 0; i < a.n; ++i)
      for (std::size_t j = 0; j < a.n; ++j) symmetric = symmetric && a(i, j) == a(j, i);
    CHECK(symmetric);
    const std::size_t site = 7 * t + 3;
    const SpectralSample s = spectral_measure_at_site(m, w, site);
    CHECK(s.eigenvalues.size() == 36);
    double total = 0.0, first = 0.0;
    for (std::size_t k = 0; k < 36; ++k) {
      total += s.weights[k];
      first += s.weights[k] * s.eigenvalues[k];
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
    CHECK(std::abs(first - (4.0 + w.values[site])) <= 1e-10);
  }
  OmegaRealization bad;
  bad.values.assign(5, 0.0);
  CHECK_THROWS_AS(build_hamiltonian(m, bad), Error);
}

TEST_CASE("constant potential shifts the spectrum") {
  const auto a = kernels::sample_spectra_serial(chain(40, Distribution::constant(0.0)), 0, 1);
  const auto b = kernels::sample_spectra_serial(chain(40, Distribution::constant(0.75)), 0, 1);
  for (std::size_t k = 0; k < 40; ++k) CHECK(std::abs(b[0].eigenvalues[k] - a[0].eigenvalues[k] - 0.75) < 1e-12);
}

TEST_CASE("long chains use Sturm bisection") {
  AndersonModel m = chain(2500, Distribution::constant(0.0));
  m.sites = {1249};
  const auto s = kernels::sample_spectra_serial(m, 0, 1);
  REQUIRE(s[0].eigenvalues.size() == 2500);
  double worst = 0.0, weight = 0.0, total = 0.0;
  for (std::size_t k = 0; k < 2500; ++k) {
    worst = std::max(worst, std::abs(s[0].eigenvalues[k] - (2.0 - 2.0 * std::cos((k + 1.0) * pi / 2501))));
    // squared sine-mode component at site 1249
    const double mode = std::sin((k + 1.0) * 1250.0 * pi / 2501);
    weight = std::max(weight, std::abs(s[0].weights[k] - 2.0 / 2501 * mode * mode));
    total += s[0].weights[k];
  }
  CHECK(worst < 1e-12);
  CHECK(weight < 1e-12);
  CHECK(std::abs(total - 1.0) < 1e-10);

  // disordered chains have numerically degenerate pairs of distant localized states
  AndersonModel dis = chain(3000, Distribution::uniform(0.0, 4.0));
  dis.sites = {0, 1500, 2999};
  const OmegaRealization w = sample_omega(dis, 1);
  for (std::size_t site : dis.sites) {
    const SpectralSample sm = spectral_measure_at_site(dis, w, site);
    double sum = 0.0, first = 0.0;
    for (std::size_t k = 0; k < sm.weights.size(); ++k) {
      sum += sm.weights[k];
      first += sm.weights[k] * sm.eigenvalues[k];
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
    CHECK(std::abs(first - (2.0 + w.values[site])) < 1e-10);
  }

  // a dense 2D box of the same size is out of reach
  AndersonModel sq = chain(50, Distribution::constant(0.0));
  sq.dim = 2;
  CHECK_THROWS_AS(kernels::sample_spectra_serial(sq, 0, 1), Error);
}

TEST_CASE("tridiagonal bisection: serial and parallel agree bitwise") {
  const AndersonModel m = chain(300, Distribution::uniform(0.0, 1.0));
  const Hamiltonian h = build_hamiltonian(m, sample_omega(m, 2));
  const auto off = h.off_diagonal();
  const auto serial = linalg::tridiagonal_eigenvalues_serial(h.diag, off);
  for (int threads : {1, 2, 4}) {
    parallel::set_thread_count(threads);
    CHECK(linalg::tridiagonal_eigenvalues_parallel(h.diag, off) == serial);
  }
  parallel::set_thread_count(0);
  CHECK(linalg::sturm_count(h.diag, off, serial[10]) == 10);
}

TEST_CASE("sampling: serial and parallel agree bitwise for any worker count") {
  AndersonModel m = chain(120, Distribution::uniform(0.0, 1.0));
  m.sites = {3, 60};
  const auto serial = kernels::sample_spectra_serial(m, 5, 12);
  for (int threads : {1, 2, 3, 8}) {
    parallel::set_thread_count(threads);
    CHECK(same_spectra(kernels::sample_spectra_parallel(m, 5, 12), serial));
  }
  parallel::set_thread_count(0);
}

TEST_CASE("free Laplacian: spectrum estimate fills [0, 4]") {
  EstimateOptions o;
  o.resolution = 0.01;
  const DeterministicReport r = estimate_deterministic_sets(chain(1000, Distribution::constant(0.0)), 2, o);
  REQUIRE_FALSE(r.sigma_ess_estimate.empty());
  CHECK(hausdorff(r.sigma_ess_estimate, RegionSet{{0.0, 4.0}}) <= 0.01);
}

TEST_CASE("uniform disorder: bounds, halves and finite-rank edits") {
  const AndersonModel m = chain(200, Distribution::uniform(0.0, 1.0), 99);
  EstimateOptions o;
  o.resolution = 0.1;
  const DeterministicReport r = estimate_deterministic_sets(m, 50, o);
  CHECK(r.min_eigenvalue >= 0.0);
  CHECK(r.max_eigenvalue <= 5.0);
  REQUIRE(r.batch_variation.size() == 2);
  CHECK(r.batch_variation[0] <= 0.2);
  CHECK(r.batch_variation[1] <= 0.2);
  CHECK(r.n_samples == 50);

  AndersonModel edited = m;
  edited.edits = {{0, 7.5}, {100, -3.0}, {199, 2.0}};
  const DeterministicReport e = estimate_deterministic_sets(edited, 50, o);
  CHECK(hausdorff(r.sigma_ess_estimate, e.sigma_ess_estimate) <= 0.2);
  CHECK(hausdorff(r.ac_support_estimate, e.ac_support_estimate) <= 0.2);

  // an isolated eigenvalue from the edit at 7.5 is dropped as an outlier
  CHECK(e.max_eigenvalue > 6.0);
  CHECK(e.sigma_ess_estimate.upper() < 5.5);
  CHECK(e.outlier_cells > 0);

  const DeterministicReport again = estimate_deterministic_sets(m, 50, o);
  CHECK(again.sigma_ess_estimate == r.sigma_ess_estimate);
  CHECK(again.ac_support_estimate == r.ac_support_estimate);
  CHECK(again.batch_variation == r.batch_variation);

  // same report from spectra sampled elsewhere
  const auto spectra = kernels::sample_spectra_serial(m, 0, 50);
  const DeterministicReport from = estimate_from_spectra(m, spectra, o);
  CHECK(from.sigma_ess_estimate == r.sigma_ess_estimate);
  CHECK(from.ac_support_estimate == r.ac_support_estimate);

  CHECK_THROWS_AS(estimate_deterministic_sets(m, 1, o), Error);
}

TEST_CASE("pairwise checks") {
  const AndersonModel m = chain(200, Distribution::uniform(0.0, 1.0), 5);
  std::size_t shared = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const PairwiseReport r = pairwise_checks(m, 2 * t, 2 * t + 1, RegionSet{{10.0, 11.0}}, 1e-9);
    CHECK(r.applicable);
    CHECK(r.min_distance > 0.0);
    CHECK(r.open_set == OpenSetStatus::empty);
    shared += r.close_pairs;
  }
  CHECK(shared == 0);

  const PairwiseReport inside = pairwise_checks(m, 0, 1, RegionSet{{1.0, 2.0}}, 1e-9);
  CHECK(inside.open_set == OpenSetStatus::positive_length);
  CHECK(inside.intersection.length() > 0.5);

  const PairwiseReport same = pairwise_checks(m, 3, 3, RegionSet{{10.0, 11.0}}, 1e-9);
  CHECK(same.identical);
  CHECK(same.close_pairs >= 200);
  CHECK(same.note.find("identical") != std::string::npos);

  const PairwiseReport flat =
      pairwise_checks(chain(50, Distribution::constant(0.5)), 0, 1, RegionSet{{10.0, 11.0}}, 1e-9);
  CHECK_FALSE(flat.applicable);
}
