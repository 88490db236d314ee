#include <benchmark/benchmark.h>

#include <vector>

#include "krein/anderson.hpp"
#include "krein/cauchy.hpp"
#include "krein/linalg.hpp"
#include "krein/spectral_shift.hpp"

namespace {

std::vector<krein::cplx> line(std::size_t n) {
  std::vector<krein::cplx> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = {-1.0 + 3.0 * static_cast<double>(i) / static_cast<double>(n), 1e-3};
  return z;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

krein::AndersonModel chain(int L) {
  krein::AndersonModel m;
  m.dim = 1;
  m.L = L;
  m.distribution = krein::Distribution::uniform(0.0, 1.0);
  m.master_seed = 7;
  m.sites = {static_cast<std::size_t>(L / 2)};
  return m;
}

template <bool Parallel>
void BM_CauchyMany(benchmark::State& state) {
  const krein::Measure mu = krein::sum(krein::uniform_measure(0.0, 1.0), krein::cantor_measure(8));
  const auto z = line(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = Parallel ? krein::kernels::cauchy_many_parallel(mu, z, krein::Kernel::K)
                      : krein::kernels::cauchy_many_serial(mu, z, krein::Kernel::K);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void BM_ShiftPoints(benchmark::State& state) {
  const krein::RankOneFamily fam{krein::uniform_measure(0.0, 1.0), 1.0};
  const auto schedule = krein::default_schedule();
  const krein::kernels::ShiftContext ctx{&fam, nullptr, schedule, 1e-12};
  const auto xs = grid(-0.5, 2.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = Parallel ? krein::kernels::shift_points_parallel(ctx, xs) : krein::kernels::shift_points_serial(ctx, xs);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void BM_Tridiagonal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto omega = krein::sample_omega(chain(static_cast<int>(n)), 0);
  std::vector<double> diag(n), off(n - 1, -1.0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 + omega.values[i];
  for (auto _ : state) {
    auto v = Parallel ? krein::linalg::tridiagonal_eigenvalues_parallel(diag, off)
                      : krein::linalg::tridiagonal_eigenvalues_serial(diag, off);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void BM_SampleSpectra(benchmark::State& state) {
  const auto model = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto v = Parallel ? krein::kernels::sample_spectra_parallel(model, 0, 16)
                      : krein::kernels::sample_spectra_serial(model, 0, 16);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK(BM_CauchyMany<false>)->Arg(4096);
BENCHMARK(BM_CauchyMany<true>)->Arg(4096);
BENCHMARK(BM_ShiftPoints<false>)->Arg(256);
BENCHMARK(BM_ShiftPoints<true>)->Arg(256);
BENCHMARK(BM_Tridiagonal<false>)->Arg(1000);
BENCHMARK(BM_Tridiagonal<true>)->Arg(1000);
BENCHMARK(BM_SampleSpectra<false>)->Arg(200);
BENCHMARK(BM_SampleSpectra<true>)->Arg(200);

BENCHMARK_MAIN();
