#include "krein/anderson.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>

#include "krein/error.hpp"
#include "krein/parallel.hpp"
#include "krein/rng.hpp"

namespace krein {

namespace {

constexpr std::size_t kDenseLimit = 2000;
constexpr std::size_t kVolumeLimit = 40000;

}  // namespace

double Distribution::quantile(double u) const {
  switch (kind) {
    case Kind::uniform:
      return a + (b - a) * u;
    case Kind::bernoulli:
      return u < 1.0 - p ? a : b;
    case Kind::constant:
      return a;
  }
  return a;
}

double Distribution::mean() const {
  switch (kind) {
    case Kind::uniform:
      return 0.5 * (a + b);
    case Kind::bernoulli:
      return (1.0 - p) * a + p * b;
    case Kind::constant:
      return a;
  }
  return a;
}

double Distribution::variance() const {
  switch (kind) {
    case Kind::uniform:
      return (b - a) * (b - a) / 12.0;
    case Kind::bernoulli:
      return p * (1.0 - p) * (b - a) * (b - a);
    case Kind::constant:
      return 0.0;
  }
  return 0.0;
}

bool Distribution::is_constant() const { return variance() == 0.0; }

std::string to_string(Distribution::Kind kind) {
  switch (kind) {
    case Distribution::Kind::uniform:
      return "uniform";
    case Distribution::Kind::bernoulli:
      return "bernoulli";
    case Distribution::Kind::constant:
      return "constant";
  }
  return "unknown";
}

std::string to_string(Boundary boundary) { return boundary == Boundary::dirichlet ? "dirichlet" : "periodic"; }

std::string to_string(OpenSetStatus status) {
  switch (status) {
    case OpenSetStatus::empty:
      return "empty";
    case OpenSetStatus::positive_length:
      return "positive length";
    case OpenSetStatus::violation:
      return "violation";
  }
  return "unknown";
}

std::size_t AndersonModel::volume() const {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(L);
  return n;
}

void AndersonModel::validate() const {
  if (dim != 1 && dim != 2) fail(ErrorKind::argument, "dimension must be 1 or 2");
  if (L < 1) fail(ErrorKind::argument, "side length must be positive");
  if (volume() > kVolumeLimit) fail(ErrorKind::resource, "box volume exceeds 40000 sites");
  const auto& d = distribution;
  if (!std::isfinite(d.a) || !std::isfinite(d.b)) fail(ErrorKind::argument, "distribution parameters must be finite");
  if (d.kind == Distribution::Kind::uniform && d.b < d.a) fail(ErrorKind::argument, "uniform(a, b) needs a <= b");
  if (d.kind == Distribution::Kind::bernoulli && !(d.p >= 0.0 && d.p <= 1.0))
    fail(ErrorKind::argument, "bernoulli probability must lie in [0, 1]");
  for (std::size_t s : sites)
    if (s >= volume()) fail(ErrorKind::argument, "reference site outside the box");
  for (const auto& e : edits) {
    if (e.site >= volume()) fail(ErrorKind::argument, "edited site outside the box");
    if (!std::isfinite(e.value)) fail(ErrorKind::argument, "edited value must be finite");
  }
}

OmegaRealization sample_omega(const AndersonModel& model, std::uint64_t index) {
  model.validate();
  OmegaRealization out;
  out.index = index;
  const std::size_t n = model.volume();
  out.values.resize(n);
  for (std::size_t s = 0; s < n; ++s)
    out.values[s] = model.distribution.quantile(rng::uniform01(model.master_seed, index, s));
  for (const auto& e : model.edits) out.values[e.site] = e.value;
  return out;
}

linalg::SymmetricMatrix Hamiltonian::dense() const {
  linalg::SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
  for (const auto& b : bonds) {
    m(b.i, b.j) += b.value;
    m(b.j, b.i) += b.value;
  }
  return m;
}

std::vector<double> Hamiltonian::off_diagonal() const {
  if (!tridiagonal) fail(ErrorKind::argument, "Hamiltonian is not tridiagonal");
  std::vector<double> off(n > 0 ? n - 1 : 0, 0.0);
  for (const auto& b : bonds) off[b.i] = b.value;
  return off;
}

Hamiltonian build_hamiltonian(const AndersonModel& model, const OmegaRealization& omega) {
  model.validate();
  const std::size_t n = model.volume();
  if (omega.values.size() != n) fail(ErrorKind::argument, "realization does not match the model geometry");
  Hamiltonian h;
  h.n = n;
  h.diag.resize(n);
  for (std::size_t s = 0; s < n; ++s) h.diag[s] = 2.0 * model.dim + omega.values[s];

  const std::size_t L = static_cast<std::size_t>(model.L);
  std::map<std::pair<std::size_t, std::size_t>, double> bonds;
  for (std::size_t s = 0; s < n; ++s) {
    for (int d = 0; d < model.dim; ++d) {
      const std::size_t stride = d == 0 ? 1 : L;
      const std::size_t c = (s / stride) % L;
      std::size_t t;
      if (c + 1 < L) {
        t = s + stride;
      } else if (model.boundary == Boundary::periodic) {
        t = s - c * stride;
      } else {
        continue;
      }
      if (t == s) {
        // a side of one wraps onto itself in both directions
        h.diag[s] -= 2.0;
        continue;
      }
      bonds[{std::min(s, t), std::max(s, t)}] -= 1.0;
    }
  }
  h.tridiagonal = true;
  for (const auto& [ij, v] : bonds) {
    h.bonds.push_back({ij.first, ij.second, v});
    if (ij.second != ij.first + 1) h.tridiagonal = false;
  }
  return h;
}

namespace {

// Eigenvalues ascending and, when sites is nonempty, the squared components
// of each eigenvector at those sites (row k holds eigenvector k).
struct Decomposition {
  std::vector<double> values;
  std::vector<double> components;  // values.size() x sites.size()
};

Decomposition diagonalize(const Hamiltonian& h, std::span<const std::size_t> sites) {
  const std::size_t n = h.n;
  const bool vectors = !sites.empty();
  Decomposition out;
  const auto options = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;

  auto take = [&](const auto& values, const auto& vecs) {
    out.values.assign(values.data(), values.data() + n);
    if (!vectors) return;
    out.components.resize(n * sites.size());
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < sites.size(); ++j) {
        const double c = vecs(static_cast<Eigen::Index>(sites[j]), static_cast<Eigen::Index>(k));
        out.components[k * sites.size() + j] = c * c;
      }
  };

  if (n <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (h.tridiagonal) {
      const std::vector<double> off = h.off_diagonal();
      const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(h.diag.data(), static_cast<Eigen::Index>(n));
      const Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(off.data(), static_cast<Eigen::Index>(off.size()));
      es.computeFromTridiagonal(d, e, options);
    } else {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) m(i, i) = h.diag[i];
      for (const auto& b : h.bonds) {
        m(b.i, b.j) += b.value;
        m(b.j, b.i) += b.value;
      }
      es.compute(m, options);
    }
    if (es.info() != Eigen::Success)
      fail(ErrorKind::numeric, "dense symmetric eigensolver did not converge (n = " + std::to_string(n) + ")");
    if (vectors)
      take(es.eigenvalues(), es.eigenvectors());
    else
      take(es.eigenvalues(), Eigen::MatrixXd());
    return out;
  }

  if (!h.tridiagonal)
    fail(ErrorKind::resource, "dense eigensolve limited to 2000 sites; only 1D Dirichlet boxes go beyond");
  const std::vector<double> off = h.off_diagonal();
  out.values = linalg::tridiagonal_eigenvalues_serial(h.diag, off);
  if (vectors) {
    out.components.resize(n * sites.size());
    linalg::tridiagonal_eigenvectors(h.diag, off, out.values, [&](std::size_t k, std::span<const double> v) {
      for (std::size_t j = 0; j < sites.size(); ++j) out.components[k * sites.size() + j] = v[sites[j]] * v[sites[j]];
    });
  }
  return out;
}

SampleSpectrum spectrum_of(const AndersonModel& model, std::uint64_t index) {
  const OmegaRealization omega = sample_omega(model, index);
  const Hamiltonian h = build_hamiltonian(model, omega);
  const Decomposition dec = diagonalize(h, model.sites);
  SampleSpectrum s;
  s.omega_index = index;
  s.eigenvalues = dec.values;
  const std::size_t n = dec.values.size();
  if (model.sites.empty()) {
    s.weights.assign(n, 1.0 / static_cast<double>(n));
  } else {
    const std::size_t m = model.sites.size();
    s.weights.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      double w = 0.0;
      for (std::size_t j = 0; j < m; ++j) w += dec.components[k * m + j];
      s.weights[k] = w / static_cast<double>(m);
    }
  }
  return s;
}

}  // namespace

SpectralSample spectral_measure_at_site(const AndersonModel& model, const OmegaRealization& omega, std::size_t site) {
  const Hamiltonian h = build_hamiltonian(model, omega);
  if (site >= h.n) fail(ErrorKind::argument, "site outside the box");
  const std::size_t sites[] = {site};
  const Decomposition dec = diagonalize(h, sites);
  SpectralSample out;
  out.omega_index = omega.index;
  out.site = site;
  out.eigenvalues = dec.values;
  out.weights = dec.components;
  return out;
}

namespace kernels {

std::vector<SampleSpectrum> sample_spectra_serial(const AndersonModel& model, std::uint64_t first, std::size_t count) {
  model.validate();
  std::vector<SampleSpectrum> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = spectrum_of(model, first + i);
  return out;
}

std::vector<SampleSpectrum> sample_spectra_parallel(const AndersonModel& model, std::uint64_t first,
                                                    std::size_t count) {
  model.validate();
  std::vector<SampleSpectrum> out(count);
  std::exception_ptr error;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(parallel::thread_count())
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = spectrum_of(model, first + static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(krein_sample_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace kernels

RegionSet sigma_ess_from_spectra(std::span<const SampleSpectrum> spectra, double resolution, double occupancy,
                                 std::size_t* outliers) {
  if (!(resolution > 0.0)) fail(ErrorKind::argument, "resolution must be positive");
  const double m = static_cast<double>(spectra.size());
  std::map<long long, std::size_t> occupied;  // samples with an eigenvalue in the cell
  std::map<long long, std::size_t> counts;    // eigenvalues in the cell over all samples
  for (const auto& s : spectra) {
    long long last = 0;
    bool have_last = false;
    for (double lambda : s.eigenvalues) {
      const auto k = static_cast<long long>(std::floor(lambda / resolution));
      ++counts[k];
      if (!have_last || k != last) ++occupied[k];
      last = k;
      have_last = true;
    }
  }
  std::vector<long long> cells;
  for (const auto& [k, c] : occupied)
    if (static_cast<double>(c) >= occupancy * m - 1e-9) cells.push_back(k);

  // clusters separated by at least three unselected cells
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!clusters.empty() && cells[i] - cells[clusters.back().second] < 4)
      clusters.back().second = i;
    else
      clusters.push_back({i, i});
  }
  std::vector<double> mass(clusters.size(), 0.0);
  std::size_t bulk = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t i = clusters[c].first; i <= clusters[c].second; ++i) mass[c] += static_cast<double>(counts[cells[i]]);
    if (mass[c] > mass[bulk]) bulk = c;
  }
  std::vector<long long> kept;
  std::size_t removed = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const bool isolated = c != bulk && mass[c] / m <= 3.0;
    for (std::size_t i = clusters[c].first; i <= clusters[c].second; ++i) {
      if (isolated)
        ++removed;
      else
        kept.push_back(cells[i]);
    }
  }
  if (outliers) *outliers = removed;
  return region_from_cells(kept, resolution);
}

RegionSet ac_support_from_spectra(std::span<const SampleSpectrum> spectra, double resolution, double eps,
                                  double theta) {
  if (!(resolution > 0.0) || !(eps > 0.0)) fail(ErrorKind::argument, "resolution and smoothing width must be positive");
  if (spectra.empty()) return {};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : spectra) {
    if (s.eigenvalues.empty()) continue;
    lo = std::min(lo, s.eigenvalues.front());
    hi = std::max(hi, s.eigenvalues.back());
  }
  if (!(lo <= hi)) return {};
  const auto k0 = static_cast<long long>(std::floor((lo - 5.0 * eps) / resolution));
  const auto k1 = static_cast<long long>(std::floor((hi + 5.0 * eps) / resolution));
  const double m = static_cast<double>(spectra.size());
  std::vector<long long> cells;
  for (long long k = k0; k <= k1; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * resolution;
    double rho = 0.0;
    for (const auto& s : spectra)
      for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
        const double d = x - s.eigenvalues[j];
        rho += s.weights[j] * eps / (std::numbers::pi * (d * d + eps * eps));
      }
    if (rho / m > theta) cells.push_back(k);
  }
  return region_from_cells(cells, resolution);
}

DeterministicReport estimate_deterministic_sets(const AndersonModel& model, std::size_t n_samples,
                                                const EstimateOptions& options) {
  model.validate();
  if (n_samples < 2) fail(ErrorKind::argument, "at least two samples are needed");
  const std::vector<SampleSpectrum> spectra = kernels::sample_spectra_parallel(model, options.first_index, n_samples);
  return estimate_from_spectra(model, spectra, options);
}

DeterministicReport estimate_from_spectra(const AndersonModel& model, std::span<const SampleSpectrum> spectra,
                                          const EstimateOptions& options) {
  model.validate();
  const std::size_t n_samples = spectra.size();
  if (n_samples < 2) fail(ErrorKind::argument, "at least two samples are needed");
  if (!(options.resolution > 0.0)) fail(ErrorKind::argument, "resolution must be positive");
  if (!(options.occupancy > 0.0 && options.occupancy <= 1.0)) fail(ErrorKind::argument, "occupancy must lie in (0, 1]");

  DeterministicReport r;
  r.n_samples = n_samples;
  r.resolution = options.resolution;
  r.theta_ac = options.theta_ac;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  r.max_eigenvalue = -r.min_eigenvalue;
  double width = 0.0;
  for (const auto& s : spectra) {
    r.min_eigenvalue = std::min(r.min_eigenvalue, s.eigenvalues.front());
    r.max_eigenvalue = std::max(r.max_eigenvalue, s.eigenvalues.back());
    width += s.eigenvalues.back() - s.eigenvalues.front();
  }
  width /= static_cast<double>(n_samples);
  r.eps_smooth = options.eps_smooth > 0.0 ? options.eps_smooth : 4.0 * width / model.L;
  if (!(r.eps_smooth > 0.0)) r.eps_smooth = options.resolution;

  const std::size_t half = n_samples / 2;
  const std::span<const SampleSpectrum> all = spectra;
  const auto first = all.first(half);
  const auto second = all.subspan(half);
  r.sigma_ess_estimate = sigma_ess_from_spectra(all, options.resolution, options.occupancy, &r.outlier_cells);
  r.sigma_ess_first = sigma_ess_from_spectra(first, options.resolution, options.occupancy);
  r.sigma_ess_second = sigma_ess_from_spectra(second, options.resolution, options.occupancy);
  r.ac_first = ac_support_from_spectra(first, options.resolution, r.eps_smooth, options.theta_ac);
  r.ac_second = ac_support_from_spectra(second, options.resolution, r.eps_smooth, options.theta_ac);
  r.ac_support_estimate = r.ac_first.intersect(r.ac_second);
  r.batch_variation = {hausdorff(r.sigma_ess_first, r.sigma_ess_second), hausdorff(r.ac_first, r.ac_second)};
  r.notes.push_back("finite-volume estimates; cyclicity of the essential part is not verified");
  if (model.sites.empty()) r.notes.push_back("weights: normalized density of states over all sites");
  return r;
}

PairwiseReport pairwise_checks(const AndersonModel& model, std::uint64_t omega_index, std::uint64_t eta_index,
                               const RegionSet& region, double tol, double resolution) {
  model.validate();
  if (!(tol > 0.0)) fail(ErrorKind::argument, "tolerance must be positive");
  PairwiseReport r;
  const SampleSpectrum a = spectrum_of(model, omega_index);
  const SampleSpectrum b = omega_index == eta_index ? a : spectrum_of(model, eta_index);

  if (omega_index == eta_index) {
    r.identical = true;
    r.note = "identical realization";
  } else if (model.distribution.is_constant()) {
    r.applicable = false;
    r.note = "not applicable: constant disorder violates the continuity hypothesis";
  }

  // merge the sorted lists for the minimum gap; count pairs within tol
  const auto& x = a.eigenvalues;
  const auto& y = b.eigenvalues;
  r.min_distance = std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  for (double v : x) {
    while (j < y.size() && y[j] < v) ++j;
    if (j < y.size()) r.min_distance = std::min(r.min_distance, y[j] - v);
    if (j > 0) r.min_distance = std::min(r.min_distance, v - y[j - 1]);
  }
  std::size_t lo = 0;
  for (double v : x) {
    while (lo < y.size() && y[lo] <= v - tol) ++lo;
    for (std::size_t k = lo; k < y.size() && y[k] < v + tol; ++k) ++r.close_pairs;
  }
  r.close_fraction = x.empty() ? 0.0 : static_cast<double>(r.close_pairs) / static_cast<double>(x.size());

  const SampleSpectrum pair[] = {a, b};
  r.sigma_ess_estimate = sigma_ess_from_spectra(pair, resolution, 0.9);
  r.intersection = region.intersect(r.sigma_ess_estimate);
  if (r.intersection.empty()) {
    r.open_set = OpenSetStatus::empty;
  } else {
    const bool degenerate = std::any_of(r.intersection.intervals().begin(), r.intersection.intervals().end(),
                                        [](const Interval& iv) { return !(iv.length() > 0.0); });
    r.open_set = degenerate || !(r.intersection.length() > 0.0) ? OpenSetStatus::violation
                                                                 : OpenSetStatus::positive_length;
  }
  return r;
}

}  // namespace krein
