#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "krein/linalg.hpp"
#include "krein/region_set.hpp"

namespace krein {

enum class Boundary { dirichlet, periodic };

/// Single-site distribution of the i.i.d. potential.
struct Distribution {
  enum class Kind { uniform, bernoulli, constant };
  Kind kind = Kind::uniform;
  /// uniform(a, b); bernoulli: value b with probability p, a otherwise;
  /// constant: a.
  double a = 0.0;
  double b = 1.0;
  double p = 0.5;

  static Distribution uniform(double a, double b) { return {Kind::uniform, a, b, 0.5}; }
  static Distribution bernoulli(double a, double b, double p) { return {Kind::bernoulli, a, b, p}; }
  static Distribution constant(double c) { return {Kind::constant, c, c, 0.5}; }

  /// Inverse CDF at u in [0, 1).
  double quantile(double u) const;
  double mean() const;
  double variance() const;
  bool is_constant() const;
  bool operator==(const Distribution&) const = default;
};

std::string to_string(Distribution::Kind kind);
std::string to_string(Boundary boundary);

/// Deterministic override of the potential at one site.
struct SiteEdit {
  std::size_t site = 0;
  double value = 0.0;
  bool operator==(const SiteEdit&) const = default;
};

struct AndersonModel {
  int dim = 1;
  int L = 1;
  Boundary boundary = Boundary::dirichlet;
  Distribution distribution;
  std::uint64_t master_seed = 0;
  /// Reference sites for spectral measures; empty means every site with
  /// equal weight (the normalized density of states).
  std::vector<std::size_t> sites;
  std::vector<SiteEdit> edits;

  std::size_t volume() const;
  void validate() const;
  bool operator==(const AndersonModel&) const = default;
};

struct OmegaRealization {
  std::uint64_t index = 0;
  std::vector<double> values;
};

/// values[site] = quantile(uniform01(master_seed, index, site)), then edits.
OmegaRealization sample_omega(const AndersonModel& model, std::uint64_t index);

/// Symmetric matrix: diagonal 2 dim + omega, -1 per nearest-neighbour bond
/// (accumulated when periodic wrapping repeats a neighbour).
struct Hamiltonian {
  struct Bond {
    std::size_t i;
    std::size_t j;
    double value;
  };
  std::size_t n = 0;
  std::vector<double> diag;
  /// i < j, sorted.
  std::vector<Bond> bonds;
  /// Set when the only bonds are (i, i + 1).
  bool tridiagonal = false;

  linalg::SymmetricMatrix dense() const;
  /// Off-diagonal of a tridiagonal Hamiltonian.
  std::vector<double> off_diagonal() const;
};

Hamiltonian build_hamiltonian(const AndersonModel& model, const OmegaRealization& omega);

struct SpectralSample {
  std::uint64_t omega_index = 0;
  std::size_t site = 0;
  std::vector<double> eigenvalues;
  std::vector<double> weights;
};

/// Full eigendecomposition; weights are squared site components.
SpectralSample spectral_measure_at_site(const AndersonModel& model, const OmegaRealization& omega, std::size_t site);

/// Eigenvalues of one realization with weights averaged over the model's
/// reference sites (1/n each when there are none).
struct SampleSpectrum {
  std::uint64_t omega_index = 0;
  std::vector<double> eigenvalues;
  std::vector<double> weights;
};

struct EstimateOptions {
  double resolution = 0.05;
  /// Poisson smoothing width; <= 0 selects 4 * (spectral width) / L.
  double eps_smooth = 0.0;
  /// Smoothed density threshold for the a.c. support.
  double theta_ac = 0.1;
  /// Fraction of samples a cell must be occupied in.
  double occupancy = 0.9;
  std::uint64_t first_index = 0;
};

struct DeterministicReport {
  RegionSet sigma_ess_estimate;
  RegionSet ac_support_estimate;
  /// Per-half estimates: samples [0, n/2) and [n/2, n).
  RegionSet sigma_ess_first;
  RegionSet sigma_ess_second;
  RegionSet ac_first;
  RegionSet ac_second;
  /// Hausdorff distances between the halves: sigma_ess, then a.c. support.
  std::vector<double> batch_variation;
  std::size_t outlier_cells = 0;
  std::size_t n_samples = 0;
  double resolution = 0.0;
  double eps_smooth = 0.0;
  double theta_ac = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::vector<std::string> notes;
};

DeterministicReport estimate_deterministic_sets(const AndersonModel& model, std::size_t n_samples,
                                                const EstimateOptions& options = {});

/// Same report from spectra already sampled (in index order).
DeterministicReport estimate_from_spectra(const AndersonModel& model, std::span<const SampleSpectrum> spectra,
                                          const EstimateOptions& options = {});

/// Occupancy estimate of the essential spectrum from a batch of spectra.
/// outliers receives the number of cells removed as isolated point spectrum.
RegionSet sigma_ess_from_spectra(std::span<const SampleSpectrum> spectra, double resolution, double occupancy,
                                 std::size_t* outliers = nullptr);

/// Cells where the averaged Poisson-smoothed density exceeds theta.
RegionSet ac_support_from_spectra(std::span<const SampleSpectrum> spectra, double resolution, double eps,
                                  double theta);

enum class OpenSetStatus { empty, positive_length, violation };
std::string to_string(OpenSetStatus status);

struct PairwiseReport {
  bool applicable = true;
  bool identical = false;
  std::string note;
  double min_distance = 0.0;
  std::size_t close_pairs = 0;
  /// close_pairs / number of eigenvalues.
  double close_fraction = 0.0;
  RegionSet sigma_ess_estimate;
  RegionSet intersection;
  OpenSetStatus open_set = OpenSetStatus::empty;
};

PairwiseReport pairwise_checks(const AndersonModel& model, std::uint64_t omega_index, std::uint64_t eta_index,
                               const RegionSet& region, double tol, double resolution = 0.05);

namespace kernels {
/// Per-realization diagonalization for indices first .. first + count - 1.
/// Both variants produce identical bits.
std::vector<SampleSpectrum> sample_spectra_serial(const AndersonModel& model, std::uint64_t first, std::size_t count);
std::vector<SampleSpectrum> sample_spectra_parallel(const AndersonModel& model, std::uint64_t first,
                                                    std::size_t count);
}  // namespace kernels

}  // namespace krein
