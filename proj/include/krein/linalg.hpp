#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace krein::linalg {

/// Dense symmetric matrix, row-major.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit SymmetricMatrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Eigenvalues ascending; eigenvector k stored contiguously at [k*n, (k+1)*n).
struct EigenSystem {
  std::vector<double> values;
  std::vector<double> vectors;
  std::size_t n = 0;
  std::span<const double> vector(std::size_t k) const { return {vectors.data() + k * n, n}; }
};

/// Cyclic Jacobi rotations, fixed (p, q) sweep order.
EigenSystem jacobi_eigen(SymmetricMatrix m, int max_sweeps = 100);

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x);

/// All eigenvalues by Sturm-sequence bisection, one independent bisection per
/// index. Both variants produce identical bits.
std::vector<double> tridiagonal_eigenvalues_serial(std::span<const double> diag, std::span<const double> off);
std::vector<double> tridiagonal_eigenvalues_parallel(std::span<const double> diag, std::span<const double> off);

/// Unit eigenvector for an (accurate) eigenvalue by inverse iteration.
std::vector<double> tridiagonal_eigenvector(std::span<const double> diag, std::span<const double> off, double lambda);

/// Eigenvalues closer than this (relative to the largest entry) are treated
/// as one cluster by tridiagonal_eigenvectors.
inline constexpr double kClusterGap = 1e-7;

/// Unit eigenvectors for ascending eigenvalues, one at a time: fn(k, v) is
/// called in order. Vectors within a cluster are reorthogonalized.
void tridiagonal_eigenvectors(std::span<const double> diag, std::span<const double> off,
                              std::span<const double> values,
                              const std::function<void(std::size_t, std::span<const double>)>& fn);

}  // namespace krein::linalg
