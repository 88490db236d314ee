#include "krein/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "krein/error.hpp"
#include "krein/parallel.hpp"
#include "krein/rng.hpp"

namespace krein::linalg {

EigenSystem jacobi_eigen(SymmetricMatrix m, int max_sweeps) {
  const std::size_t n = m.n;
  std::vector<double> v(n * n, 0.0);  // row-major, column k is eigenvector k
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += m(p, q) * m(p, q);
    return std::sqrt(s);
  };
  double scale = 0.0;
  for (double x : m.a) scale = std::max(scale, std::abs(x));

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= 1e-300 + std::numeric_limits<double>::epsilon() * 1e-3 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double app = m(p, p), aqq = m(q, q);
        // skip rotations below rounding of both diagonal entries
        if (sweep > 3 && std::abs(apq) < std::numeric_limits<double>::epsilon() * 1e-2 * std::min(std::abs(app), std::abs(aqq)))
        {
          m(p, q) = m(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > 1e-12 * std::max(scale, 1.0))
    fail(ErrorKind::numeric, "Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });
  EigenSystem out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = m(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = v[i * n + order[k]];
  }
  return out;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

namespace {

std::pair<double, double> gershgorin(std::span<const double> diag, std::span<const double> off) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < diag.size()) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return {lo - pad, hi + pad};
}

// Bisection for eigenvalues first .. first + lanes - 1, interleaving the Sturm
// recurrences of all lanes in one sweep. Each lane performs exactly the steps
// of a scalar bisection with sturm_count.
constexpr std::size_t kLanes = 8;

void bisect_eigenvalues(std::span<const double> diag, std::span<const double> e2, std::size_t first,
                        std::size_t lanes, double lo0, double hi0, double* out) {
  double lo[kLanes], hi[kLanes], mid[kLanes], q[kLanes];
  std::size_t count[kLanes];
  bool active[kLanes];
  for (std::size_t l = 0; l < kLanes; ++l) {
    lo[l] = lo0;
    hi[l] = hi0;
    active[l] = l < lanes;
  }
  const std::size_t n = diag.size();
  for (int it = 0; it < 200; ++it) {
    bool any = false;
    for (std::size_t l = 0; l < kLanes; ++l) {
      if (active[l]) {
        mid[l] = 0.5 * (lo[l] + hi[l]);
        if (mid[l] <= lo[l] || mid[l] >= hi[l] ||
            hi[l] - lo[l] <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo[l]), std::abs(hi[l])))
          active[l] = false;
      }
      if (!active[l]) mid[l] = lo0;
      any = any || active[l];
      count[l] = 0;
    }
    if (!any) break;
    for (std::size_t l = 0; l < kLanes; ++l) {
      q[l] = diag[0] - mid[l];
      if (q[l] == 0.0) q[l] = -std::numeric_limits<double>::epsilon() * (std::abs(mid[l]) + 1.0);
      count[l] += q[l] < 0.0;
    }
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t l = 0; l < kLanes; ++l) {
        q[l] = diag[i] - mid[l] - e2[i - 1] / q[l];
        if (q[l] == 0.0) q[l] = -std::numeric_limits<double>::epsilon() * (std::abs(mid[l]) + 1.0);
        count[l] += q[l] < 0.0;
      }
    for (std::size_t l = 0; l < kLanes; ++l) {
      if (!active[l]) continue;
      if (count[l] > first + l)
        hi[l] = mid[l];
      else
        lo[l] = mid[l];
    }
  }
  for (std::size_t l = 0; l < lanes; ++l) out[l] = 0.5 * (lo[l] + hi[l]);
}

std::vector<double> squared(std::span<const double> off) {
  std::vector<double> e2(off.size());
  for (std::size_t i = 0; i < off.size(); ++i) e2[i] = off[i] * off[i];
  return e2;
}

void check_tridiagonal(std::span<const double> diag, std::span<const double> off) {
  if (diag.empty() || off.size() + 1 != diag.size())
    fail(ErrorKind::argument, "tridiagonal matrix needs n diagonal and n-1 off-diagonal entries");
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues_serial(std::span<const double> diag, std::span<const double> off) {
  check_tridiagonal(diag, off);
  const auto [lo, hi] = gershgorin(diag, off);
  const std::vector<double> e2 = squared(off);
  const std::size_t n = diag.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; k += kLanes) bisect_eigenvalues(diag, e2, k, std::min(kLanes, n - k), lo, hi, &out[k]);
  return out;
}

std::vector<double> tridiagonal_eigenvalues_parallel(std::span<const double> diag, std::span<const double> off) {
  check_tridiagonal(diag, off);
  const auto [lo, hi] = gershgorin(diag, off);
  const std::vector<double> e2 = squared(off);
  const std::size_t n = diag.size();
  std::vector<double> out(n);
  const auto batches = static_cast<long long>((n + kLanes - 1) / kLanes);
#pragma omp parallel for schedule(dynamic, 2) num_threads(parallel::thread_count())
  for (long long b = 0; b < batches; ++b) {
    const std::size_t k = static_cast<std::size_t>(b) * kLanes;
    bisect_eigenvalues(diag, e2, k, std::min(kLanes, n - k), lo, hi, &out[k]);
  }
  return out;
}

namespace {

// LU with partial pivoting of T - shift I; bands u0 (diagonal), u1, u2 above.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(std::span<const double> diag, std::span<const double> off, double shift, double scale)
      : n_(diag.size()), u0_(n_), u1_(n_, 0.0), u2_(n_, 0.0), mult_(n_, 0.0), swapped_(n_, false) {
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
    std::vector<double> sub(off.begin(), off.end());
    for (std::size_t i = 0; i < n_; ++i) u0_[i] = diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) u1_[i] = off[i];
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(sub[i]) > std::abs(u0_[i])) {
        swapped_[i] = true;
        const double r0 = u0_[i], r1 = u1_[i], r2 = u2_[i];
        u0_[i] = sub[i];
        u1_[i] = u0_[i + 1];
        u2_[i] = i + 2 < n_ ? u1_[i + 1] : 0.0;
        const double m = r0 / u0_[i];
        mult_[i] = m;
        u0_[i + 1] = r1 - m * u1_[i];
        if (i + 2 < n_) u1_[i + 1] = r2 - m * u2_[i];
      } else {
        if (u0_[i] == 0.0) u0_[i] = tiny;
        const double m = sub[i] / u0_[i];
        mult_[i] = m;
        u0_[i + 1] -= m * u1_[i];
      }
    }
    if (u0_[n_ - 1] == 0.0) u0_[n_ - 1] = tiny;
  }

  void solve(std::vector<double>& x) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swapped_[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= mult_[i] * x[i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      if (i + 1 < n_) s -= u1_[i] * x[i + 1];
      if (i + 2 < n_) s -= u2_[i] * x[i + 2];
      x[i] = s / u0_[i];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> u0_, u1_, u2_, mult_;
  std::vector<bool> swapped_;
};

double tridiagonal_scale(std::span<const double> diag, std::span<const double> off) {
  double scale = 0.0;
  for (double d : diag) scale = std::max(scale, std::abs(d));
  for (double e : off) scale = std::max(scale, std::abs(e));
  return scale;
}

void normalize(std::vector<double>& x) {
  double norm = 0.0;
  for (double v : x) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : x) v /= norm;
}

// inverse iteration for eigenvalue k, orthogonal to the vectors in cluster
std::vector<double> inverse_iteration(std::span<const double> diag, std::span<const double> off, double lambda,
                                      std::size_t k, double scale, const std::vector<std::vector<double>>& cluster) {
  const std::size_t n = diag.size();
  const ShiftedTridiagonalLU lu(diag, off, lambda, scale);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 0.5 + rng::uniform01(0x1f0b5eedULL, k, i);
  normalize(x);
  for (int iter = 0; iter < 4; ++iter) {
    lu.solve(x);
    for (const auto& q : cluster) {
      const double dot = std::inner_product(x.begin(), x.end(), q.begin(), 0.0);
      for (std::size_t i = 0; i < n; ++i) x[i] -= dot * q[i];
    }
    normalize(x);
  }
  return x;
}

}  // namespace

std::vector<double> tridiagonal_eigenvector(std::span<const double> diag, std::span<const double> off, double lambda) {
  check_tridiagonal(diag, off);
  return inverse_iteration(diag, off, lambda, 0, tridiagonal_scale(diag, off), {});
}

void tridiagonal_eigenvectors(std::span<const double> diag, std::span<const double> off,
                              std::span<const double> values,
                              const std::function<void(std::size_t, std::span<const double>)>& fn) {
  check_tridiagonal(diag, off);
  const double scale = tridiagonal_scale(diag, off);
  const double cluster_gap = kClusterGap * std::max(scale, 1.0);
  std::vector<std::vector<double>> cluster;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k == 0 || values[k] - values[k - 1] > cluster_gap) cluster.clear();
    std::vector<double> v = inverse_iteration(diag, off, values[k], k, scale, cluster);
    fn(k, v);
    cluster.push_back(std::move(v));
  }
}

}  // namespace krein::linalg
