#pragma once

#include <string>
#include <vector>

#include "krein/measure.hpp"

namespace krein {

/// A_alpha = A + alpha (., phi) phi with mu the spectral measure of A with
/// respect to the unit cyclic vector phi.
struct RankOneFamily {
  Measure base;
  double alpha = 0.0;
};

/// Aronszajn-Krein: K mu_alpha = K mu / (1 + pi alpha K mu).
cplx perturbed_transform(const RankOneFamily& family, cplx z);

/// Matrix oracle: spectral measure of diag(t) + alpha w w^T with respect to
/// w, w_i = sqrt(m_i), from a dense Jacobi eigensolve.
Measure perturb_discrete(const RankOneFamily& family);

/// Roots of 1 + pi alpha K mu(x) = 0 by bisection, one per gap between
/// consecutive atoms plus one in the unbounded gap on the side of alpha.
std::vector<double> secular_roots(const RankOneFamily& family);

struct AronszajnDonoghueReport {
  bool applicable = true;
  std::string note;
  /// Minimum distance between the atom sets of mu_alpha and mu_beta.
  double min_atom_distance = 0.0;
  bool atoms_disjoint = false;
  /// max over atoms x of mu_alpha of |K mu(x) + 1/(pi alpha)|.
  double max_secular_deviation = 0.0;
  bool secular_condition = false;
  std::vector<double> atoms_alpha;
  std::vector<double> atoms_beta;
};

AronszajnDonoghueReport verify_aronszajn_donoghue(const Measure& base, double alpha, double beta, double tol);

}  // namespace krein
