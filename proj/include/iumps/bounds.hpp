#pragma once

// Prefactor and rate of the exponential QCMI bound Q exp(-q(|B| - K) + 2K ln|B|)
// for the diagonalizable case (K = 0), a sufficient separation |B| for the
// bound to apply, and the entropy error estimate of the eigenvalue solver.

#include <cstddef>
#include <optional>

#include "iumps/mps.hpp"

namespace iumps {

struct BoundConstants {
  std::size_t k_jordan = 0;
  std::size_t d_m = 0;
  double nu_gap = 0.0;
  double sigma_min = 0.0;
  double cond_s = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  std::optional<double> c3;
  double big_q = 0.0;
  double rate_q = 0.0;
  std::size_t d_cap = 0;
  /// Smallest distance between distinct eigenvalues; absent when D = 1.
  std::optional<double> delta_spec;
};

/// K = 0 constants from the eigenvector matrix S of E. Eigenvalue clusters
/// (spread <= 1e-8) must be semisimple: each cluster's eigenvectors are
/// replaced by an orthonormal basis of the null space of E - nu I, and a
/// cluster whose null space is too small raises NearDegenerate.
BoundConstants jordan_constants(const IuMps& mps);

/// Q exp(-q (b_len - K) + 2 K ln b_len).
double theorem1_bound(const BoundConstants& constants, std::size_t b_len);

/// Least even |B| with nu_gap^|B| <= sigma_min^(5/2) / (6 sqrt2 c2 d_M^(3/2))
/// * min{1, (243/4) sigma_min^2} and |B| >= 2 ln d_M / ln d_s.
/// Unsupported if K > 0; NonConvergence if no |B| <= 10^6 qualifies.
std::size_t sufficient_b(const BoundConstants& constants, std::size_t d_s);

/// d_M^2 delta_lambda ln(1 / lambda_min).
double qcmi_error_estimate(std::size_t d_M, double lambda_min, double delta_lambda);

}  // namespace iumps
