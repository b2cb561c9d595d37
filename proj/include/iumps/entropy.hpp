#pragma once

// Reduced-density spectra and von Neumann entropies (nats) of contiguous
// regions, computed on the <= d_M^2 dimensional support of rho_n, plus an
// explicit brute-force oracle for short regions.
//
// Physical basis convention: a string (s_1, ..., s_n) has index
// sum_k s_k d_s^(k-1), so the last site is the most significant digit, and
// rho_{s,s'} = tr(M^{s_n}...M^{s_1} sigma (M^{s'_n}...M^{s'_1})^dag).

#include <cstddef>
#include <vector>

#include "iumps/mps.hpp"

namespace iumps {

struct RegionSpec {
  std::size_t len_a = 1;
  std::size_t len_b = 1;
  std::size_t len_c = 1;
};

constexpr double kSupportThreshold = 1e-12;
constexpr std::size_t kBruteForceCap = 1024;

struct SupportProjection {
  ComplexMatrix w;                  ///< unitary eigenvector matrix of G~, columns descending
  std::vector<double> sigma_diag;   ///< eigenvalues of G~, descending
  std::size_t support_dim = 0;      ///< count above threshold * sigma_diag[0]
  double threshold = kSupportThreshold;
};

struct EntropyReport {
  std::size_t region_len = 0;
  std::vector<double> eigenvalues;  ///< descending, clipped at zero, length support_dim
  double entropy = 0.0;
  double clipped_weight = 0.0;      ///< total negative weight removed
};

/// G = E^n, G~_{(i,j),(i',j')} = G_{(j,j'),(i,i')}, G~ = W Sigma W^dag.
/// Throws NotHermitian if |G~ - G~^dag| > 1e-8 |G~|.
SupportProjection support_decomposition(const TransferMatrix& transfer, std::size_t n,
                                        double threshold = kSupportThreshold);

/// Sigma^{1/2} W^T (sigma (x) I) conj(W) Sigma^{1/2} on the retained columns;
/// its spectrum is the nonzero spectrum of rho_n.
ComplexMatrix projected_density(const SupportProjection& sp, const ComplexMatrix& sigma);

/// Explicit isometry P (d_s^n x support_dim) with P^dag rho_n P equal to the
/// projected density. Subject to the brute-force size cap.
ComplexMatrix support_isometry(const KrausSet& kraus, const SupportProjection& sp, std::size_t n);

/// -sum p ln p over the positive entries, with 0 ln 0 = 0.
double von_neumann_entropy(std::span<const double> spectrum);

/// Spectrum and entropy of a Hermitian density matrix, negative eigenvalues clipped.
EntropyReport density_entropy(const ComplexMatrix& rho);

EntropyReport region_entropy(const IuMps& mps, std::size_t n, double threshold = kSupportThreshold);

/// S(AB) + S(BC) - S(ABC) - S(B).
double qcmi(const IuMps& mps, const RegionSpec& region, double threshold = kSupportThreshold);

/// Density of A u C separated by len_b sites, index (c, a) with c most
/// significant. Dimension d_s^(len_a + len_c), subject to the brute-force cap.
ComplexMatrix two_region_density(const IuMps& mps, const RegionSpec& region);

/// Partial traces of a two-region density with the same index layout.
ComplexMatrix trace_out_c(const ComplexMatrix& rho_ac, std::size_t dim_a, std::size_t dim_c);
ComplexMatrix trace_out_a(const ComplexMatrix& rho_ac, std::size_t dim_a, std::size_t dim_c);

/// S(A) + S(C) - S(AC).
double qmi(const IuMps& mps, const RegionSpec& region, double threshold = kSupportThreshold);

/// Explicit d_s^n x d_s^n density; TooLarge if d_s^n exceeds kBruteForceCap.
ComplexMatrix brute_force_density(const IuMps& mps, std::size_t n);
double brute_force_entropy(const IuMps& mps, std::size_t n);

/// Spectrum of (E^n (x) id)(|sqrt sigma><sqrt sigma|), which matches rho_n's
/// nonzero spectrum by purification.
EntropyReport purification_entropy(const IuMps& mps, std::size_t n);

}  // namespace iumps
