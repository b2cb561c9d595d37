#pragma once

// Infinite uniform MPS: Kraus sets, the transfer matrix E = sum_s M^s (x) conj(M^s),
// its spectrum and the channel fixed point.
//
// vec convention: vec(X)_{i*d_M + j} = X_ij, so vec(A X B^dag) = (A (x) conj(B)) vec(X)
// and vec(I) is a left fixed point of E for a canonical Kraus set.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iumps/numerics.hpp"

namespace iumps {

enum class CaseTag { Case1, Case2, Case3, Explicit };

std::string_view to_string(CaseTag tag);
/// Accepts "Case1".."Case3", "Explicit", and the short forms "1".."3".
CaseTag case_tag_from_string(std::string_view text);

struct KrausSet {
  std::size_t d_s = 0;
  std::size_t d_M = 0;
  std::vector<ComplexMatrix> matrices;
  CaseTag case_tag = CaseTag::Explicit;
};

constexpr double kCanonicalTolerance = 1e-10;
constexpr double kPeripheralTolerance = 1e-8;
/// Eigenvalues within this distance count as one (multiplicities, clusters).
constexpr double kDegeneracyTolerance = 1e-8;

/// max-norm of sum_s M^{s dag} M^s - I.
double canonical_error(const KrausSet& kraus);
/// Shape checks plus canonical form; throws InvalidArgument or NotCanonical.
void validate(const KrausSet& kraus, double tolerance = kCanonicalTolerance);

/// Case 1: M^s_ij = sum_{s',j'} U^{ss'}_{ij'} Psi^{s'}_{j'j} with U Haar on
/// d_s*d_M and Psi = (1/sqrt(d_s)) (1,...,1)^T (x) I.
KrausSet build_case1(std::size_t d_s, std::size_t d_M, RandomStream& stream);
/// Case 2: diag(M_1^s, M_2^s) from two independent Case-1 blocks of size d_M/2.
KrausSet build_case2(std::size_t d_s, std::size_t d_M, RandomStream& stream);
/// Case 3: [[0, M_1^s], [M_2^s, 0]] from two independent Case-1 blocks.
KrausSet build_case3(std::size_t d_s, std::size_t d_M, RandomStream& stream);
/// Dispatches on tag; Explicit is rejected.
KrausSet build_case(CaseTag tag, std::size_t d_s, std::size_t d_M, RandomStream& stream);

/// Fixed Case-2 instance with d_s = 3, d_M = 4 whose mutual information
/// converges to a closed form (see experiments::benchmark_appendix_a).
KrausSet appendix_a_kraus();

/// E(X) = sum_s M^s X M^{s dag}.
ComplexMatrix apply_channel(const KrausSet& kraus, const ComplexMatrix& x);
/// Row-major vec / devec.
std::vector<Complex> vec(const ComplexMatrix& x);
ComplexMatrix devec(std::span<const Complex> v, std::size_t dim);

struct TransferMatrix {
  ComplexMatrix e;
  EigenDecomposition spectrum;
  std::vector<std::size_t> peripheral_indices;
  /// Largest non-peripheral magnitude; empty when every eigenvalue is peripheral.
  std::optional<double> nu_gap;
  double peripheral_tol = kPeripheralTolerance;
};

TransferMatrix transfer_matrix(const KrausSet& kraus, double peripheral_tol = kPeripheralTolerance);

/// Throws DegenerateSpectrum if every eigenvalue is peripheral.
double spectral_gap(const TransferMatrix& transfer);

/// Number of eigenvalues with |nu - target| <= kDegeneracyTolerance.
std::size_t multiplicity(const TransferMatrix& transfer, Complex target);

/// Trace-one PSD fixed point: the spectral projector onto the eigenvalue-1
/// eigenspace applied to I/d_M, Hermitized, clipped at zero and renormalized.
/// Throws NoFixedPoint / NotPositive.
ComplexMatrix fixed_point(const TransferMatrix& transfer);

struct IuMps {
  KrausSet kraus;
  ComplexMatrix sigma;
  TransferMatrix transfer;
};

/// Validates the Kraus set, builds E and sigma, and checks channel invariance
/// of sigma to 1e-9 (NotPositive otherwise).
IuMps make_iumps(KrausSet kraus, double peripheral_tol = kPeripheralTolerance);

/// JSON {d_s, d_M, case_tag, matrices: [[[re, im], ...], ...]}, entries row-major.
std::string kraus_to_json(const KrausSet& kraus);
KrausSet kraus_from_json(std::string_view text);

}  // namespace iumps
