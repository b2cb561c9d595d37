#include <algorithm>
#include <cmath>
#include <string>

#include "iumps/error.hpp"
#include "iumps/mps.hpp"

namespace iumps {

namespace {

constexpr double kClipLimit = 1e-6;
constexpr double kInvarianceTolerance = 1e-9;

// Orthonormal basis (columns) of the m-dimensional approximate null space of a.
ComplexMatrix null_space(const ComplexMatrix& a, std::size_t m) {
  const auto dec = eig_hermitian(hermitize(a.adjoint() * a));
  return dec.vectors.column_block(a.cols() - m, m);
}

}  // namespace

TransferMatrix transfer_matrix(const KrausSet& kraus, double peripheral_tol) {
  if (!(peripheral_tol > 0.0 && peripheral_tol < 0.1)) {
    throw Error(ErrorKind::InvalidArgument, "peripheral_tol must lie in (0, 0.1)");
  }
  const std::size_t n = kraus.d_M * kraus.d_M;
  TransferMatrix t;
  t.peripheral_tol = peripheral_tol;
  t.e = ComplexMatrix(n, n);
  for (const auto& m : kraus.matrices) t.e += kron(m, m.conjugate());
  t.spectrum = eig_general(t.e);
  double gap = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::abs(t.spectrum.values[i]);
    if (mag > 1.0 - peripheral_tol) {
      t.peripheral_indices.push_back(i);
    } else {
      gap = std::max(gap, mag);
    }
  }
  if (gap >= 0.0) t.nu_gap = gap;
  return t;
}

double spectral_gap(const TransferMatrix& transfer) {
  if (!transfer.nu_gap) {
    throw Error(ErrorKind::DegenerateSpectrum, "every eigenvalue of E is peripheral");
  }
  return *transfer.nu_gap;
}

std::size_t multiplicity(const TransferMatrix& transfer, Complex target) {
  return static_cast<std::size_t>(
      std::count_if(transfer.spectrum.values.begin(), transfer.spectrum.values.end(),
                    [&](Complex v) { return std::abs(v - target) <= kDegeneracyTolerance; }));
}

ComplexMatrix fixed_point(const TransferMatrix& transfer) {
  const std::size_t m = multiplicity(transfer, 1.0);
  if (m == 0) throw Error(ErrorKind::NoFixedPoint, "no eigenvalue within 1e-8 of 1");
  const std::size_t n = transfer.e.rows();
  const std::size_t d = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n))));

  // Spectral projector onto the eigenvalue-1 eigenspace, independent of the
  // basis the eigensolver happens to return for a degenerate eigenvalue.
  const ComplexMatrix shifted = transfer.e - ComplexMatrix::identity(n);
  const ComplexMatrix right = null_space(shifted, m);
  const ComplexMatrix left = null_space(shifted.adjoint(), m);
  const ComplexMatrix projector = right * solve(left.adjoint() * right, left.adjoint());

  const ComplexMatrix start = (1.0 / static_cast<double>(d)) * ComplexMatrix::identity(d);
  const std::vector<Complex> start_vec = vec(start);
  const std::vector<Complex> image = projector * std::span<const Complex>(start_vec);
  const ComplexMatrix sigma = hermitize(devec(image, d));

  const auto dec = eig_hermitian(sigma);
  double total = 0.0;
  double clipped = 0.0;
  std::vector<double> kept(d);
  for (std::size_t i = 0; i < d; ++i) {
    total += std::abs(dec.values[i]);
    if (dec.values[i] < 0.0) clipped += -dec.values[i];
    kept[i] = std::max(dec.values[i], 0.0);
  }
  if (total == 0.0 || clipped > kClipLimit * total) {
    throw Error(ErrorKind::NotPositive,
                "fixed point clipping removed " + std::to_string(clipped) + " of weight " +
                    std::to_string(total));
  }
  ComplexMatrix out = dec.vectors * ComplexMatrix::diagonal(std::span<const double>(kept)) *
                      dec.vectors.adjoint();
  out = hermitize(out);
  const Complex tr = out.trace();
  out *= 1.0 / tr.real();
  return out;
}

IuMps make_iumps(KrausSet kraus, double peripheral_tol) {
  validate(kraus);
  TransferMatrix t = transfer_matrix(kraus, peripheral_tol);
  ComplexMatrix sigma = fixed_point(t);
  const double drift = max_abs_diff(apply_channel(kraus, sigma), sigma);
  if (drift > kInvarianceTolerance) {
    throw Error(ErrorKind::NotPositive,
                "fixed point is not channel invariant (drift " + std::to_string(drift) + ")");
  }
  return IuMps{std::move(kraus), std::move(sigma), std::move(t)};
}

}  // namespace iumps
