#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "iumps/bounds.hpp"
#include "iumps/error.hpp"

namespace iumps {

namespace {

constexpr double kNullSpaceTolerance = 1e-6;
constexpr std::size_t kScanCap = 1000000;

struct Cluster {
  Complex center;
  std::vector<std::size_t> members;
};

std::vector<Cluster> cluster_spectrum(const std::vector<Complex>& values) {
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) {
      return std::abs(values[c.members.front()] - values[i]) <= kDegeneracyTolerance;
    });
    if (it == clusters.end()) {
      clusters.push_back({values[i], {i}});
    } else {
      it->members.push_back(i);
    }
  }
  for (auto& c : clusters) {
    Complex sum = 0.0;
    for (std::size_t i : c.members) sum += values[i];
    c.center = sum / static_cast<double>(c.members.size());
  }
  return clusters;
}

}  // namespace

BoundConstants jordan_constants(const IuMps& mps) {
  const TransferMatrix& t = mps.transfer;
  BoundConstants out;
  out.d_m = mps.kraus.d_M;
  out.nu_gap = spectral_gap(t);
  const std::size_t n = t.e.rows();

  ComplexMatrix s = t.spectrum.vectors;
  const std::vector<Cluster> clusters = cluster_spectrum(t.spectrum.values);
  const double scale = std::max(1.0, t.e.frobenius_norm());
  for (const Cluster& c : clusters) {
    if (c.members.size() == 1) continue;
    const ComplexMatrix shifted = t.e - c.center * ComplexMatrix::identity(n);
    const auto dec = eig_hermitian(hermitize(shifted.adjoint() * shifted));
    const double cut = std::pow(kNullSpaceTolerance * scale, 2);
    const std::size_t null_dim = static_cast<std::size_t>(
        std::count_if(dec.values.begin(), dec.values.end(), [&](double v) { return v <= cut; }));
    if (null_dim < c.members.size()) {
      throw Error(ErrorKind::NearDegenerate,
                  "eigenvalue cluster at |nu| = " + std::to_string(std::abs(c.center)) +
                      " is not semisimple (K > 0 suspected)");
    }
    for (std::size_t k = 0; k < c.members.size(); ++k)
      for (std::size_t r = 0; r < n; ++r) s(r, c.members[k]) = dec.vectors(r, n - 1 - k);
  }

  const auto gram = eigvals_hermitian(hermitize(s.adjoint() * s));
  if (!(gram.back() > 0.0)) {
    throw Error(ErrorKind::NearDegenerate, "eigenvector matrix is numerically singular");
  }
  out.k_jordan = 0;
  out.cond_s = std::sqrt(gram.front() / gram.back());
  out.c1 = 1.0 / out.cond_s;
  // (K + 1)(e / K)^K is 1 at K = 0.
  out.c2 = out.cond_s;

  out.d_cap = clusters.size();
  if (clusters.size() > 1) {
    double delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j)
        delta = std::min(delta, std::abs(clusters[i].center - clusters[j].center));
    out.delta_spec = delta;
    const double d = static_cast<double>(out.d_cap);
    const double e2 = std::numbers::e * std::numbers::e;
    const double c3 = 16.0 * e2 * std::sqrt(d) * (d + 1.0) /
                      (std::numbers::sqrt2 * std::pow(1.0 - out.nu_gap, 1.5)) *
                      (1.0 - out.nu_gap * out.nu_gap) * std::pow(2.0 / delta, d - 1.0);
    if (std::isfinite(c3)) out.c3 = c3;
  }

  out.sigma_min = eigvals_hermitian(mps.sigma).back();
  if (!(out.sigma_min > 0.0)) {
    throw Error(ErrorKind::NotPositive, "fixed point is singular; the prefactor is unbounded");
  }
  const double dm = static_cast<double>(out.d_m);
  out.big_q = 16.0 * dm * dm * dm * out.c2 * out.c2 / std::pow(out.sigma_min, 3);
  out.rate_q = 2.0 * std::log(1.0 / out.nu_gap);
  return out;
}

double theorem1_bound(const BoundConstants& constants, std::size_t b_len) {
  if (b_len == 0) throw Error(ErrorKind::InvalidArgument, "b_len must be >= 1");
  const double b = static_cast<double>(b_len);
  const double k = static_cast<double>(constants.k_jordan);
  return constants.big_q * std::exp(-constants.rate_q * (b - k) + 2.0 * k * std::log(b));
}

std::size_t sufficient_b(const BoundConstants& constants, std::size_t d_s) {
  if (constants.k_jordan > 0) {
    throw Error(ErrorKind::Unsupported, "sufficient |B| is only available for K = 0");
  }
  if (d_s < 2) throw Error(ErrorKind::InvalidArgument, "sufficient |B| needs d_s >= 2");
  const double dm = static_cast<double>(constants.d_m);
  const double smin = constants.sigma_min;
  const double rhs = std::pow(smin, 2.5) / (6.0 * std::numbers::sqrt2 * constants.c2 * std::pow(dm, 1.5)) *
                     std::min(1.0, 243.0 / 4.0 * smin * smin);
  const double floor_b = 2.0 * std::log(dm) / std::log(static_cast<double>(d_s));
  for (std::size_t b = 2; b <= kScanCap; b += 2) {
    if (static_cast<double>(b) < floor_b) continue;
    if (std::pow(constants.nu_gap, static_cast<double>(b)) <= rhs) return b;
  }
  throw Error(ErrorKind::NonConvergence, "no sufficient |B| up to " + std::to_string(kScanCap));
}

double qcmi_error_estimate(std::size_t d_M, double lambda_min, double delta_lambda) {
  if (!(lambda_min > 0.0 && lambda_min <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "lambda_min must lie in (0, 1]");
  }
  if (delta_lambda < 0.0) throw Error(ErrorKind::InvalidArgument, "delta_lambda must be >= 0");
  const double d = static_cast<double>(d_M);
  return d * d * delta_lambda * std::log(1.0 / lambda_min);
}

}  // namespace iumps
