#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "iumps/error.hpp"
#include "iumps/numerics.hpp"

using namespace iumps;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

ComplexMatrix random_matrix(std::size_t n, RandomStream& rs) {
  ComplexMatrix m(n, n);
  for (auto& z : m.entries()) z = rs.complex_normal();
  return m;
}

ComplexMatrix random_hermitian(std::size_t n, RandomStream& rs) {
  return hermitize(random_matrix(n, rs));
}

// Greedy matching of two eigenvalue multisets; returns the worst distance.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (const Complex& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](const Complex& p, const Complex& q) {
      return std::abs(p - x) < std::abs(q - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("eig_general on identity and diagonal inputs") {
  const auto id = eig_general(ComplexMatrix::identity(4));
  for (const auto& v : id.values) CHECK(std::abs(v - 1.0) == doctest::Approx(0.0));
  CHECK(id.residual == 0.0);

  const std::vector<double> d{0.25, 1.0, 0.0, 0.5};
  const auto diag = eig_general(ComplexMatrix::diagonal(std::span<const double>(d)));
  const std::vector<double> expected{1.0, 0.5, 0.25, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(diag.values[i].real() == doctest::Approx(expected[i]).epsilon(1e-15));
    CHECK(diag.values[i].imag() == 0.0);
  }
}

TEST_CASE("eig_general matches the Eigen oracle and reconstructs random matrices") {
  RandomStream rs(11, 0);
  for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 40u}) {
    const ComplexMatrix a = random_matrix(n, rs);
    const auto dec = eig_general(a);
    CHECK(dec.residual <= 1e-11 * a.frobenius_norm());
    for (std::size_t i = 1; i < n; ++i)
      CHECK(std::abs(dec.values[i - 1]) >= std::abs(dec.values[i]));
    for (std::size_t c = 0; c < n; ++c) {
      double norm = 0.0;
      for (std::size_t r = 0; r < n; ++r) norm += std::norm(dec.vectors(r, c));
      CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-13));
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> oracle(to_eigen(a));
    std::vector<Complex> ref(oracle.eigenvalues().data(), oracle.eigenvalues().data() + n);
    CHECK(multiset_distance(dec.values, ref) <= 1e-10 * a.frobenius_norm());

    const ComplexMatrix recon =
        dec.vectors * ComplexMatrix::diagonal(std::span<const Complex>(dec.values)) *
        inverse(dec.vectors);
    CHECK(max_abs_diff(recon, a) <= 1e-9 * a.frobenius_norm());
  }
}

TEST_CASE("eig_general handles a matrix with degenerate unit-modulus eigenvalues") {
  // Block-diagonal unitary with a repeated eigenvalue and a conjugate pair.
  ComplexMatrix u{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  const auto dec = eig_general(u);
  for (const auto& v : dec.values) CHECK(std::abs(std::abs(v) - 1.0) <= 1e-14);
  // Ties in magnitude resolve by descending real part, then imaginary part.
  CHECK(dec.values[0].real() == doctest::Approx(1.0));
  CHECK(dec.values[1].imag() == doctest::Approx(1.0));
  CHECK(dec.values[2].imag() == doctest::Approx(-1.0));
  CHECK(dec.values[3].real() == doctest::Approx(-1.0));
}

TEST_CASE("eig_general rejects oversized and non-square input") {
  CHECK_THROWS_AS(eig_general(ComplexMatrix(3, 2)), Error);
  try {
    eig_general(ComplexMatrix(65, 65));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("spectrum_order breaks magnitude ties deterministically") {
  const std::vector<Complex> v{{0, 1}, {-1, 0}, {0.5, 0}, {1, 0}, {0, -1}};
  const auto order = spectrum_order(v);
  const std::vector<std::size_t> expected{3, 0, 4, 1, 2};
  CHECK(order == expected);
}

TEST_CASE("eig_hermitian small exact cases") {
  const std::vector<double> d{1.0, 3.0, 2.0};
  const auto dec = eig_hermitian(ComplexMatrix::diagonal(std::span<const double>(d)));
  CHECK(dec.values == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(std::abs(dec.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(dec.vectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(dec.vectors(0, 2)) == doctest::Approx(1.0));

  RandomStream rs(3, 1);
  std::vector<Complex> v(6);
  for (auto& z : v) z = rs.complex_normal();
  const double norm = euclidean_norm(v);
  ComplexMatrix proj(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) proj(i, j) = v[i] * std::conj(v[j]) / (norm * norm);
  const auto vals = eigvals_hermitian(proj);
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 1; i < 6; ++i) CHECK(std::abs(vals[i]) <= 1e-14);
}

TEST_CASE("eig_hermitian reconstruction and unitarity") {
  RandomStream rs(5, 2);
  for (std::size_t n : {1u, 2u, 16u, 81u, 243u}) {
    const ComplexMatrix h = random_hermitian(n, rs);
    const auto dec = eig_hermitian(h);
    const ComplexMatrix recon = dec.vectors *
                                ComplexMatrix::diagonal(std::span<const double>(dec.values)) *
                                dec.vectors.adjoint();
    CHECK(max_abs_diff(recon, h) <= 1e-12 * h.frobenius_norm());
    CHECK(max_abs_diff(dec.vectors.adjoint() * dec.vectors, ComplexMatrix::identity(n)) <=
          1e-12 * std::max<double>(1.0, std::sqrt(n)));
    CHECK(std::is_sorted(dec.values.rbegin(), dec.values.rend()));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> oracle(to_eigen(h));
    const auto vals = eigvals_hermitian(h);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(vals[i] == doctest::Approx(oracle.eigenvalues()[n - 1 - i]).epsilon(1e-10));
      CHECK(std::abs(vals[i] - dec.values[i]) <= 1e-12 * h.frobenius_norm());
    }
  }
}

TEST_CASE("eig_hermitian on low-rank input with a large zero cluster") {
  RandomStream rs(41, 0);
  for (std::size_t n : {81, 243}) {
    // Rank 16 PSD: X X^dag with X of shape n x 16.
    ComplexMatrix x(n, 16);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 16; ++j) x(i, j) = rs.complex_normal();
    const ComplexMatrix h = x * x.adjoint();
    const auto dec = eig_hermitian(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> oracle(to_eigen(h));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(dec.values[i] - oracle.eigenvalues()(n - 1 - i)));
    CHECK(worst <= 1e-12 * oracle.eigenvalues().maxCoeff());
    CHECK(max_abs_diff(dec.vectors * ComplexMatrix::diagonal(std::span<const double>(dec.values)) *
                           dec.vectors.adjoint(),
                       h) <= 1e-11 * oracle.eigenvalues().maxCoeff());
  }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  ComplexMatrix a{{1, 2}, {0, 1}};
  try {
    eig_hermitian(a);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("mat_power") {
  RandomStream rs(9, 0);
  const ComplexMatrix a = random_matrix(16, rs);
  CHECK(mat_power(a, 0) == ComplexMatrix::identity(16));

  const std::vector<double> half{0.5};
  const auto p = mat_power(ComplexMatrix::diagonal(std::span<const double>(half)), 3);
  CHECK(p(0, 0).real() == 0.125);

  // Spectral radius below one via a scaled unitary.
  ComplexMatrix c = 0.97 * haar_unitary(16, rs);
  ComplexMatrix naive = ComplexMatrix::identity(16);
  for (int i = 0; i < 7; ++i) naive = naive * c;
  CHECK(max_abs_diff(mat_power(c, 7), naive) <= 1e-12);
  for (std::size_t m : {0u, 3u, 8u})
    for (std::size_t n : {1u, 5u, 13u}) {
      const ComplexMatrix lhs = mat_power(c, m + n);
      CHECK(max_abs_diff(lhs, mat_power(c, m) * mat_power(c, n)) <= 1e-12 * lhs.max_abs() + 1e-15);
    }
}

TEST_CASE("RandomStream reproducibility") {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    all_equal = all_equal && x == b.normal();
    any_differs = any_differs || x != c.normal();
  }
  CHECK(all_equal);
  CHECK(any_differs);
}

TEST_CASE("haar_unitary is unitary") {
  RandomStream rs(1, 0);
  const auto u1 = haar_unitary(1, rs);
  CHECK(std::abs(u1(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = haar_unitary(12, rs);
    CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(12)) <= 1e-12);
  }
  CHECK_THROWS_AS(haar_unitary(0, rs), Error);
}

TEST_CASE("haar_unitary first moment and left invariance") {
  constexpr int kSamples = 10000;
  std::vector<double> ours(kSamples), oracle(kSamples), rotated(kSamples);
  RandomStream rs(2024, 0);
  RandomStream rs_rot(2024, 1);
  RandomStream rs_oracle(2024, 2);
  const ComplexMatrix f = haar_unitary(4, rs_rot);
  for (int i = 0; i < kSamples; ++i) {
    ours[i] = std::norm(haar_unitary(4, rs)(0, 0));
    rotated[i] = std::norm((f * haar_unitary(4, rs_rot))(0, 0));
    // Independent oracle: Gram-Schmidt via Eigen's Householder QR on a
    // Ginibre matrix, with the R-phase correction.
    Eigen::MatrixXcd g(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) g(r, c) = rs_oracle.complex_normal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < 4; ++c) q.col(c) *= r(c, c) / std::abs(r(c, c));
    oracle[i] = std::norm(q(0, 0));
  }
  auto mean = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / x.size();
  };
  auto stderr_of = [&](const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / (x.size() - 1) / x.size());
  };
  CHECK(std::abs(mean(ours) - 0.25) <= 3.0 * stderr_of(ours));
  CHECK(std::abs(mean(oracle) - 0.25) <= 3.0 * stderr_of(oracle));
  // Two-sample KS at significance 0.01: c(alpha) = 1.628.
  const double critical = 1.628 * std::sqrt(2.0 / kSamples);
  CHECK(ks_statistic(ours, rotated) <= critical);
  CHECK(ks_statistic(ours, oracle) <= critical);
}
