#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "iumps/bounds.hpp"
#include "iumps/entropy.hpp"
#include "iumps/error.hpp"

using namespace iumps;

namespace {

BoundConstants manual(double q_pref, double rate, std::size_t k = 0) {
  BoundConstants c;
  c.big_q = q_pref;
  c.rate_q = rate;
  c.k_jordan = k;
  return c;
}

}  // namespace

TEST_CASE("theorem1_bound arithmetic") {
  const BoundConstants c = manual(1.0, std::log(4.0));
  CHECK(theorem1_bound(c, 2) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  for (std::size_t b : {1u, 3u, 10u}) {
    const double lhs = std::log(theorem1_bound(c, 2 * b)) - std::log(theorem1_bound(c, b));
    CHECK(lhs == doctest::Approx(-c.rate_q * b).epsilon(1e-12));
  }
  for (std::size_t b = 1; b < 60; ++b) CHECK(theorem1_bound(c, b + 1) < theorem1_bound(c, b));
  CHECK_THROWS_AS(theorem1_bound(c, 0), Error);
}

TEST_CASE("normal channel has a unitary eigenbasis") {
  // Dephasing: E = diag(1, 2p-1, 2p-1, 1) with p = 0.8.
  KrausSet k{2, 2, {}, CaseTag::Explicit};
  k.matrices = {std::sqrt(0.8) * ComplexMatrix::identity(2),
                std::sqrt(0.2) * ComplexMatrix{{1, 0}, {0, -1}}};
  const IuMps m = make_iumps(k);
  const BoundConstants c = jordan_constants(m);
  CHECK(c.k_jordan == 0);
  CHECK(c.cond_s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.c2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.nu_gap == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(c.d_cap == 2);
  CHECK(*c.delta_spec == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("Haar Case-1 constants") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomStream rs(seed, 3);
    const IuMps m = make_iumps(build_case1(3, 4, rs));
    const BoundConstants c = jordan_constants(m);
    CHECK(c.k_jordan == 0);
    // Pairwise separation of the eigenvalues at magnitude nu_gap.
    const auto& v = m.transfer.spectrum.values;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j)
        if (std::abs(std::abs(v[i]) - c.nu_gap) <= 1e-8 && std::abs(std::abs(v[j]) - c.nu_gap) <= 1e-8)
          CHECK(std::abs(v[i] - v[j]) > 1e-8);
    CHECK(c.c1 <= 1.0);
    CHECK(c.c2 >= 1.0);
    CHECK(c.rate_q == 2.0 * std::log(1.0 / c.nu_gap));
    CHECK(c.rate_q / (0.5 * std::log(1.0 / c.nu_gap)) == doctest::Approx(4.0).epsilon(1e-15));
    const double dm = 4.0;
    CHECK(c.big_q == doctest::Approx(16 * dm * dm * dm * c.c2 * c.c2 / std::pow(c.sigma_min, 3)));
    CHECK(c.d_cap <= 16);
    CHECK(c.c3.has_value());

    // Oracle: condition number of Eigen's unit-norm eigenvector matrix.
    Eigen::MatrixXcd e(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j) e(i, j) = m.transfer.e(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(e);
    Eigen::MatrixXcd s = solver.eigenvectors();
    s.colwise().normalize();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
    const double cond = svd.singularValues()(0) / svd.singularValues()(15);
    CHECK(c.c2 == doctest::Approx(cond).epsilon(1e-6));
    CHECK(jordan_constants(m).c2 == c.c2);
  }
}

TEST_CASE("a defective eigenvalue at the gap is reported") {
  // Upper-triangular E with a 2x2 Jordan block at 0.5; the eigensolver sees
  // the repeated eigenvalue exactly.
  IuMps m;
  m.kraus = KrausSet{1, 2, {ComplexMatrix::identity(2)}, CaseTag::Explicit};
  m.sigma = 0.5 * ComplexMatrix::identity(2);
  m.transfer.e = ComplexMatrix{{1, 0, 0, 0}, {0, 0.5, 1, 0}, {0, 0, 0.5, 0}, {0, 0, 0, 0.2}};
  m.transfer.spectrum = eig_general(m.transfer.e);
  m.transfer.peripheral_indices = {0};
  m.transfer.nu_gap = 0.5;
  try {
    jordan_constants(m);
    FAIL("expected NearDegenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NearDegenerate);
  }

  // The same spectrum without the nilpotent part is accepted.
  m.transfer.e(1, 2) = 0.0;
  m.transfer.spectrum = eig_general(m.transfer.e);
  const BoundConstants c = jordan_constants(m);
  CHECK(c.cond_s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.d_cap == 3);
}

TEST_CASE("sufficient_b") {
  BoundConstants c;
  c.nu_gap = 0.5;
  c.sigma_min = 0.25;
  c.c2 = 1.0;
  c.d_m = 4;
  // Oracle: solve 0.5^b <= rhs in closed form, round up to even.
  const double rhs = (1.0 / (6.0 * std::sqrt(2.0))) * std::pow(0.25, 2.5) / (1.0 * std::pow(4.0, 1.5)) *
                     std::min(1.0, 243.0 / 4.0 * 0.0625);
  std::size_t expected = static_cast<std::size_t>(std::ceil(std::log(rhs) / std::log(0.5)));
  expected += expected % 2;
  expected = std::max<std::size_t>(expected, 4);
  CHECK(sufficient_b(c, 3) == expected);
  CHECK(expected == 12);
  CHECK(sufficient_b(c, 3) == sufficient_b(c, 3));

  BoundConstants easy;
  easy.nu_gap = 1e-300;
  easy.sigma_min = 1.0 - 1e-12;
  easy.c2 = 1.0;
  easy.d_m = 4;
  // 2 ln 4 / ln 3 = 2.52 rounds up to the even 4.
  CHECK(sufficient_b(easy, 3) == 4);
  easy.d_m = 2;
  CHECK(sufficient_b(easy, 3) == 2);

  BoundConstants jordan = c;
  jordan.k_jordan = 1;
  try {
    sufficient_b(jordan, 3);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
}

TEST_CASE("qcmi_error_estimate") {
  const double v = qcmi_error_estimate(4, 1e-14, 1e-14);
  CHECK(v == doctest::Approx(16.0 * 1e-14 * std::log(1e14)).epsilon(1e-14));
  CHECK(v >= 1e-13);
  CHECK(v <= 1e-11);
  CHECK(qcmi_error_estimate(4, 1e-14, 0.0) == 0.0);
  CHECK(qcmi_error_estimate(4, 1.0, 1e-14) == 0.0);
  CHECK_THROWS_AS(qcmi_error_estimate(4, 0.0, 1e-14), Error);
}

TEST_CASE("measured QCMI stays below the bound on the benchmark instance") {
  const IuMps m = make_iumps(appendix_a_kraus());
  const BoundConstants c = jordan_constants(m);
  CHECK(c.k_jordan == 0);
  for (std::size_t b = 2; b <= 28; b += 2) CHECK(qcmi(m, {1, b, 1}) <= theorem1_bound(c, b));
}
