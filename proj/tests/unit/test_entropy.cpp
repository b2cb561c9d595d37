#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "iumps/entropy.hpp"
#include "iumps/error.hpp"

using namespace iumps;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// Descending eigenvalues from the Eigen oracle.
std::vector<double> oracle_spectrum(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), Eigen::EigenvaluesOnly);
  std::vector<double> v(solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

double oracle_entropy(const ComplexMatrix& m) {
  double s = 0.0;
  for (double p : oracle_spectrum(m))
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

// Compares the leading entries; the tail of the longer list must vanish.
double spectrum_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    worst = std::max(worst, std::abs(x - y));
  }
  return worst;
}

// Partial trace over the `low` least-significant and `high` most-significant
// sites of a density on `n` sites of dimension d.
ComplexMatrix trace_sites(const ComplexMatrix& rho, std::size_t d, std::size_t n, std::size_t low,
                          std::size_t high) {
  std::size_t dl = 1, dm = 1, dh = 1;
  for (std::size_t k = 0; k < low; ++k) dl *= d;
  for (std::size_t k = 0; k < n - low - high; ++k) dm *= d;
  for (std::size_t k = 0; k < high; ++k) dh *= d;
  ComplexMatrix out(dm, dm);
  for (std::size_t h = 0; h < dh; ++h)
    for (std::size_t l = 0; l < dl; ++l)
      for (std::size_t m = 0; m < dm; ++m)
        for (std::size_t mp = 0; mp < dm; ++mp)
          out(m, mp) += rho((h * dm + m) * dl + l, (h * dm + mp) * dl + l);
  return out;
}

IuMps product_state() {
  KrausSet k{3, 1, {}, CaseTag::Explicit};
  k.matrices = {ComplexMatrix{{Complex(0.6, 0.0)}}, ComplexMatrix{{Complex(0.0, 0.48)}},
                ComplexMatrix{{Complex(0.64, 0.0)}}};
  return make_iumps(k);
}

IuMps sampled(CaseTag tag, std::uint64_t seed) {
  RandomStream rs(seed, 17);
  return make_iumps(build_case(tag, 3, 4, rs));
}

const double kIth = 17.0 * std::log(2.0) / 16.0 - 9.0 * std::log(3.0) / 8.0 + 5.0 * std::log(5.0) / 16.0;

}  // namespace

TEST_CASE("product state has zero entropy and zero QCMI") {
  const IuMps m = product_state();
  for (std::size_t n = 1; n <= 4; ++n) CHECK(std::abs(region_entropy(m, n).entropy) <= 1e-12);
  CHECK(std::abs(brute_force_entropy(m, 3)) <= 1e-12);
  CHECK(std::abs(qcmi(m, {1, 2, 1})) <= 1e-12);
  CHECK(std::abs(qmi(m, {1, 30, 1})) <= 1e-12);
}

TEST_CASE("support decomposition of the identity channel") {
  KrausSet k{1, 2, {ComplexMatrix::identity(2)}, CaseTag::Explicit};
  const TransferMatrix t = transfer_matrix(k);
  const SupportProjection sp = support_decomposition(t, 1);
  // G~ = vec(I) vec(I)^dag: rank one with eigenvalue 2.
  CHECK(sp.support_dim == 1);
  CHECK(sp.sigma_diag[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("benchmark instance single-site density") {
  const IuMps m = make_iumps(appendix_a_kraus());
  const ComplexMatrix rho1 = brute_force_density(m, 1);
  const double expected[3] = {2.0 / 8, 3.0 / 8, 3.0 / 8};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(rho1(i, j) - (i == j ? expected[i] : 0.0)) <= 1e-15);

  const EntropyReport r = region_entropy(m, 1);
  const double s_expected = -0.25 * std::log(0.25) - 2.0 * 0.375 * std::log(0.375);
  CHECK(r.entropy == doctest::Approx(s_expected).epsilon(1e-12));
  CHECK(spectrum_distance(r.eigenvalues, {0.375, 0.375, 0.25}) <= 1e-12);
  CHECK(std::abs(brute_force_entropy(m, 1) - r.entropy) <= 1e-10);

  const SupportProjection sp = support_decomposition(m.transfer, 2);
  CHECK(sp.sigma_diag.back() >= -1e-12);
  CHECK(spectrum_distance(eigvals_hermitian(projected_density(sp, m.sigma)),
                          oracle_spectrum(brute_force_density(m, 2))) <= 1e-10);
}

TEST_CASE("projected density against the brute-force oracle") {
  for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2, CaseTag::Case3}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const IuMps m = sampled(tag, seed);
      for (std::size_t n = 1; n <= 5; ++n) {
        const SupportProjection sp = support_decomposition(m.transfer, n);
        CHECK(sp.support_dim <= 16);
        const ComplexMatrix proj = projected_density(sp, m.sigma);
        CHECK(std::abs(proj.trace() - 1.0) <= 1e-9);
        const EntropyReport report = region_entropy(m, n);
        double total = 0.0;
        for (double v : report.eigenvalues) total += v;
        CHECK(std::abs(total - 1.0) <= 1e-9);
        CHECK(report.entropy >= 0.0);
        CHECK(report.entropy <= std::log(double(sp.support_dim)) + 1e-12);

        const ComplexMatrix rho = brute_force_density(m, n);
        CHECK(spectrum_distance(report.eigenvalues, oracle_spectrum(rho)) <= 1e-9);
        CHECK(std::abs(report.entropy - oracle_entropy(rho)) <= 1e-9);
        CHECK(std::abs(purification_entropy(m, n).entropy - report.entropy) <= 1e-9);
      }
    }
  }
}

TEST_CASE("explicit isometry") {
  for (CaseTag tag : {CaseTag::Case1, CaseTag::Case3}) {
    const IuMps m = sampled(tag, 42);
    for (std::size_t n = 1; n <= 4; ++n) {
      const SupportProjection sp = support_decomposition(m.transfer, n);
      const ComplexMatrix p = support_isometry(m.kraus, sp, n);
      CHECK(max_abs_diff(p.adjoint() * p, ComplexMatrix::identity(sp.support_dim)) <= 1e-10);
      const ComplexMatrix rho = brute_force_density(m, n);
      CHECK(max_abs_diff(p.adjoint() * rho * p, projected_density(sp, m.sigma)) <= 1e-10);
    }
  }
}

TEST_CASE("brute-force density basics") {
  const IuMps m = sampled(CaseTag::Case1, 8);
  const ComplexMatrix rho2 = brute_force_density(m, 2);
  CHECK(std::abs(rho2.trace() - 1.0) <= 1e-12);
  CHECK(max_abs_diff(rho2, rho2.adjoint()) <= 1e-12);
  // Subadditivity against the single-site marginals.
  const double s1 = oracle_entropy(trace_sites(rho2, 3, 2, 0, 1));
  const double s2 = oracle_entropy(trace_sites(rho2, 3, 2, 1, 0));
  CHECK(s1 + s2 >= oracle_entropy(rho2) - 1e-12);
  CHECK_THROWS_AS(brute_force_density(m, 7), Error);
  try {
    brute_force_density(m, 7);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("QCMI against explicit marginals of rho_ABC") {
  auto explicit_qcmi = [](const IuMps& m, std::size_t b) {
    const std::size_t n = b + 2;
    const ComplexMatrix abc = brute_force_density(m, n);
    const ComplexMatrix ab = trace_sites(abc, 3, n, 0, 1);
    const ComplexMatrix bc = trace_sites(abc, 3, n, 1, 0);
    const ComplexMatrix bb = trace_sites(abc, 3, n, 1, 1);
    return oracle_entropy(ab) + oracle_entropy(bc) - oracle_entropy(abc) - oracle_entropy(bb);
  };
  const IuMps bench = make_iumps(appendix_a_kraus());
  CHECK(std::abs(qcmi(bench, {1, 2, 1}) - explicit_qcmi(bench, 2)) <= 1e-9);
  for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2, CaseTag::Case3}) {
    const IuMps m = sampled(tag, 5);
    for (std::size_t b = 1; b <= 3; ++b)
      CHECK(std::abs(qcmi(m, {1, b, 1}) - explicit_qcmi(m, b)) <= 1e-9);
  }
}

TEST_CASE("two-region density against explicit tracing over B") {
  for (CaseTag tag : {CaseTag::Case1, CaseTag::Case3}) {
    const IuMps m = sampled(tag, 11);
    for (std::size_t b = 1; b <= 3; ++b) {
      const ComplexMatrix full = brute_force_density(m, b + 2);
      // Trace out the middle sites: index (c, b, a) -> (c, a).
      std::size_t db = 1;
      for (std::size_t k = 0; k < b; ++k) db *= 3;
      ComplexMatrix expected(9, 9);
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t cp = 0; cp < 3; ++cp)
          for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t ap = 0; ap < 3; ++ap)
              for (std::size_t mid = 0; mid < db; ++mid)
                expected(c * 3 + a, cp * 3 + ap) +=
                    full((c * db + mid) * 3 + a, (cp * db + mid) * 3 + ap);
      CHECK(max_abs_diff(two_region_density(m, {1, b, 1}), expected) <= 1e-12);
    }
  }
}

TEST_CASE("benchmark mutual information limit") {
  const IuMps m = make_iumps(appendix_a_kraus());
  CHECK(std::abs(qmi(m, {1, 26, 1}) - kIth) <= 1e-12);

  // Closed-form limit: (1/32)[diag(1,2,1) (x) diag(1,2,1) + diag(1,1,2) (x) diag(1,1,2)].
  const double u[3] = {1, 2, 1};
  const double v[3] = {1, 1, 2};
  std::vector<double> ac;
  double pa[3] = {0, 0, 0};
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a) {
      const double p = (u[c] * u[a] + v[c] * v[a]) / 32.0;
      ac.push_back(p);
      pa[a] += p;
    }
  const double closed = 2.0 * von_neumann_entropy(pa) - von_neumann_entropy(ac);
  CHECK(std::abs(closed - kIth) <= 1e-15);

  // Off-limit entries decay like 2^-|B|; |B| = 40 is well inside 1e-10.
  const ComplexMatrix rho_ac = two_region_density(m, {1, 40, 1});
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int cp = 0; cp < 3; ++cp)
        for (int ap = 0; ap < 3; ++ap) {
          const double expected = (c == cp && a == ap) ? (u[c] * u[a] + v[c] * v[a]) / 32.0 : 0.0;
          CHECK(std::abs(rho_ac(c * 3 + a, cp * 3 + ap) - expected) <= 1e-10);
        }
}

TEST_CASE("strong subadditivity on sampled instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IuMps m = sampled(CaseTag::Case1, 100 + seed);
    for (std::size_t b = 2; b <= 20; b += 2) CHECK(qcmi(m, {1, b, 1}) >= -1e-9);
  }
}
