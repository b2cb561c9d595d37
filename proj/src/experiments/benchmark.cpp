#include <algorithm>
#include <cmath>
#include <sstream>

#include "iumps/error.hpp"
#include "iumps/experiments.hpp"

namespace iumps {

double benchmark_i_th() {
  return 17.0 * std::log(2.0) / 16.0 - 9.0 * std::log(3.0) / 8.0 + 5.0 * std::log(5.0) / 16.0;
}

bool BenchmarkReport::passed() const { return first_failure() == nullptr; }

const BenchmarkCheck* BenchmarkReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

namespace {

std::string describe(double value, double reference, double tolerance) {
  std::ostringstream os;
  os.precision(17);
  os << "value " << value << ", reference " << reference << ", tolerance " << tolerance;
  return os.str();
}

// Closed-form limit of the two-region density, index (c, a).
double rho_ac_limit(std::size_t c, std::size_t a) {
  constexpr double u[3] = {1, 2, 1};
  constexpr double v[3] = {1, 1, 2};
  return (u[c] * u[a] + v[c] * v[a]) / 32.0;
}

}  // namespace

BenchmarkReport benchmark_appendix_a(double i_th_reference) {
  BenchmarkReport report;
  report.i_th = i_th_reference;
  auto check = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const KrausSet kraus = appendix_a_kraus();
  const double canon = canonical_error(kraus);
  check("canonical form", canon <= kCanonicalTolerance, describe(canon, 0.0, kCanonicalTolerance));
  const IuMps mps = make_iumps(kraus);
  report.nu_gap = spectral_gap(mps.transfer);

  for (std::size_t b = 2; b <= 26; b += 2) report.qmi_curve.push_back(qmi(mps, {1, b, 1}));
  report.qmi_26 = report.qmi_curve.back();
  check("QMI(26) = I_th", std::abs(report.qmi_26 - i_th_reference) <= 1e-12,
        describe(report.qmi_26, i_th_reference, 1e-12));

  // The marginals are exact at any |B|; the correlated part decays like 2^-|B|.
  const ComplexMatrix rho_26 = two_region_density(mps, {1, 26, 1});
  const ComplexMatrix marginal_a = trace_out_c(rho_26, 3, 3);
  const ComplexMatrix marginal_c = trace_out_a(rho_26, 3, 3);
  const double diag[3] = {2.0 / 8.0, 3.0 / 8.0, 3.0 / 8.0};
  double err_a = 0.0, err_c = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double expected = i == j ? diag[i] : 0.0;
      err_a = std::max(err_a, std::abs(marginal_a(i, j) - expected));
      err_c = std::max(err_c, std::abs(marginal_c(i, j) - expected));
    }
  check("rho_A limit", err_a <= 1e-10, describe(err_a, 0.0, 1e-10));
  check("rho_C limit", err_c <= 1e-10, describe(err_c, 0.0, 1e-10));

  const ComplexMatrix rho_40 = two_region_density(mps, {1, 40, 1});
  double err_ac = 0.0;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t cp = 0; cp < 3; ++cp)
        for (std::size_t ap = 0; ap < 3; ++ap) {
          const double expected = (c == cp && a == ap) ? rho_ac_limit(c, a) : 0.0;
          err_ac = std::max(err_ac, std::abs(rho_40(c * 3 + a, cp * 3 + ap) - expected));
        }
  check("rho_AC limit", err_ac <= 1e-10, describe(err_ac, 0.0, 1e-10));

  report.qcmi_curve = scan_instance(mps, {1, 1, 1}, 40, 12);
  const auto& pts = report.qcmi_curve.points;
  bool positive = std::all_of(pts.begin(), pts.end(), [](const CurvePoint& p) { return p.qcmi > 0.0; });
  check("QCMI positive", positive, std::to_string(pts.size()) + " points");

  const std::size_t tail_start = pts.size() > 10 ? pts.size() - 10 : 0;
  bool decreasing = true;
  for (std::size_t i = tail_start + 1; i < pts.size(); ++i)
    decreasing = decreasing && pts[i].qcmi < pts[i - 1].qcmi;
  check("QCMI decreasing", decreasing, "last " + std::to_string(pts.size() - tail_start) + " points");

  report.rate = extract_rate(report.qcmi_curve, 3);
  check("decay rate", report.rate >= 0.95, describe(report.rate, 0.95, 0.0));

  if (pts.size() >= 2) {
    const CurvePoint& p = pts[pts.size() - 2];
    const CurvePoint& q = pts.back();
    report.last_slope = (q.f - p.f) / static_cast<double>(q.b_len - p.b_len);
  }
  check("final slope", pts.size() >= 2 && report.last_slope <= -0.95,
        describe(report.last_slope, -0.95, 0.0));

  const BoundConstants constants = jordan_constants(mps);
  std::size_t violations = 0;
  for (const auto& p : pts)
    if (p.qcmi > theorem1_bound(constants, p.b_len)) ++violations;
  check("QCMI below bound", violations == 0, std::to_string(violations) + " violations");
  return report;
}

KrausSet analytic_family(Family which, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "beta must lie in [0, 1]");
  // Basis |+> = e0, |-> = e1 on the first factor.
  auto lift = [](Complex a00, Complex a01, Complex a10, Complex a11) {
    const ComplexMatrix small{{a00, a01}, {a10, a11}};
    return kron(small, ComplexMatrix::identity(2));
  };
  KrausSet k;
  k.d_s = 3;
  k.d_M = 4;
  if (which == Family::First) {
    const double r = std::sqrt(beta);
    k.matrices.push_back(lift(0, 0, r, 0));   // |-><+|
    k.matrices.push_back(std::sqrt(1.0 - beta) * ComplexMatrix::identity(4));
    k.matrices.push_back(lift(0, -r, 0, 0));  // -|+><-|
  } else {
    double a = (1.0 - beta) * std::sqrt(2.0 / 3.0) + beta * std::sqrt(3.0) / 2.0;
    double c = (1.0 - beta) / std::sqrt(3.0) + beta / 2.0;
    const double norm = std::hypot(a, c);
    a /= norm;
    c /= norm;
    k.matrices.push_back(lift(0, 0, a, 0));
    k.matrices.push_back(lift(-c, 0, 0, c));
    k.matrices.push_back(lift(0, -a, 0, 0));
  }
  validate(k);
  return k;
}

std::vector<double> magnitude_levels(const std::vector<Complex>& values, double tolerance) {
  std::vector<double> mags;
  mags.reserve(values.size());
  for (const Complex& v : values) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  std::vector<double> levels;
  for (double m : mags)
    if (levels.empty() || levels.back() - m > tolerance) levels.push_back(m);
  return levels;
}

}  // namespace iumps
