#include <cmath>
#include <string>

#include "iumps/error.hpp"
#include "iumps/experiments.hpp"

namespace iumps {

DecayCurve scan_instance(const IuMps& mps, const RegionSpec& region, std::size_t b_max_limit,
                         unsigned k, double threshold, std::int64_t instance_id) {
  if (region.len_a == 0 || region.len_a != region.len_c) {
    throw Error(ErrorKind::InvalidArgument, "scan needs |A| = |C| >= 1");
  }
  if (b_max_limit < 2 || b_max_limit % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "b_max_limit must be even and >= 2");
  }
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");

  DecayCurve curve;
  curve.instance_id = instance_id;
  curve.case_tag = mps.kraus.case_tag;
  curve.nu_gap = spectral_gap(mps.transfer);
  const double cutoff = std::pow(10.0, -static_cast<double>(k));
  const double log_rate = 2.0 * std::log(1.0 / curve.nu_gap);
  for (std::size_t b = 2; b <= b_max_limit; b += 2) {
    RegionSpec r = region;
    r.len_b = b;
    const double q = qcmi(mps, r, threshold);
    if (!(q > cutoff)) {
      curve.stop_qcmi = q;
      break;
    }
    curve.points.push_back({b, q, qmi(mps, r, threshold), std::log(q) / log_rate});
  }
  if (curve.points.empty()) {
    throw Error(ErrorKind::EmptyCurve, "QCMI <= 1e-" + std::to_string(k) + " already at |B| = 2");
  }
  curve.b_max = curve.points.back().b_len;
  return curve;
}

std::vector<std::pair<double, double>> shift_graph(const DecayCurve& curve) {
  if (curve.points.empty()) throw Error(ErrorKind::EmptyCurve, "cannot shift an empty curve");
  const CurvePoint& last = curve.points.back();
  std::vector<std::pair<double, double>> out;
  out.reserve(curve.points.size());
  for (const CurvePoint& p : curve.points) {
    out.emplace_back(static_cast<double>(p.b_len) - static_cast<double>(last.b_len), p.f - last.f);
  }
  return out;
}

double extract_rate(const DecayCurve& curve, std::size_t burn_in) {
  if (curve.points.size() < burn_in + 2) {
    throw Error(ErrorKind::TooFewPoints, std::to_string(curve.points.size()) +
                                             " points, need burn_in + 2 = " +
                                             std::to_string(burn_in + 2));
  }
  const std::size_t n = curve.points.size() - burn_in;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = burn_in; i < curve.points.size(); ++i) {
    mx += static_cast<double>(curve.points[i].b_len);
    my += curve.points[i].f;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = burn_in; i < curve.points.size(); ++i) {
    const double dx = static_cast<double>(curve.points[i].b_len) - mx;
    sxy += dx * (curve.points[i].f - my);
    sxx += dx * dx;
  }
  return -sxy / sxx;
}

bool histogram_bin(double x, double y, std::size_t& i, std::size_t& j) {
  if (!std::isfinite(x) || !std::isfinite(y) || y < 0.0) return false;
  const double ti = std::floor(-x / 2.0 + 0.5);
  if (ti < 0.0 || ti >= static_cast<double>(kHistogramSize)) return false;
  // Open interval in x: odd integers belong to no bin.
  if (!(x > -(2.0 * ti + 1.0) && x < -(2.0 * ti - 1.0))) return false;
  const double tj = std::floor(y / 2.0);
  if (tj >= static_cast<double>(kHistogramSize)) return false;
  i = static_cast<std::size_t>(ti);
  j = static_cast<std::size_t>(tj);
  return true;
}

}  // namespace iumps
