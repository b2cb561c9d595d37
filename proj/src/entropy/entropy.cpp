#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "iumps/entropy.hpp"
#include "iumps/error.hpp"

namespace iumps {

namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (out > kBruteForceCap / std::max<std::size_t>(base, 1)) {
      throw Error(ErrorKind::TooLarge, "d_s^n exceeds the explicit-density cap of " +
                                           std::to_string(kBruteForceCap));
    }
    out *= base;
  }
  return out;
}

// M^{s_n} ... M^{s_1} for every string, indexed by sum_k s_k d_s^(k-1).
std::vector<ComplexMatrix> string_products(const KrausSet& kraus, std::size_t n) {
  const std::size_t count = checked_power(kraus.d_s, n);
  std::vector<ComplexMatrix> products{ComplexMatrix::identity(kraus.d_M)};
  products.reserve(count);
  std::size_t stride = 1;
  for (std::size_t site = 0; site < n; ++site) {
    std::vector<ComplexMatrix> next(stride * kraus.d_s);
    for (std::size_t s = 0; s < kraus.d_s; ++s)
      for (std::size_t prefix = 0; prefix < stride; ++prefix)
        next[prefix + s * stride] = kraus.matrices[s] * products[prefix];
    products = std::move(next);
    stride *= kraus.d_s;
  }
  return products;
}

// tr(a b^dag)
Complex trace_with_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) s += a.entries()[k] * std::conj(b.entries()[k]);
  return s;
}

}  // namespace

SupportProjection support_decomposition(const TransferMatrix& transfer, std::size_t n,
                                        double threshold) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "region length must be >= 1");
  if (!(threshold > 0.0)) throw Error(ErrorKind::InvalidArgument, "threshold must be positive");
  const std::size_t dd = transfer.e.rows();
  const std::size_t d = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(dd))));
  const ComplexMatrix g = mat_power(transfer.e, n);
  ComplexMatrix gt(dd, dd);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t ip = 0; ip < d; ++ip)
        for (std::size_t jp = 0; jp < d; ++jp) gt(i * d + j, ip * d + jp) = g(j * d + jp, i * d + ip);

  const double skew = (gt - gt.adjoint()).frobenius_norm();
  if (skew > 1e-8 * gt.frobenius_norm()) {
    throw Error(ErrorKind::NotHermitian, "permuted power of E is not Hermitian");
  }
  const auto dec = eig_hermitian(hermitize(gt));
  SupportProjection sp;
  sp.w = dec.vectors;
  sp.sigma_diag = dec.values;
  sp.threshold = threshold;
  const double cut = threshold * std::max(dec.values.front(), 0.0);
  sp.support_dim = static_cast<std::size_t>(
      std::count_if(dec.values.begin(), dec.values.end(), [&](double v) { return v > cut; }));
  return sp;
}

ComplexMatrix projected_density(const SupportProjection& sp, const ComplexMatrix& sigma) {
  const std::size_t d = sigma.rows();
  const std::size_t r = sp.support_dim;
  // (sigma (x) I) conj(W), then W^T on the left.
  ComplexMatrix sw(d * d, r);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < r; ++l) {
        Complex acc = 0.0;
        for (std::size_t ip = 0; ip < d; ++ip) acc += sigma(i, ip) * std::conj(sp.w(ip * d + j, l));
        sw(i * d + j, l) = acc;
      }
  ComplexMatrix out(r, r);
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t lp = 0; lp < r; ++lp) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < d * d; ++k) acc += sp.w(k, l) * sw(k, lp);
      out(l, lp) = std::sqrt(sp.sigma_diag[l] * sp.sigma_diag[lp]) * acc;
    }
  return hermitize(out);
}

ComplexMatrix support_isometry(const KrausSet& kraus, const SupportProjection& sp, std::size_t n) {
  const auto products = string_products(kraus, n);
  const std::size_t d = kraus.d_M;
  ComplexMatrix p(products.size(), sp.support_dim);
  for (std::size_t s = 0; s < products.size(); ++s)
    for (std::size_t l = 0; l < sp.support_dim; ++l) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) acc += products[s](j, i) * std::conj(sp.w(i * d + j, l));
      p(s, l) = acc / std::sqrt(sp.sigma_diag[l]);
    }
  return p;
}

double von_neumann_entropy(std::span<const double> spectrum) {
  double s = 0.0;
  for (double p : spectrum)
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

EntropyReport density_entropy(const ComplexMatrix& rho) {
  EntropyReport report;
  report.eigenvalues = eigvals_hermitian(hermitize(rho));
  for (double& v : report.eigenvalues) {
    if (v < 0.0) {
      report.clipped_weight += -v;
      v = 0.0;
    }
  }
  report.entropy = von_neumann_entropy(report.eigenvalues);
  return report;
}

EntropyReport region_entropy(const IuMps& mps, std::size_t n, double threshold) {
  const SupportProjection sp = support_decomposition(mps.transfer, n, threshold);
  EntropyReport report = density_entropy(projected_density(sp, mps.sigma));
  report.region_len = n;
  return report;
}

double qcmi(const IuMps& mps, const RegionSpec& region, double threshold) {
  if (region.len_a == 0 || region.len_b == 0 || region.len_c == 0) {
    throw Error(ErrorKind::InvalidArgument, "QCMI needs nonempty A, B and C");
  }
  std::map<std::size_t, double> cache;
  auto s = [&](std::size_t n) {
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, region_entropy(mps, n, threshold).entropy).first;
    return it->second;
  };
  const std::size_t a = region.len_a, b = region.len_b, c = region.len_c;
  return s(a + b) + s(b + c) - s(a + b + c) - s(b);
}

ComplexMatrix two_region_density(const IuMps& mps, const RegionSpec& region) {
  if (region.len_a == 0 || region.len_c == 0) {
    throw Error(ErrorKind::InvalidArgument, "two-region density needs nonempty A and C");
  }
  checked_power(mps.kraus.d_s, region.len_a + region.len_c);
  const auto pa = string_products(mps.kraus, region.len_a);
  const auto pc = string_products(mps.kraus, region.len_c);
  const std::size_t da = pa.size(), dc = pc.size(), d = mps.kraus.d_M;
  const ComplexMatrix eb = mat_power(mps.transfer.e, region.len_b);

  ComplexMatrix rho(da * dc, da * dc);
  for (std::size_t a = 0; a < da; ++a) {
    const ComplexMatrix pa_sigma = pa[a] * mps.sigma;
    for (std::size_t ap = 0; ap < da; ++ap) {
      const std::vector<Complex> y = vec(pa_sigma * pa[ap].adjoint());
      const ComplexMatrix z = devec(eb * std::span<const Complex>(y), d);
      for (std::size_t c = 0; c < dc; ++c) {
        const ComplexMatrix pcz = pc[c] * z;
        for (std::size_t cp = 0; cp < dc; ++cp)
          rho(c * da + a, cp * da + ap) = trace_with_adjoint(pcz, pc[cp]);
      }
    }
  }
  return hermitize(rho);
}

ComplexMatrix trace_out_c(const ComplexMatrix& rho_ac, std::size_t dim_a, std::size_t dim_c) {
  ComplexMatrix out(dim_a, dim_a);
  for (std::size_t c = 0; c < dim_c; ++c)
    for (std::size_t a = 0; a < dim_a; ++a)
      for (std::size_t ap = 0; ap < dim_a; ++ap) out(a, ap) += rho_ac(c * dim_a + a, c * dim_a + ap);
  return out;
}

ComplexMatrix trace_out_a(const ComplexMatrix& rho_ac, std::size_t dim_a, std::size_t dim_c) {
  ComplexMatrix out(dim_c, dim_c);
  for (std::size_t a = 0; a < dim_a; ++a)
    for (std::size_t c = 0; c < dim_c; ++c)
      for (std::size_t cp = 0; cp < dim_c; ++cp) out(c, cp) += rho_ac(c * dim_a + a, cp * dim_a + a);
  return out;
}

double qmi(const IuMps& mps, const RegionSpec& region, double threshold) {
  const double sa = region_entropy(mps, region.len_a, threshold).entropy;
  const double sc = region.len_c == region.len_a ? sa
                                                 : region_entropy(mps, region.len_c, threshold).entropy;
  const double sac = density_entropy(two_region_density(mps, region)).entropy;
  return sa + sc - sac;
}

ComplexMatrix brute_force_density(const IuMps& mps, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "region length must be >= 1");
  const auto products = string_products(mps.kraus, n);
  const std::size_t dim = products.size();
  std::vector<ComplexMatrix> left(dim);
  for (std::size_t s = 0; s < dim; ++s) left[s] = products[s] * mps.sigma;
  ComplexMatrix rho(dim, dim);
  for (std::size_t s = 0; s < dim; ++s)
    for (std::size_t sp = 0; sp < dim; ++sp) rho(s, sp) = trace_with_adjoint(left[s], products[sp]);
  return rho;
}

double brute_force_entropy(const IuMps& mps, std::size_t n) {
  return density_entropy(brute_force_density(mps, n)).entropy;
}

EntropyReport purification_entropy(const IuMps& mps, std::size_t n) {
  const std::size_t d = mps.kraus.d_M;
  const auto dec = eig_hermitian(mps.sigma);
  std::vector<double> roots(d);
  for (std::size_t i = 0; i < d; ++i) roots[i] = std::sqrt(std::max(dec.values[i], 0.0));
  const ComplexMatrix root = dec.vectors * ComplexMatrix::diagonal(std::span<const double>(roots)) *
                             dec.vectors.adjoint();
  const ComplexMatrix en = mat_power(mps.transfer.e, n);

  ComplexMatrix rho(d * d, d * d);
  ComplexMatrix block(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t jp = 0; jp < d; ++jp) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t ip = 0; ip < d; ++ip) block(i, ip) = root(i, j) * std::conj(root(ip, jp));
      const std::vector<Complex> x = vec(block);
      const ComplexMatrix y = devec(en * std::span<const Complex>(x), d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t ip = 0; ip < d; ++ip) rho(i * d + j, ip * d + jp) = y(i, ip);
    }
  EntropyReport report = density_entropy(rho);
  report.region_len = n;
  return report;
}

}  // namespace iumps
