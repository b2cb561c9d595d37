#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iumps/error.hpp"
#include "iumps/numerics.hpp"

namespace iumps {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweepsPerValue = 60;

void require_hermitian(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::InvalidArgument, "eig_hermitian needs a square matrix");
  if (!a.all_finite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  double skew = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) skew += std::norm(a(i, j) - std::conj(a(j, i)));
  if (std::sqrt(skew) > 1e-10 * a.frobenius_norm()) {
    throw Error(ErrorKind::NotHermitian, "|a - a^dag| exceeds 1e-10 |a|");
  }
}

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1; off[n-1] = 0
  ComplexMatrix basis;      // a = basis * T * basis^dag (empty when not requested)
};

// Householder reduction to a real symmetric tridiagonal matrix. The complex
// off-diagonal phases are absorbed into a diagonal unitary.
Tridiagonal tridiagonalize(const ComplexMatrix& input, bool want_basis) {
  const std::size_t n = input.rows();
  ComplexMatrix a = hermitize(input);
  ComplexMatrix q = want_basis ? ComplexMatrix::identity(n) : ComplexMatrix();
  std::vector<Complex> v(n);
  std::vector<Complex> p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), Complex{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    const double vnorm = euclidean_norm(std::span<const Complex>(v).subspan(k + 1));
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // a <- H a H with H = I - 2 v v^dag, using the Hermitian rank-2 update
    // a - v w^dag - w v^dag where w = 2 a v - 2 (v^dag a v) v.
    Complex vav = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      p[i] = 2.0 * s;
    }
    for (std::size_t i = k + 1; i < n; ++i) vav += std::conj(v[i]) * p[i];
    for (std::size_t i = k; i < n; ++i) p[i] -= vav * v[i];
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        a(i, j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }

    if (want_basis) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex s = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) s += q(i, j) * v[j];
        s *= 2.0;
        for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= s * std::conj(v[j]);
      }
    }
  }

  Tridiagonal out;
  out.diag.resize(n);
  out.off.assign(n, 0.0);
  std::vector<Complex> phase(n, Complex(1.0));
  for (std::size_t i = 0; i < n; ++i) out.diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex e = a(i, i + 1);
    const double mag = std::abs(e);
    out.off[i] = mag;
    phase[i + 1] = mag == 0.0 ? phase[i] : phase[i] * std::conj(e) / mag;
  }
  if (want_basis) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q(i, j) *= phase[j];
    out.basis = std::move(q);
  }
  return out;
}

// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
// matrix. When z is non-null its columns are rotated along.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix* z) {
  const int n = static_cast<int>(d.size());
  double norm = 0.0;
  for (int i = 0; i < n; ++i) norm = std::max(norm, std::abs(d[i]) + (i + 1 < n ? std::abs(e[i]) : 0.0));
  // Absolute floor: a cluster of near-zero eigenvalues never meets the relative test.
  const double floor = kEps * norm;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd || std::abs(e[m]) <= floor) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweepsPerValue) {
          throw Error(ErrorKind::NonConvergence, "tridiagonal QL did not converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z != nullptr) {
            for (std::size_t k = 0; k < z->rows(); ++k) {
              const Complex zk1 = (*z)(k, i + 1);
              const Complex zk0 = (*z)(k, i);
              (*z)(k, i + 1) = s * zk0 + c * zk1;
              (*z)(k, i) = c * zk0 - s * zk1;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

HermitianEigenDecomposition eig_hermitian(const ComplexMatrix& a) {
  require_hermitian(a);
  const std::size_t n = a.rows();
  Tridiagonal t = tridiagonalize(a, true);
  tridiagonal_ql(t.diag, t.off, &t.basis);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return t.diag[x] > t.diag[y]; });
  HermitianEigenDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    out.values[col] = t.diag[order[col]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, col) = t.basis(i, order[col]);
  }
  return out;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& a) {
  require_hermitian(a);
  Tridiagonal t = tridiagonalize(a, false);
  tridiagonal_ql(t.diag, t.off, nullptr);
  std::sort(t.diag.begin(), t.diag.end(), std::greater<>());
  return t.diag;
}

}  // namespace iumps
