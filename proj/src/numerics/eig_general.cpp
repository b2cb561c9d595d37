#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "iumps/error.hpp"
#include "iumps/numerics.hpp"

namespace iumps {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Diagonal similarity scaling by powers of two so that row and column norms
// are comparable. Returns the scale factors d with B = D^-1 A D.
std::vector<double> balance(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<double> scale(n, 1.0);
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(h(j, i));
        r += abs1(h(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        scale[i] *= f;
        for (std::size_t j = 0; j < n; ++j) h(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) h(j, i) *= f;
      }
    }
  }
  return scale;
}

// Householder reduction to upper Hessenberg form; h <- Q^dag h Q, returns Q.
ComplexMatrix reduce_to_hessenberg(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  ComplexMatrix q = ComplexMatrix::identity(n);
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), Complex{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // h <- (I - 2 v v^dag) h
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
    }
    // h <- h (I - 2 v v^dag), q <- q (I - 2 v v^dag)
    for (ComplexMatrix* m : {&h, &q}) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex s = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) s += (*m)(i, j) * v[j];
        s *= 2.0;
        for (std::size_t j = k + 1; j < n; ++j) (*m)(i, j) -= s * std::conj(v[j]);
      }
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return q;
}

struct Rotation {
  double c;
  Complex s;
};

// Unitary G = [[c, s], [-conj(s), c]] with G [x; y] = [r; 0].
Rotation make_rotation(Complex x, Complex y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, 0.0};
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double norm = std::hypot(ax, ay);
  return {ax / norm, (x / ax) * std::conj(y) / norm};
}

// Single-shift complex QR iteration on an upper Hessenberg matrix. On exit h
// is upper triangular and z accumulates the unitary similarity.
void schur_reduce(ComplexMatrix& h, ComplexMatrix& z, std::size_t iteration_cap) {
  const std::size_t n = h.rows();
  if (n == 0) return;
  std::size_t total = 0;
  std::size_t since_deflation = 0;
  std::size_t hi = n - 1;
  while (hi > 0) {
    std::size_t lo = hi;
    while (lo > 0) {
      double scale = abs1(h(lo - 1, lo - 1)) + abs1(h(lo, lo));
      if (scale == 0.0) {
        for (std::size_t i = 0; i <= hi; ++i) scale = std::max(scale, abs1(h(i, i)));
      }
      if (abs1(h(lo, lo - 1)) <= kEps * scale || abs1(h(lo, lo - 1)) < kTiny) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++total > iteration_cap) {
      throw Error(ErrorKind::NonConvergence,
                  "QR iteration did not converge within " + std::to_string(iteration_cap) +
                      " sweeps");
    }
    ++since_deflation;

    Complex shift;
    if (since_deflation % 10 == 0) {
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      // Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
      const Complex a = h(hi - 1, hi - 1);
      const Complex b = h(hi - 1, hi);
      const Complex c = h(hi, hi - 1);
      const Complex d = h(hi, hi);
      const Complex half = 0.5 * (a - d);
      Complex disc = std::sqrt(half * half + b * c);
      const Complex mu1 = d + half + disc;
      const Complex mu2 = d + half - disc;
      shift = std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
    }

    Complex x = h(lo, lo) - shift;
    Complex y = h(lo + 1, lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Rotation g = make_rotation(x, y);
      const std::size_t first_col = k > lo ? k - 1 : lo;
      for (std::size_t j = first_col; j < n; ++j) {
        const Complex t1 = h(k, j);
        const Complex t2 = h(k + 1, j);
        h(k, j) = g.c * t1 + g.s * t2;
        h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
      const std::size_t last_row = std::min(k + 2, hi);
      for (std::size_t i = 0; i <= last_row; ++i) {
        const Complex t1 = h(i, k);
        const Complex t2 = h(i, k + 1);
        h(i, k) = t1 * g.c + t2 * std::conj(g.s);
        h(i, k + 1) = -t1 * g.s + t2 * g.c;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const Complex t1 = z(i, k);
        const Complex t2 = z(i, k + 1);
        z(i, k) = t1 * g.c + t2 * std::conj(g.s);
        z(i, k + 1) = -t1 * g.s + t2 * g.c;
      }
      if (k > lo) h(k + 1, k - 1) = 0.0;
      if (k + 1 < hi) {
        x = h(k + 1, k);
        y = h(k + 2, k);
      }
    }
  }
}

// Eigenvectors of the upper triangular t by back-substitution; columns are in
// the order of the diagonal of t.
ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
  const std::size_t n = t.rows();
  ComplexMatrix x(n, n);
  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) tnorm = std::max(tnorm, abs1(t(i, j)));
  const double smallnum = kTiny * static_cast<double>(n) / kEps;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex lambda = t(k, k);
    const double smin = std::max({kEps * abs1(lambda), kEps * tnorm * 1e-3, smallnum});
    std::vector<Complex> col(k + 1);
    col[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) {
      Complex s = 0.0;
      for (std::size_t j = i + 1; j <= k; ++j) s += t(i, j) * col[j];
      Complex denom = t(i, i) - lambda;
      if (abs1(denom) < smin) denom = smin;
      col[i] = -s / denom;
      // Rescale to keep intermediate growth bounded.
      const double big = abs1(col[i]);
      if (big > 1e100) {
        for (std::size_t j = i; j <= k; ++j) col[j] /= big;
      }
    }
    for (std::size_t i = 0; i <= k; ++i) x(i, k) = col[i];
  }
  return x;
}

}  // namespace

std::vector<std::size_t> spectrum_order(std::span<const Complex> values, double tie_tolerance) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) > std::abs(values[b]);
  });
  // Within clusters of (numerically) equal magnitude, order by Re then Im.
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    const double head = std::abs(values[order[start]]);
    while (end < order.size() && head - std::abs(values[order[end]]) <= tie_tolerance) ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       if (values[a].real() != values[b].real())
                         return values[a].real() > values[b].real();
                       return values[a].imag() > values[b].imag();
                     });
    start = end;
  }
  return order;
}

EigenDecomposition eig_general(const ComplexMatrix& a, const EigOptions& options) {
  if (!a.is_square()) throw Error(ErrorKind::InvalidArgument, "eig_general needs a square matrix");
  if (a.rows() > 64) throw Error(ErrorKind::TooLarge, "eig_general supports dimension <= 64");
  if (!a.all_finite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  const std::size_t n = a.rows();
  EigenDecomposition out;
  if (n == 0) return out;

  ComplexMatrix h = a;
  const std::vector<double> scale = balance(h);
  ComplexMatrix z = reduce_to_hessenberg(h);
  schur_reduce(h, z, options.iterations_per_dim * n);

  const ComplexMatrix tri_vectors = triangular_eigenvectors(h);
  ComplexMatrix vectors = z * tri_vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vectors(i, j) *= scale[i];

  std::vector<Complex> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = h(k, k);
  const std::vector<std::size_t> order = spectrum_order(values);

  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = values[src];
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(vectors(i, src));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, col) = vectors(i, src) / norm;
  }

  std::vector<Complex> v(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) v[i] = out.vectors(i, col);
    std::vector<Complex> av = a * std::span<const Complex>(v);
    for (std::size_t i = 0; i < n; ++i) av[i] -= out.values[col] * v[i];
    out.residual = std::max(out.residual, euclidean_norm(av));
  }
  const double anorm = a.frobenius_norm();
  if (out.residual > options.residual_tolerance * std::max(anorm, kTiny)) {
    throw Error(ErrorKind::NonConvergence,
                "eigenvector residual " + std::to_string(out.residual) + " exceeds tolerance");
  }
  return out;
}

}  // namespace iumps
