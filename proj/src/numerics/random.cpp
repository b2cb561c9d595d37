#include <cmath>

#include "iumps/error.hpp"
#include "iumps/numerics.hpp"

namespace iumps {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(mix_seed(master_seed, stream_index)) {}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::uniform() { return uniform_(engine_); }

Complex RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

ComplexMatrix haar_unitary(std::size_t dim, RandomStream& stream) {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "haar_unitary needs dim >= 1");
  ComplexMatrix r(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) r(i, j) = stream.complex_normal();

  // Householder QR: r <- H_{n-1} ... H_0 g, q = H_0 ... H_{n-1}.
  ComplexMatrix q = ComplexMatrix::identity(dim);
  std::vector<Complex> v(dim);
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    double colnorm = 0.0;
    for (std::size_t i = k; i < dim; ++i) colnorm += std::norm(r(i, k));
    colnorm = std::sqrt(colnorm);
    const Complex x0 = r(k, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * colnorm;
    std::fill(v.begin(), v.end(), Complex{});
    v[k] = x0 - alpha;
    for (std::size_t i = k + 1; i < dim; ++i) v[i] = r(i, k);
    const double vnorm = euclidean_norm(std::span<const Complex>(v).subspan(k));
    if (vnorm == 0.0) continue;
    for (std::size_t i = k; i < dim; ++i) v[i] /= vnorm;
    for (std::size_t j = k; j < dim; ++j) {
      Complex s = 0.0;
      for (std::size_t i = k; i < dim; ++i) s += std::conj(v[i]) * r(i, j);
      s *= 2.0;
      for (std::size_t i = k; i < dim; ++i) r(i, j) -= v[i] * s;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      Complex s = 0.0;
      for (std::size_t j = k; j < dim; ++j) s += q(i, j) * v[j];
      s *= 2.0;
      for (std::size_t j = k; j < dim; ++j) q(i, j) -= s * std::conj(v[j]);
    }
  }

  // Q diag(r_kk / |r_kk|) makes diag(R) real positive.
  for (std::size_t k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    const Complex phase = mag == 0.0 ? Complex(1.0) : r(k, k) / mag;
    for (std::size_t i = 0; i < dim; ++i) q(i, k) *= phase;
  }
  return q;
}

}  // namespace iumps
