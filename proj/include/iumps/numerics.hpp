#pragma once

// Dense complex linear algebra for the small matrices used throughout the
// library (bond dimension squared, so 16x16 at the default parameters), plus
// reproducible random streams and Haar sampling.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace iumps {

using Complex = std::complex<double>;

/// Row-major dense complex matrix with value semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  /// Row-wise literal, e.g. {{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  /// Columns [first, first + count).
  ComplexMatrix column_block(std::size_t first, std::size_t count) const;

  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
std::vector<Complex> operator*(const ComplexMatrix& m, std::span<const Complex> v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Hermitian part (a + a^dag) / 2.
ComplexMatrix hermitize(const ComplexMatrix& a);
/// max |a - b| entrywise.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double euclidean_norm(std::span<const Complex> v);

/// Solves a x = b (b may hold several right-hand sides) by LU with partial
/// pivoting. Throws InvalidArgument on an exactly singular matrix.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

/// a^n by binary exponentiation; a^0 is the identity.
ComplexMatrix mat_power(const ComplexMatrix& a, std::size_t n);

struct EigenDecomposition {
  std::vector<Complex> values;  ///< descending |value|, then Re, then Im
  ComplexMatrix vectors;        ///< unit-norm right eigenvectors as columns
  double residual = 0.0;        ///< max_i |A v_i - value_i v_i|_2
};

struct HermitianEigenDecomposition {
  std::vector<double> values;  ///< descending
  ComplexMatrix vectors;       ///< unitary, eigenvectors as columns
};

struct EigOptions {
  /// Relative residual bound checked after the solve.
  double residual_tolerance = 1e-11;
  /// Total QR sweeps allowed per unit of dimension.
  std::size_t iterations_per_dim = 100;
};

/// Full spectrum of a general square complex matrix: balancing, Householder
/// reduction to Hessenberg form, single-shift complex QR to Schur form, and
/// back-substitution for the eigenvectors.
EigenDecomposition eig_general(const ComplexMatrix& a, const EigOptions& options = {});

/// Eigendecomposition of a Hermitian matrix via Householder tridiagonalization
/// and implicit QL. Throws NotHermitian if |a - a^dag| > 1e-10 |a| (Frobenius).
HermitianEigenDecomposition eig_hermitian(const ComplexMatrix& a);
/// Eigenvalues only (descending); same precondition as eig_hermitian.
std::vector<double> eigvals_hermitian(const ComplexMatrix& a);

/// Sorts eigenvalues by descending magnitude; values whose magnitudes agree to
/// within `tie_tolerance` are ordered by descending real then imaginary part.
/// Returns the permutation applied.
std::vector<std::size_t> spectrum_order(std::span<const Complex> values,
                                        double tie_tolerance = 1e-13);

/// Reproducible random stream identified by (master_seed, stream_index).
/// Streams are value types: copy one to fork it, never share one between
/// threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  double normal();
  double uniform();
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  Complex complex_normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Haar-distributed unitary from a complex Ginibre matrix: QR factorization
/// with the column phases fixed so that diag(R) is real positive.
ComplexMatrix haar_unitary(std::size_t dim, RandomStream& stream);

}  // namespace iumps
