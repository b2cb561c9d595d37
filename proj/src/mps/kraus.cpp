#include <cmath>
#include <string>

#include "iumps/error.hpp"
#include "iumps/mps.hpp"

namespace iumps {

std::string_view to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::Case1: return "Case1";
    case CaseTag::Case2: return "Case2";
    case CaseTag::Case3: return "Case3";
    case CaseTag::Explicit: return "Explicit";
  }
  return "Explicit";
}

CaseTag case_tag_from_string(std::string_view text) {
  if (text == "Case1" || text == "1") return CaseTag::Case1;
  if (text == "Case2" || text == "2") return CaseTag::Case2;
  if (text == "Case3" || text == "3") return CaseTag::Case3;
  if (text == "Explicit") return CaseTag::Explicit;
  throw Error(ErrorKind::InvalidArgument, "unknown case tag '" + std::string(text) + "'");
}

double canonical_error(const KrausSet& kraus) {
  ComplexMatrix sum(kraus.d_M, kraus.d_M);
  for (const auto& m : kraus.matrices) sum += m.adjoint() * m;
  return max_abs_diff(sum, ComplexMatrix::identity(kraus.d_M));
}

void validate(const KrausSet& kraus, double tolerance) {
  if (kraus.d_s == 0 || kraus.d_M == 0) {
    throw Error(ErrorKind::InvalidArgument, "d_s and d_M must be positive");
  }
  if (kraus.matrices.size() != kraus.d_s) {
    throw Error(ErrorKind::InvalidArgument, "expected d_s Kraus matrices");
  }
  for (const auto& m : kraus.matrices) {
    if (m.rows() != kraus.d_M || m.cols() != kraus.d_M) {
      throw Error(ErrorKind::InvalidArgument, "Kraus matrix is not d_M x d_M");
    }
    if (!m.all_finite()) throw Error(ErrorKind::InvalidArgument, "non-finite Kraus entry");
  }
  const double err = canonical_error(kraus);
  if (err > tolerance) {
    throw Error(ErrorKind::NotCanonical,
                "|sum M^dag M - I|_max = " + std::to_string(err) + " exceeds tolerance");
  }
}

KrausSet build_case1(std::size_t d_s, std::size_t d_M, RandomStream& stream) {
  if (d_s == 0 || d_M == 0) throw Error(ErrorKind::InvalidArgument, "d_s and d_M must be positive");
  const ComplexMatrix u = haar_unitary(d_s * d_M, stream);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d_s));
  KrausSet out{d_s, d_M, {}, CaseTag::Case1};
  for (std::size_t s = 0; s < d_s; ++s) {
    ComplexMatrix m(d_M, d_M);
    for (std::size_t i = 0; i < d_M; ++i)
      for (std::size_t j = 0; j < d_M; ++j) {
        Complex acc = 0.0;
        for (std::size_t sp = 0; sp < d_s; ++sp) acc += u(s * d_M + i, sp * d_M + j);
        m(i, j) = norm * acc;
      }
    out.matrices.push_back(std::move(m));
  }
  return out;
}

namespace {

KrausSet two_block(std::size_t d_s, std::size_t d_M, RandomStream& stream, bool anti_diagonal) {
  if (d_M % 2 != 0) throw Error(ErrorKind::InvalidArgument, "d_M must be even for Cases 2 and 3");
  const std::size_t h = d_M / 2;
  const KrausSet first = build_case1(d_s, h, stream);
  const KrausSet second = build_case1(d_s, h, stream);
  KrausSet out{d_s, d_M, {}, anti_diagonal ? CaseTag::Case3 : CaseTag::Case2};
  for (std::size_t s = 0; s < d_s; ++s) {
    ComplexMatrix m(d_M, d_M);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        if (anti_diagonal) {
          m(i, h + j) = first.matrices[s](i, j);
          m(h + i, j) = second.matrices[s](i, j);
        } else {
          m(i, j) = first.matrices[s](i, j);
          m(h + i, h + j) = second.matrices[s](i, j);
        }
      }
    out.matrices.push_back(std::move(m));
  }
  return out;
}

}  // namespace

KrausSet build_case2(std::size_t d_s, std::size_t d_M, RandomStream& stream) {
  return two_block(d_s, d_M, stream, false);
}

KrausSet build_case3(std::size_t d_s, std::size_t d_M, RandomStream& stream) {
  return two_block(d_s, d_M, stream, true);
}

KrausSet build_case(CaseTag tag, std::size_t d_s, std::size_t d_M, RandomStream& stream) {
  switch (tag) {
    case CaseTag::Case1: return build_case1(d_s, d_M, stream);
    case CaseTag::Case2: return build_case2(d_s, d_M, stream);
    case CaseTag::Case3: return build_case3(d_s, d_M, stream);
    case CaseTag::Explicit: break;
  }
  throw Error(ErrorKind::InvalidArgument, "cannot sample an Explicit Kraus set");
}

KrausSet appendix_a_kraus() {
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix a1{{0, -r}, {0, 0}};
  const ComplexMatrix a2{{-r, 0}, {0, r}};
  const ComplexMatrix a3{{0, 0}, {r, 0}};
  // Second block is the first block's set cyclically shifted by one.
  const ComplexMatrix* upper[3] = {&a1, &a2, &a3};
  const ComplexMatrix* lower[3] = {&a3, &a1, &a2};
  KrausSet out{3, 4, {}, CaseTag::Case2};
  for (std::size_t s = 0; s < 3; ++s) {
    ComplexMatrix m(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        m(i, j) = (*upper[s])(i, j);
        m(2 + i, 2 + j) = (*lower[s])(i, j);
      }
    out.matrices.push_back(std::move(m));
  }
  return out;
}

ComplexMatrix apply_channel(const KrausSet& kraus, const ComplexMatrix& x) {
  ComplexMatrix out(kraus.d_M, kraus.d_M);
  for (const auto& m : kraus.matrices) out += m * x * m.adjoint();
  return out;
}

std::vector<Complex> vec(const ComplexMatrix& x) {
  return {x.entries().begin(), x.entries().end()};
}

ComplexMatrix devec(std::span<const Complex> v, std::size_t dim) {
  if (v.size() != dim * dim) throw Error(ErrorKind::InvalidArgument, "devec: length is not dim^2");
  return ComplexMatrix(dim, dim, std::vector<Complex>(v.begin(), v.end()));
}

}  // namespace iumps
