#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iumps {

enum class ErrorKind {
  InvalidArgument,
  NonConvergence,
  NotHermitian,
  NotCanonical,
  DegenerateSpectrum,
  NoFixedPoint,
  NotPositive,
  TooLarge,
  NearDegenerate,
  Unsupported,
  EmptyCurve,
  TooFewPoints,
  BenchmarkFailed,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for every failure raised by the library; the kind
/// lets callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace iumps
