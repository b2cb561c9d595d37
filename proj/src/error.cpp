#include "iumps/error.hpp"

namespace iumps {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotCanonical: return "NotCanonical";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::NoFixedPoint: return "NoFixedPoint";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NearDegenerate: return "NearDegenerate";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::BenchmarkFailed: return "BenchmarkFailed";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace iumps
