#pragma once

// Decay scans, ensemble statistics, the fixed benchmark instance and
// transfer-spectrum gap statistics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iumps/bounds.hpp"
#include "iumps/entropy.hpp"

namespace iumps {

struct CurvePoint {
  std::size_t b_len = 0;
  double qcmi = 0.0;
  double qmi = 0.0;
  double f = 0.0;  ///< ln(qcmi) / (2 ln(1/nu_gap))
};

struct DecayCurve {
  std::int64_t instance_id = 0;
  CaseTag case_tag = CaseTag::Explicit;
  double nu_gap = 0.0;
  std::vector<CurvePoint> points;
  std::size_t b_max = 0;
  /// QCMI at the first |B| that failed the stopping rule, if one was evaluated.
  std::optional<double> stop_qcmi;
};

/// Evaluates |B| = 2, 4, ... while QCMI > 10^-k, up to b_max_limit.
/// EmptyCurve if QCMI <= 10^-k already at |B| = 2.
DecayCurve scan_instance(const IuMps& mps, const RegionSpec& region, std::size_t b_max_limit,
                         unsigned k, double threshold = kSupportThreshold,
                         std::int64_t instance_id = 0);

/// (b_len - b_max, f(b_len) - f(b_max)) for every point.
std::vector<std::pair<double, double>> shift_graph(const DecayCurve& curve);

/// Negated least-squares slope of f against b_len over points with index
/// >= burn_in. TooFewPoints below burn_in + 2 points.
double extract_rate(const DecayCurve& curve, std::size_t burn_in = 3);

constexpr std::size_t kHistogramSize = 20;
using Histogram = std::array<std::array<std::uint64_t, kHistogramSize>, kHistogramSize>;

/// Bin H_{i,j}: x in (-(2i+1), -(2i-1)), y in [2j, 2j+2). Returns false when
/// the point falls outside the 20 x 20 grid.
bool histogram_bin(double x, double y, std::size_t& i, std::size_t& j);

struct CaseMix {
  double case1 = 1.0;
  double case2 = 0.0;
  double case3 = 0.0;
};

/// Deterministic stratified assignment: instance i of n gets the case whose
/// cumulative share contains (i + 0.5) / n.
CaseTag case_for_instance(const CaseMix& mix, std::size_t i, std::size_t n);

struct EnsembleConfig {
  std::size_t n = 500;
  CaseMix mix;
  RegionSpec region;
  std::uint64_t master_seed = 0;
  std::size_t d_s = 3;
  std::size_t d_M = 4;
  std::size_t b_max_limit = 40;
  unsigned k = 12;
  std::size_t burn_in = 3;
  double threshold = kSupportThreshold;
  double peripheral_tol = kPeripheralTolerance;
  std::size_t jobs = 1;
  /// Also evaluate the bound constants and compare them with every scanned QCMI.
  bool check_bounds = false;
};

struct InstanceResult {
  std::size_t instance_id = 0;
  CaseTag case_tag = CaseTag::Case1;
  std::optional<DecayCurve> curve;
  std::optional<double> rate;
  /// Smallest QCMI evaluated, including the point that stopped the scan.
  std::optional<double> min_qcmi;
  std::optional<BoundConstants> constants;
  /// Number of scanned |B| where the measured QCMI exceeded the bound.
  std::size_t bound_violations = 0;
  std::string error;  ///< "Kind: message" when the instance was skipped
  std::string rate_error;
};

struct EnsembleSummary {
  std::size_t n_instances = 0;
  std::vector<InstanceResult> instances;  ///< ordered by instance_id
  std::vector<double> rates;              ///< instance order
  Histogram histogram{};
  std::uint64_t total_shifted_points = 0;
  std::uint64_t out_of_bin = 0;
  std::vector<double> cdf_all;   ///< ascending
  std::vector<double> cdf_full;  ///< ascending, b_max == b_max_limit only
  std::size_t skipped_instances = 0;
  std::size_t skipped_rates = 0;
};

/// Builds the instance for stream index i of a config.
IuMps ensemble_instance(const EnsembleConfig& config, std::size_t i);

/// Instance i uses RandomStream(master_seed, i); per-instance failures are
/// recorded and skipped.
EnsembleSummary run_ensemble(const EnsembleConfig& config);

/// Limit of the benchmark instance's mutual information for |A| = |C| = 1.
double benchmark_i_th();

struct BenchmarkCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct BenchmarkReport {
  double i_th = 0.0;
  double qmi_26 = 0.0;
  double nu_gap = 0.0;
  std::vector<double> qmi_curve;  ///< |B| = 2, 4, ..., 26
  DecayCurve qcmi_curve;
  double rate = 0.0;
  double last_slope = 0.0;
  std::vector<BenchmarkCheck> checks;
  bool passed() const;
  /// First failing check, if any.
  const BenchmarkCheck* first_failure() const;
};

/// Runs the fixed-instance checks; `i_th_reference` is the value QMI(26) is
/// compared with (overridable for negative controls).
BenchmarkReport benchmark_appendix_a(double i_th_reference = benchmark_i_th());

enum class Family { First, Second };

/// Analytic one-parameter Kraus sets with d_s = 3, d_M = 4 (C^4 = C^2 (x) C^2,
/// the operators act as identity on the second factor). Kraus order s = 1, 0, -1.
/// First: sqrt(b)|-><+|, sqrt(1-b) I, -sqrt(b)|+><-|.
/// Second: a|-><+|, c(|-><-| - |+><+|), -a|+><-| with a, c linear in b
/// between (sqrt(2/3), 1/sqrt3) and (sqrt3/2, 1/2), rescaled to a^2 + c^2 = 1.
KrausSet analytic_family(Family which, double beta);

/// Distinct eigenvalue magnitudes (descending), clustered at `tolerance`.
std::vector<double> magnitude_levels(const std::vector<Complex>& values,
                                     double tolerance = kDegeneracyTolerance);

struct GapStatistics {
  std::size_t n = 0;
  std::uint64_t master_seed = 0;
  /// Each list sorted ascending: |1 - |nu_1||, ||nu_1| - |nu_2||, ||nu_2| - |nu_3||.
  std::vector<double> one_minus_nu1;
  std::vector<double> nu1_minus_nu2;
  std::vector<double> nu2_minus_nu3;
  std::size_t failures = 0;
};

GapStatistics gap_statistics(std::size_t n, std::uint64_t master_seed, std::size_t d_s = 3,
                             std::size_t d_M = 4, std::size_t jobs = 1);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace iumps
