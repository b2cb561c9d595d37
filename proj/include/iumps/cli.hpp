#pragma once

// Command-line front end. Every command reads a RunConfig, writes its files
// under output_dir and returns a process exit code.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iumps/error.hpp"
#include "iumps/experiments.hpp"

namespace iumps::cli {

constexpr int kExitOk = 0;
constexpr int kExitBenchmark = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitDegenerate = 3;

struct RunConfig {
  std::size_t d_s = 3;
  std::size_t d_M = 4;
  std::size_t len_a = 1;
  std::size_t len_c = 1;
  std::size_t b_max_limit = 40;
  unsigned k = 12;
  /// Unset means the per-command default (1 for spectrum/scan/bound,
  /// 500 for ensemble, 20000 for gapstats).
  std::optional<std::size_t> n_instances;
  /// "1", "2", "3" or "appendix-a".
  std::string case_name = "1";
  std::uint64_t master_seed = 0;
  double threshold = kSupportThreshold;
  double peripheral_tol = kPeripheralTolerance;
  std::size_t burn_in = 3;
  std::size_t jobs = 1;
  bool check_bounds = false;
  /// Explicit Kraus JSON; overrides case_name when set.
  std::string kraus_path;
  std::filesystem::path output_dir = ".";
};

/// Flat JSON object; unknown keys are InvalidArgument.
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);
/// Shape checks (even b_max_limit, k >= 1, known case name, ...).
void check_config(const RunConfig& config);

/// 17 significant digits, '.' separator, independent of the locale.
std::string format_real(double x);

int exit_code_for(ErrorKind kind);

/// Instance `id` of the configured case (or the explicit Kraus file).
IuMps config_instance(const RunConfig& config, std::size_t id);

int cmd_spectrum(const RunConfig& config, std::ostream& log);
int cmd_scan(const RunConfig& config, std::ostream& log);
int cmd_ensemble(const RunConfig& config, std::ostream& log);
int cmd_benchmark(const RunConfig& config, std::ostream& log, double i_th_reference);
int cmd_bound(const RunConfig& config, std::ostream& log);
int cmd_gapstats(const RunConfig& config, std::ostream& log);

/// Parses argv, dispatches, and maps library errors onto exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace iumps::cli
