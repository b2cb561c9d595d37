#include <algorithm>
#include <cmath>
#include <fstream>

#include "iumps/cli.hpp"
#include "json.hpp"

namespace iumps::cli {

namespace {

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output_dir);
  std::ofstream out(c.output_dir / name, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + (c.output_dir / name).string());
  return out;
}

std::string optional_real(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

nlohmann::ordered_json real_or_null(const std::optional<double>& x) {
  return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
}

bool seeded(const RunConfig& c) { return c.kraus_path.empty() && c.case_name != "appendix-a"; }

std::size_t instance_count(const RunConfig& c, std::size_t fallback) {
  // Fixed instances have exactly one member.
  if (!seeded(c)) return 1;
  return c.n_instances.value_or(fallback);
}

void write_cdf(const RunConfig& c, const std::string& name, const std::vector<double>& sorted) {
  std::ofstream out = open_output(c, name);
  out << "rate,cumulative_fraction\n";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out << format_real(sorted[i]) << ','
        << format_real(static_cast<double>(i + 1) / static_cast<double>(sorted.size())) << '\n';
  }
}

}  // namespace

int cmd_spectrum(const RunConfig& c, std::ostream& log) {
  const std::size_t n = instance_count(c, 1);
  // Build everything first so a bad input leaves no partial files.
  std::vector<TransferMatrix> transfers;
  for (std::size_t id = 0; id < n; ++id) transfers.push_back(config_instance(c, id).transfer);
  std::ofstream csv = open_output(c, "spectrum.csv");
  csv << "instance_id,eig_index,re,im,abs,is_peripheral\n";
  nlohmann::ordered_json gaps = nlohmann::ordered_json::array();
  int code = kExitOk;
  for (std::size_t id = 0; id < n; ++id) {
    const TransferMatrix& t = transfers[id];
    for (std::size_t i = 0; i < t.spectrum.values.size(); ++i) {
      const Complex v = t.spectrum.values[i];
      const bool peripheral = std::find(t.peripheral_indices.begin(), t.peripheral_indices.end(),
                                        i) != t.peripheral_indices.end();
      csv << id << ',' << i << ',' << format_real(v.real()) << ',' << format_real(v.imag()) << ','
          << format_real(std::abs(v)) << ',' << (peripheral ? 1 : 0) << '\n';
    }
    nlohmann::ordered_json g;
    g["instance_id"] = id;
    g["nu_gap"] = real_or_null(t.nu_gap);
    g["peripheral_count"] = t.peripheral_indices.size();
    if (!t.nu_gap) {
      g["error"] = "DegenerateSpectrum: every eigenvalue is peripheral";
      code = kExitDegenerate;
    }
    gaps.push_back(std::move(g));
  }
  std::ofstream json = open_output(c, "gap.json");
  json << (n == 1 ? gaps[0] : gaps).dump(2) << '\n';
  log << "spectrum: " << n << " instance(s)\n";
  return code;
}

int cmd_scan(const RunConfig& c, std::ostream& log) {
  const std::size_t n = instance_count(c, 1);
  const RegionSpec region{c.len_a, 1, c.len_c};
  for (std::size_t id = 0; id < n; ++id) {
    const IuMps mps = config_instance(c, id);
    const DecayCurve curve =
        scan_instance(mps, region, c.b_max_limit, c.k, c.threshold, static_cast<std::int64_t>(id));
    std::optional<BoundConstants> constants;
    try {
      constants = jordan_constants(mps);
    } catch (const Error&) {
      // Bound column stays empty.
    }
    std::ofstream csv = open_output(c, "curve_" + std::to_string(id) + ".csv");
    csv << "b_len,qmi,qcmi,f,bound\n";
    for (const CurvePoint& p : curve.points) {
      csv << p.b_len << ',' << format_real(p.qmi) << ',' << format_real(p.qcmi) << ','
          << format_real(p.f) << ','
          << (constants ? format_real(theorem1_bound(*constants, p.b_len)) : "") << '\n';
    }
    log << "scan: instance " << id << ", nu_gap " << format_real(curve.nu_gap) << ", "
        << curve.points.size() << " points, b_max " << curve.b_max << '\n';
  }
  return kExitOk;
}

int cmd_ensemble(const RunConfig& c, std::ostream& log) {
  if (!seeded(c)) {
    throw Error(ErrorKind::InvalidArgument, "ensemble needs a random case (1, 2 or 3)");
  }
  EnsembleConfig e;
  e.n = c.n_instances.value_or(500);
  const int which = std::stoi(c.case_name);
  e.mix = {which == 1 ? 1.0 : 0.0, which == 2 ? 1.0 : 0.0, which == 3 ? 1.0 : 0.0};
  e.region = {c.len_a, 1, c.len_c};
  e.master_seed = c.master_seed;
  e.d_s = c.d_s;
  e.d_M = c.d_M;
  e.b_max_limit = c.b_max_limit;
  e.k = c.k;
  e.burn_in = c.burn_in;
  e.threshold = c.threshold;
  e.peripheral_tol = c.peripheral_tol;
  e.jobs = c.jobs;
  e.check_bounds = c.check_bounds;
  const EnsembleSummary s = run_ensemble(e);

  {
    std::ofstream csv = open_output(c, "rates.csv");
    csv << "instance_id,nu_gap,b_max,rate,n_points\n";
    for (const InstanceResult& r : s.instances) {
      if (!r.curve) continue;
      csv << r.instance_id << ',' << format_real(r.curve->nu_gap) << ',' << r.curve->b_max << ','
          << optional_real(r.rate) << ',' << r.curve->points.size() << '\n';
    }
  }
  {
    std::ofstream csv = open_output(c, "histogram.csv");
    csv << "i,j,count\n";
    for (std::size_t i = 0; i < kHistogramSize; ++i)
      for (std::size_t j = 0; j < kHistogramSize; ++j)
        csv << i << ',' << j << ',' << s.histogram[i][j] << '\n';
  }
  write_cdf(c, "cdf_all.csv", s.cdf_all);
  write_cdf(c, "cdf_full.csv", s.cdf_full);

  const auto at_least = std::count_if(s.cdf_full.begin(), s.cdf_full.end(),
                                      [](double r) { return r >= 0.95; });
  std::optional<double> min_qcmi;
  std::size_t violations = 0, with_constants = 0;
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const InstanceResult& r : s.instances) {
    if (r.min_qcmi) min_qcmi = std::min(min_qcmi.value_or(*r.min_qcmi), *r.min_qcmi);
    violations += r.bound_violations;
    if (r.constants) ++with_constants;
    if (!r.error.empty()) skipped.push_back({{"instance_id", r.instance_id}, {"error", r.error}});
  }
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(c));
  j["n_instances"] = s.n_instances;
  j["skipped_instances"] = s.skipped_instances;
  j["skipped_rates"] = s.skipped_rates;
  j["total_shifted_points"] = s.total_shifted_points;
  j["out_of_bin"] = s.out_of_bin;
  j["n_cdf_all"] = s.cdf_all.size();
  j["n_cdf_full"] = s.cdf_full.size();
  j["cdf_full_fraction_rate_ge_0.95"] =
      s.cdf_full.empty() ? nlohmann::ordered_json(nullptr)
                         : nlohmann::ordered_json(static_cast<double>(at_least) /
                                                  static_cast<double>(s.cdf_full.size()));
  j["min_qcmi"] = real_or_null(min_qcmi);
  if (c.check_bounds) {
    j["instances_with_constants"] = with_constants;
    j["bound_violations"] = violations;
  }
  j["errors"] = std::move(skipped);
  std::ofstream out = open_output(c, "summary.json");
  out << j.dump(2) << '\n';

  log << "ensemble: " << s.n_instances << " instances, " << s.skipped_instances << " skipped, "
      << s.cdf_full.size() << " reached b_max " << c.b_max_limit << '\n';
  return s.skipped_instances == s.n_instances ? kExitNumerical : kExitOk;
}

int cmd_benchmark(const RunConfig& c, std::ostream& log, double i_th_reference) {
  const BenchmarkReport r = benchmark_appendix_a(i_th_reference);
  log << "benchmark instance\n";
  log << "  I_th reference  " << format_real(r.i_th) << '\n';
  log << "  QMI(26)         " << format_real(r.qmi_26) << '\n';
  log << "  nu_gap          " << format_real(r.nu_gap) << '\n';
  log << "  sigma           I/4, normalized to trace 1 (the all-1/2 vector has trace 2)\n";
  log << "  decay rate      " << format_real(r.rate) << '\n';
  log << "  final slope     " << format_real(r.last_slope) << '\n';
  std::vector<BenchmarkCheck> checks = r.checks;

  for (double beta : {1e-3, 1e-4}) {
    const auto levels =
        magnitude_levels(transfer_matrix(analytic_family(Family::Second, beta)).spectrum.values);
    const double expected = (std::sqrt(6.0) - 2.0) / std::sqrt(3.0) * beta;
    const double diff = levels.size() >= 3 ? levels[1] - levels[2] : 0.0;
    checks.push_back({"second family beta=" + format_real(beta),
                      levels.size() >= 3 && std::abs(diff - expected) <= 10.0 * beta * beta,
                      "|nu2|-|nu3| " + format_real(diff) + ", expected " + format_real(expected)});
  }
  // Informational: the first family's level spacing is beta, not 2 beta.
  for (double beta : {0.1, 0.01}) {
    const auto levels =
        magnitude_levels(transfer_matrix(analytic_family(Family::First, beta)).spectrum.values);
    log << "  first family beta=" << format_real(beta) << " levels";
    for (double l : levels) log << ' ' << format_real(l);
    log << '\n';
  }

  const GapStatistics g = gap_statistics(200, c.master_seed, 3, 4, c.jobs);
  const double worst = g.one_minus_nu1.empty() ? 1.0 : g.one_minus_nu1.back();
  checks.push_back({"gap statistics |1-|nu1||", g.failures == 0 && worst <= 1e-12,
                    "max " + format_real(worst) + " over 200 samples"});

  const BenchmarkCheck* failed = nullptr;
  for (const auto& ch : checks) {
    log << (ch.passed ? "  PASS  " : "  FAIL  ") << ch.name << "  (" << ch.detail << ")\n";
    if (!ch.passed && !failed) failed = &ch;
  }
  if (failed) {
    log << "benchmark failed: " << failed->name << '\n';
    return kExitBenchmark;
  }
  log << "benchmark passed\n";
  return kExitOk;
}

int cmd_bound(const RunConfig& c, std::ostream& log) {
  const IuMps mps = config_instance(c, 0);
  const BoundConstants b = jordan_constants(mps);
  nlohmann::ordered_json j;
  j["k_jordan"] = b.k_jordan;
  j["d_M"] = b.d_m;
  j["nu_gap"] = b.nu_gap;
  j["sigma_min"] = b.sigma_min;
  j["cond_s"] = b.cond_s;
  j["c1"] = b.c1;
  j["c2"] = b.c2;
  j["c3"] = real_or_null(b.c3);
  j["Q"] = b.big_q;
  j["q"] = b.rate_q;
  j["D"] = b.d_cap;
  j["delta"] = real_or_null(b.delta_spec);
  j["sufficient_b"] = sufficient_b(b, mps.kraus.d_s);
  log << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_gapstats(const RunConfig& c, std::ostream& log) {
  const std::size_t n = c.n_instances.value_or(20000);
  const GapStatistics g = gap_statistics(n, c.master_seed, c.d_s, c.d_M, c.jobs);
  {
    std::ofstream csv = open_output(c, "gapstats.csv");
    csv << "rank,one_minus_nu1,nu1_minus_nu2,nu2_minus_nu3\n";
    for (std::size_t i = 0; i < g.one_minus_nu1.size(); ++i) {
      csv << i << ',' << format_real(g.one_minus_nu1[i]) << ',' << format_real(g.nu1_minus_nu2[i])
          << ',' << format_real(g.nu2_minus_nu3[i]) << '\n';
    }
  }
  auto range = [](const std::vector<double>& v) {
    nlohmann::ordered_json r;
    r["min"] = v.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v.front());
    r["max"] = v.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v.back());
    return r;
  };
  nlohmann::ordered_json j;
  j["n"] = g.n;
  j["master_seed"] = g.master_seed;
  j["d_s"] = c.d_s;
  j["d_M"] = c.d_M;
  j["failures"] = g.failures;
  j["one_minus_nu1"] = range(g.one_minus_nu1);
  j["nu1_minus_nu2"] = range(g.nu1_minus_nu2);
  j["nu2_minus_nu3"] = range(g.nu2_minus_nu3);
  std::ofstream out = open_output(c, "gapstats.json");
  out << j.dump(2) << '\n';
  log << "gapstats: " << g.one_minus_nu1.size() << " samples, max |1-|nu1|| "
      << (g.one_minus_nu1.empty() ? "n/a" : format_real(g.one_minus_nu1.back())) << '\n';
  return g.failures == n ? kExitNumerical : kExitOk;
}

}  // namespace iumps::cli
