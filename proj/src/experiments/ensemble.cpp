#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "iumps/error.hpp"
#include "iumps/experiments.hpp"

namespace iumps {

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

CaseTag case_for_instance(const CaseMix& mix, std::size_t i, std::size_t n) {
  const double total = mix.case1 + mix.case2 + mix.case3;
  if (!(total > 0.0) || mix.case1 < 0.0 || mix.case2 < 0.0 || mix.case3 < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "case mix needs nonnegative shares with a positive sum");
  }
  const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n) * total;
  if (u < mix.case1) return CaseTag::Case1;
  if (u < mix.case1 + mix.case2) return CaseTag::Case2;
  return mix.case3 > 0.0 ? CaseTag::Case3 : (mix.case2 > 0.0 ? CaseTag::Case2 : CaseTag::Case1);
}

IuMps ensemble_instance(const EnsembleConfig& config, std::size_t i) {
  RandomStream stream(config.master_seed, i);
  const CaseTag tag = case_for_instance(config.mix, i, config.n);
  return make_iumps(build_case(tag, config.d_s, config.d_M, stream), config.peripheral_tol);
}

namespace {

InstanceResult run_instance(const EnsembleConfig& config, std::size_t i) {
  InstanceResult result;
  result.instance_id = i;
  result.case_tag = case_for_instance(config.mix, i, config.n);
  try {
    const IuMps mps = ensemble_instance(config, i);
    DecayCurve curve = scan_instance(mps, config.region, config.b_max_limit, config.k,
                                     config.threshold, static_cast<std::int64_t>(i));
    double lowest = curve.stop_qcmi.value_or(curve.points.front().qcmi);
    for (const auto& p : curve.points) lowest = std::min(lowest, p.qcmi);
    result.min_qcmi = lowest;
    try {
      result.rate = extract_rate(curve, config.burn_in);
    } catch (const Error& e) {
      result.rate_error = e.what();
    }
    if (config.check_bounds) {
      try {
        result.constants = jordan_constants(mps);
        for (const auto& p : curve.points)
          if (p.qcmi > theorem1_bound(*result.constants, p.b_len)) ++result.bound_violations;
        if (curve.stop_qcmi &&
            *curve.stop_qcmi > theorem1_bound(*result.constants, curve.b_max + 2)) {
          ++result.bound_violations;
        }
      } catch (const Error&) {
        // Constants are not computable (K > 0 suspected); the instance is not compared.
      }
    }
    result.curve = std::move(curve);
  } catch (const Error& e) {
    result.error = e.what();
  }
  return result;
}

}  // namespace

EnsembleSummary run_ensemble(const EnsembleConfig& config) {
  if (config.n == 0) throw Error(ErrorKind::InvalidArgument, "ensemble needs n >= 1");
  EnsembleSummary summary;
  summary.n_instances = config.n;
  summary.instances.resize(config.n);
  parallel_for(config.n, config.jobs,
               [&](std::size_t i) { summary.instances[i] = run_instance(config, i); });

  for (const InstanceResult& r : summary.instances) {
    if (!r.curve) {
      ++summary.skipped_instances;
      continue;
    }
    for (const auto& [x, y] : shift_graph(*r.curve)) {
      ++summary.total_shifted_points;
      std::size_t bi = 0, bj = 0;
      if (histogram_bin(x, y, bi, bj)) {
        ++summary.histogram[bi][bj];
      } else {
        ++summary.out_of_bin;
      }
    }
    if (!r.rate) {
      ++summary.skipped_rates;
      continue;
    }
    summary.rates.push_back(*r.rate);
    summary.cdf_all.push_back(*r.rate);
    if (r.curve->b_max == config.b_max_limit) summary.cdf_full.push_back(*r.rate);
  }
  std::sort(summary.cdf_all.begin(), summary.cdf_all.end());
  std::sort(summary.cdf_full.begin(), summary.cdf_full.end());
  return summary;
}

GapStatistics gap_statistics(std::size_t n, std::uint64_t master_seed, std::size_t d_s,
                             std::size_t d_M, std::size_t jobs) {
  GapStatistics stats;
  stats.n = n;
  stats.master_seed = master_seed;
  struct Triple {
    bool ok = false;
    double a = 0.0, b = 0.0, c = 0.0;
  };
  std::vector<Triple> rows(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    try {
      RandomStream stream(master_seed, i);
      const TransferMatrix t = transfer_matrix(build_case1(d_s, d_M, stream));
      const auto& v = t.spectrum.values;
      if (v.size() < 3) return;
      const double m1 = std::abs(v[0]), m2 = std::abs(v[1]), m3 = std::abs(v[2]);
      rows[i] = {true, std::abs(1.0 - m1), std::abs(m1 - m2), std::abs(m2 - m3)};
    } catch (const Error&) {
    }
  });
  for (const Triple& r : rows) {
    if (!r.ok) {
      ++stats.failures;
      continue;
    }
    stats.one_minus_nu1.push_back(r.a);
    stats.nu1_minus_nu2.push_back(r.b);
    stats.nu2_minus_nu3.push_back(r.c);
  }
  std::sort(stats.one_minus_nu1.begin(), stats.one_minus_nu1.end());
  std::sort(stats.nu1_minus_nu2.begin(), stats.nu1_minus_nu2.end());
  std::sort(stats.nu2_minus_nu3.begin(), stats.nu2_minus_nu3.end());
  return stats;
}

}  // namespace iumps
