#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "iumps/cli.hpp"

namespace iumps::cli {

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, entropies and QCMI decay of infinite uniform MPS"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> case_name;
  std::optional<std::size_t> n, b_max, jobs;
  std::optional<unsigned> k;
  std::optional<std::string> out_dir, kraus;
  std::optional<double> i_th_override;
  bool check_bounds = false;

  app.add_option("--config", config_path, "flat JSON config file");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--case", case_name, "1, 2, 3 or appendix-a");
  app.add_option("--n", n, "number of instances");
  app.add_option("--b-max", b_max, "largest |B| (even)");
  app.add_option("--k", k, "stop once QCMI <= 10^-k");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--kraus", kraus, "explicit Kraus set (JSON)");
  app.add_flag("--check-bounds", check_bounds, "compare every QCMI with the bound (ensemble)");
  app.add_option("--i-th-override", i_th_override)->group("");

  const char* names[] = {"spectrum", "scan", "ensemble", "benchmark", "bound", "gapstats"};
  const char* help[] = {"transfer-matrix spectrum and gap",
                        "QCMI/QMI decay curve",
                        "ensemble decay-rate statistics",
                        "fixed-instance checks",
                        "bound constants and sufficient |B| as JSON",
                        "spectral gap statistics of Case-1 samples"};
  for (std::size_t i = 0; i < 6; ++i) app.add_subcommand(names[i], help[i])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitDegenerate;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + config_path);
      std::ostringstream text;
      text << in.rdbuf();
      c = config_from_json(text.str());
    }
    if (seed) c.master_seed = *seed;
    if (case_name) c.case_name = *case_name;
    if (n) c.n_instances = *n;
    if (b_max) c.b_max_limit = *b_max;
    if (k) c.k = *k;
    if (jobs) c.jobs = *jobs;
    if (out_dir) c.output_dir = *out_dir;
    if (kraus) c.kraus_path = *kraus;
    if (check_bounds) c.check_bounds = true;
    check_config(c);

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "spectrum") return cmd_spectrum(c, out);
    if (cmd == "scan") return cmd_scan(c, out);
    if (cmd == "ensemble") return cmd_ensemble(c, out);
    if (cmd == "benchmark") return cmd_benchmark(c, out, i_th_override.value_or(benchmark_i_th()));
    if (cmd == "bound") return cmd_bound(c, out);
    return cmd_gapstats(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace iumps::cli
