#include <charconv>
#include <fstream>
#include <sstream>

#include "iumps/cli.hpp"
#include "json.hpp"

namespace iumps::cli {

namespace {

template <class T>
void take(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
  static const char* known[] = {"d_s",       "d_M",         "len_a",          "len_c",
                                "b_max_limit", "k",         "n_instances",    "case",
                                "master_seed", "threshold", "peripheral_tol", "burn_in",
                                "jobs",      "check_bounds", "kraus",         "output_dir"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : known) ok = ok || item.key() == key;
    if (!ok) throw Error(ErrorKind::InvalidArgument, "config: unknown key '" + item.key() + "'");
  }
  RunConfig c;
  try {
    take(j, "d_s", c.d_s);
    take(j, "d_M", c.d_M);
    take(j, "len_a", c.len_a);
    take(j, "len_c", c.len_c);
    take(j, "b_max_limit", c.b_max_limit);
    take(j, "k", c.k);
    if (j.contains("n_instances")) c.n_instances = j.at("n_instances").get<std::size_t>();
    if (j.contains("case")) {
      const auto& v = j.at("case");
      c.case_name = v.is_number() ? std::to_string(v.get<int>()) : v.get<std::string>();
    }
    take(j, "master_seed", c.master_seed);
    take(j, "threshold", c.threshold);
    take(j, "peripheral_tol", c.peripheral_tol);
    take(j, "burn_in", c.burn_in);
    take(j, "jobs", c.jobs);
    take(j, "check_bounds", c.check_bounds);
    take(j, "kraus", c.kraus_path);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

std::string config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["d_s"] = c.d_s;
  j["d_M"] = c.d_M;
  j["len_a"] = c.len_a;
  j["len_c"] = c.len_c;
  j["b_max_limit"] = c.b_max_limit;
  j["k"] = c.k;
  if (c.n_instances) j["n_instances"] = *c.n_instances;
  j["case"] = c.case_name;
  j["master_seed"] = c.master_seed;
  j["threshold"] = c.threshold;
  j["peripheral_tol"] = c.peripheral_tol;
  j["burn_in"] = c.burn_in;
  j["check_bounds"] = c.check_bounds;
  if (!c.kraus_path.empty()) j["kraus"] = c.kraus_path;
  return j.dump(2);
}

void check_config(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (c.b_max_limit < 2 || c.b_max_limit % 2 != 0) fail("b_max_limit must be even and >= 2");
  if (c.k == 0) fail("k must be >= 1");
  if (c.len_a == 0 || c.len_a != c.len_c) fail("len_a and len_c must be equal and >= 1");
  if (c.d_s == 0 || c.d_M == 0) fail("d_s and d_M must be >= 1");
  if (c.jobs == 0) fail("jobs must be >= 1");
  if (c.n_instances && *c.n_instances == 0) fail("n_instances must be >= 1");
  if (c.case_name != "1" && c.case_name != "2" && c.case_name != "3" &&
      c.case_name != "appendix-a") {
    fail("case must be 1, 2, 3 or appendix-a");
  }
}

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BenchmarkFailed:
      return kExitBenchmark;
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotCanonical:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::NoFixedPoint:
    case ErrorKind::EmptyCurve:
      return kExitDegenerate;
    default:
      return kExitNumerical;
  }
}

IuMps config_instance(const RunConfig& c, std::size_t id) {
  if (!c.kraus_path.empty()) {
    std::ifstream in(c.kraus_path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + c.kraus_path);
    std::ostringstream text;
    text << in.rdbuf();
    return make_iumps(kraus_from_json(text.str()), c.peripheral_tol);
  }
  if (c.case_name == "appendix-a") return make_iumps(appendix_a_kraus(), c.peripheral_tol);
  RandomStream stream(c.master_seed, id);
  return make_iumps(build_case(case_tag_from_string(c.case_name), c.d_s, c.d_M, stream),
                    c.peripheral_tol);
}

}  // namespace iumps::cli
