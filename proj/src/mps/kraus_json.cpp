#include <string>

#include "iumps/error.hpp"
#include "iumps/mps.hpp"
#include "json.hpp"

namespace iumps {

std::string kraus_to_json(const KrausSet& kraus) {
  nlohmann::json j;
  j["d_s"] = kraus.d_s;
  j["d_M"] = kraus.d_M;
  j["case_tag"] = std::string(to_string(kraus.case_tag));
  nlohmann::json mats = nlohmann::json::array();
  for (const auto& m : kraus.matrices) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& z : m.entries()) entries.push_back({z.real(), z.imag()});
    mats.push_back(std::move(entries));
  }
  j["matrices"] = std::move(mats);
  return j.dump();
}

KrausSet kraus_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("Kraus JSON: ") + e.what());
  }
  try {
    KrausSet k;
    k.d_s = j.at("d_s").get<std::size_t>();
    k.d_M = j.at("d_M").get<std::size_t>();
    k.case_tag = j.contains("case_tag") ? case_tag_from_string(j["case_tag"].get<std::string>())
                                        : CaseTag::Explicit;
    for (const auto& entries : j.at("matrices")) {
      if (entries.size() != k.d_M * k.d_M) {
        throw Error(ErrorKind::InvalidArgument, "Kraus JSON: matrix needs d_M^2 entries");
      }
      std::vector<Complex> values;
      values.reserve(entries.size());
      for (const auto& z : entries) values.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
      k.matrices.emplace_back(k.d_M, k.d_M, std::move(values));
    }
    validate(k);
    return k;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("Kraus JSON: ") + e.what());
  }
}

}  // namespace iumps
