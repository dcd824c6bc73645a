#include "mubforge/stateset_io.hpp"

#include <fstream>
#include <stdexcept>

namespace mubforge::io {

nlohmann::ordered_json state_set_to_json(const StateSet& set) {
  nlohmann::ordered_json j;
  j["d"] = set.d;
  auto groups = nlohmann::ordered_json::array();
  for (const auto& group : set.groups) {
    auto jg = nlohmann::ordered_json::array();
    for (const auto& v : group) {
      auto jv = nlohmann::ordered_json::array();
      for (int k = 0; k < v.dim(); ++k) jv.push_back({v.re[k], v.im[k]});
      jg.push_back(std::move(jv));
    }
    groups.push_back(std::move(jg));
  }
  j["groups"] = std::move(groups);
  j["provenance"] = set.provenance;
  return j;
}

StateSet state_set_from_json(const nlohmann::json& j) {
  StateSet out;
  out.d = j.at("d").get<int>();
  if (out.d < 2 || out.d > kMaxDim) throw std::invalid_argument("state set: bad dimension");
  for (const auto& jg : j.at("groups")) {
    std::vector<CVec> group;
    for (const auto& jv : jg) {
      if (static_cast<int>(jv.size()) != out.d)
        throw std::invalid_argument("state set: vector length != d");
      CVec v(out.d);
      for (int k = 0; k < out.d; ++k)
        v.set(k, {jv[k].at(0).get<double>(), jv[k].at(1).get<double>()});
      group.push_back(v);
    }
    out.groups.push_back(std::move(group));
  }
  out.provenance = j.value("provenance", "");
  return out;
}

void write_state_set(const StateSet& set, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << state_set_to_json(set).dump(2) << "\n";
}

StateSet read_state_set(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  f >> j;
  return state_set_from_json(j);
}

}  // namespace mubforge::io
