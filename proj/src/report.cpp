#include "leibniz/report.hpp"

#include <stdexcept>
#include <vector>

namespace leibniz {

VerificationReport make_report(std::string name, double lhs, double rhs, double tolerance,
                               nlohmann::json instance) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.pass = r.slack >= -tolerance;
  r.instance = std::move(instance);
  return r;
}

VerificationReport combine_reports(std::string name, const std::vector<VerificationReport>& parts) {
  if (parts.empty()) throw std::invalid_argument("combine_reports: no parts");
  const VerificationReport* worst = &parts.front();
  for (const auto& p : parts)
    if (p.slack + p.tolerance < worst->slack + worst->tolerance) worst = &p;
  VerificationReport r = *worst;
  r.name = std::move(name);
  nlohmann::json sub = nlohmann::json::array();
  for (const auto& p : parts) sub.push_back({{"name", p.name}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"pass", p.pass}});
  r.details["parts"] = std::move(sub);
  return r;
}

void to_json(nlohmann::json& j, const VerificationReport& r) {
  j = nlohmann::json{{"name", r.name},           {"lhs", r.lhs},   {"rhs", r.rhs},
                     {"slack", r.slack},         {"pass", r.pass}, {"tolerance", r.tolerance},
                     {"instance", r.instance}};
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  if (!r.details.empty()) j["details"] = r.details;
}

void from_json(const nlohmann::json& j, VerificationReport& r) {
  r.name = j.at("name").get<std::string>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.slack = j.at("slack").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.tolerance = j.at("tolerance").get<double>();
  r.instance = j.value("instance", nlohmann::json::object());
  if (j.contains("seed") && !j["seed"].is_null()) r.seed = j["seed"].get<std::uint64_t>();
  r.details = j.value("details", nlohmann::json::object());
}

}  // namespace leibniz
