#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace leibniz {

// Outcome of one inequality or identity check. For identities lhs holds the
// max-abs deviation and rhs is 0.
struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = true;    // slack >= -tolerance
  double tolerance = 0.0;
  nlohmann::json instance = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  // Checker-specific extras: separate RHS terms, monotonicity flags, ...
  nlohmann::json details = nlohmann::json::object();

  double violation() const { return lhs - rhs; }
};

VerificationReport make_report(std::string name, double lhs, double rhs, double tolerance,
                               nlohmann::json instance = nlohmann::json::object());

// The worst of several sub-checks: pass only if all pass, lhs/rhs from the
// sub-check with the smallest slack.
VerificationReport combine_reports(std::string name, const std::vector<VerificationReport>& parts);

void to_json(nlohmann::json& j, const VerificationReport& r);
void from_json(const nlohmann::json& j, VerificationReport& r);

}  // namespace leibniz
