#include <string>

#include "leibniz/verify.hpp"

namespace leibniz {

nlohmann::json exponent_json(Exponent p) {
  if (p.is_infinite()) return "inf";
  return p.value();
}

Exponent exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  if (j.is_number()) return Exponent(j.get<double>());
  throw InvalidArgument("exponent must be a number or \"inf\"");
}

nlohmann::json triple_json(const HolderTriple& t) {
  return {{"r", exponent_json(t.r)}, {"p", exponent_json(t.p)}, {"q", exponent_json(t.q)}};
}

HolderTriple triple_from_json(const nlohmann::json& j) {
  const Exponent r = exponent_from_json(j.at("r"));
  const Exponent p = exponent_from_json(j.at("p"));
  if (!j.contains("q")) return HolderTriple::from_rp(r, p);
  return HolderTriple::make(r, p, exponent_from_json(j.at("q")));
}

nlohmann::json phi_to_json(const PiecewiseLinearFn& phi) {
  return {{"breakpoints", phi.breakpoints()}, {"slopes", phi.slopes()}, {"anchor", phi.anchor()}};
}

PiecewiseLinearFn phi_from_json(const nlohmann::json& j) {
  return PiecewiseLinearFn(j.value("breakpoints", RealVector{}), j.at("slopes").get<RealVector>(),
                           j.value("anchor", 0.0));
}

}  // namespace leibniz
