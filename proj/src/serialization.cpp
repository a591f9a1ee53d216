#include "fuller/serialization.hpp"

namespace fuller {

nlohmann::json polynomial_to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) terms.push_back({{"exponents", t.exponents}, {"coeff", to_string(t.coeff)}});
  return terms;
}

Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array()) throw domain_error(path + ": expected a list of terms");
  std::vector<Monomial> terms;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& t = j[k];
    const std::string where = path + "[" + std::to_string(k) + "]";
    if (!t.is_object()) throw domain_error(where + ": expected an object with exponents and coeff");
    if (!t.contains("exponents") || !t["exponents"].is_array())
      throw domain_error(where + ".exponents: missing or not a list");
    const auto& ex = t["exponents"];
    if (ex.size() != dim)
      throw domain_error(where + ".exponents: expected " + std::to_string(dim) + " entries, found " +
                         std::to_string(ex.size()));
    Exponents e;
    for (const auto& v : ex) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw domain_error(where + ".exponents: entries must be non-negative integers");
      e.push_back(v.get<unsigned>());
    }
    if (!t.contains("coeff")) throw domain_error(where + ".coeff: missing");
    const auto& c = t["coeff"];
    Rational q;
    try {
      if (c.is_string()) {
        q = parse_rational(c.get<std::string>());
      } else if (c.is_number_integer()) {
        q = parse_rational(c.dump());
      } else {
        throw domain_error("coefficients must be \"p/q\" strings or integers");
      }
    } catch (const domain_error& err) {
      throw domain_error(where + ".coeff: " + err.what());
    }
    terms.push_back({std::move(e), q});
  }
  return Polynomial::from_terms(dim, std::move(terms));
}

nlohmann::json field_to_json(const PolyVectorField& f) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : f.components()) comps.push_back(polynomial_to_json(c));
  return comps;
}

PolyVectorField field_from_json(const nlohmann::json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array()) throw domain_error(path + ": expected a list of components");
  if (j.size() != dim)
    throw domain_error(path + ": expected " + std::to_string(dim) + " components, found " + std::to_string(j.size()));
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < dim; ++i)
    comps.push_back(polynomial_from_json(j[i], dim, path + "[" + std::to_string(i) + "]"));
  return PolyVectorField(std::move(comps));
}

}  // namespace fuller
