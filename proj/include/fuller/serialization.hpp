#pragma once

#include "fuller/vector_field.hpp"

#include <json.hpp>

#include <string>

namespace fuller {

/// Canonical form: list of {"exponents": [...], "coeff": "p/q"} in graded lexicographic order.
nlohmann::json polynomial_to_json(const Polynomial& p);

/// Inverse of polynomial_to_json; `path` prefixes error messages (for example "f0[1]").
Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t dim, const std::string& path);

/// List of components, each in the canonical polynomial form.
nlohmann::json field_to_json(const PolyVectorField& f);

PolyVectorField field_from_json(const nlohmann::json& j, std::size_t dim, const std::string& path);

}  // namespace fuller
