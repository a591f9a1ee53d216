#pragma once

#include "fuller/extremal.hpp"
#include "fuller/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fuller {

/// Scenario document: fields, optional initial state, horizon and simulator overrides.
struct ScenarioFile {
  Scenario scenario;
  std::optional<std::vector<Rational>> q0;
  std::optional<std::vector<Rational>> lambda0;
  std::optional<Rational> t_final;
  /// SimOptions overrides by field name.
  std::map<std::string, double> options;

  std::size_t dim() const { return scenario.dim(); }
};

/// Names accepted in the "fixture" field and by builtin().
const std::vector<std::string>& builtin_names();

/// Parses a JSON scenario document. Errors name the offending field, and JSON syntax errors
/// carry the line and column.
ScenarioFile parse_scenario(const std::string& text);

/// Reads and parses a scenario file.
ScenarioFile load_scenario(const std::string& path);

nlohmann::json scenario_to_json(const ScenarioFile& file);

/// Canonical text: sorted keys, two-space indentation, trailing newline.
std::string emit_scenario(const ScenarioFile& file);

/// Builtin fixture with its recommended initial state, horizon and options. The seed only
/// affects random_poly.
ScenarioFile builtin(const std::string& name, std::uint64_t seed = 0);

/// A builtin name, or else a path to a scenario file.
ScenarioFile resolve_scenario(const std::string& name_or_path, std::uint64_t seed = 0);

/// SimOptions with the overrides applied; throws domain_error on unknown keys or bad values.
SimOptions make_options(const std::map<std::string, double>& overrides);

/// Initial state at t = 0; throws domain_error when the document has none.
ExtremalState initial_state(const ScenarioFile& file);

/// Hex SHA-256 of the canonical scenario text.
std::string scenario_hash(const ScenarioFile& file);

}  // namespace fuller
