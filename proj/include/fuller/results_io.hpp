#pragma once

#include "fuller/classify.hpp"
#include "fuller/codim_dynamics.hpp"
#include "fuller/extremal.hpp"
#include "fuller/fuller_order.hpp"
#include "fuller/relations.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace fuller {

/// Significant digits used for times and states in JSON output.
inline constexpr int kJsonDigits = 50;

/// Simulation output. Times are decimal strings; samples are omitted unless requested.
nlohmann::json sim_result_to_json(const SimResult& result, const real& t_final, const real& resolution,
                                  bool include_samples = false);

/// Trajectory table with columns t, q1..qn, lambda1..lambdan, u, h1, h01.
void write_trajectory_csv(std::ostream& out, const SimResult& result, BracketCache& cache);

/// Switching set from simulation JSON ("switch_times", "t_final", "resolution") or from plain
/// text with one time per line (horizon = last time, resolution = 0).
SwitchSet read_switch_set(const std::string& path);
SwitchSet switch_set_from_json(const nlohmann::json& doc);

nlohmann::json order_report_to_json(const OrderReport& report);
nlohmann::json chatter_to_json(const ChatterRatio& ratio);
nlohmann::json point_class_to_json(const PointClass& pc);
nlohmann::json collinear_test_to_json(const CollinearTest& test);
nlohmann::json destt_to_json(const DesttReport& report);
nlohmann::json bound_to_json(unsigned n, const FullerBound& bound);
nlohmann::json relation_to_json(const RelationExpr& r);
nlohmann::json field_json_with_text(const PolyVectorField& f);

}  // namespace fuller
