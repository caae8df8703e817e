#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "carnot/admissibility.hpp"
#include "carnot/best_constant.hpp"
#include "carnot/conditions.hpp"
#include "carnot/group.hpp"
#include "carnot/measure.hpp"
#include "carnot/trial.hpp"

namespace carnot {

using Json = nlohmann::ordered_json;

/// Finite values as numbers; ±inf and NaN as the strings "inf", "-inf", "nan"
/// (JSON has no literal for them).
Json number(double x);
/// Inverse of number().
double number_from(const Json& j);

/// Shortest form that parses back to the same double: %.17g.
std::string format_double(double x);

Json to_json(const GroupSpec& spec);
Json to_json(const IntegralEstimate& e);
Json to_json(const Point& p);
Json to_json(const TrialFunction& f);
Json to_json(const AdmissibilityReport& r);
Json to_json(const TriangleEstimate& t);
Json to_json(const Cond35Report& r);
Json to_json(const Cond36Report& r);
Json to_json(const SWConditionReport& r);
Json to_json(const BestConstantResult& r);

/// {kind, params} as written by to_json. A tabulated entry may reference a
/// grid file by {"file": path}, resolved against `base_dir`.
TrialFunction trial_from_json(const GroupSpec& spec, const Json& j, const std::filesystem::path& base_dir = {});

}  // namespace carnot
