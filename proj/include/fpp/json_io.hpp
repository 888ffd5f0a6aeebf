#pragma once

#include "fpp/functional.hpp"
#include "fpp/geometry.hpp"
#include "fpp/model.hpp"
#include "fpp/rate.hpp"

#include "json.hpp"

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace fpp {

using json = nlohmann::ordered_json;

/// Throws SchemaError naming the first member of `j` not in `allowed`.
void reject_unknown_fields(const json& j, std::initializer_list<const char*> allowed, const std::string& where);
/// Member `key` of `j`, or SchemaError when absent.
const json& require_field(const json& j, const char* key, const std::string& where);

json to_json(const EdgeDistribution& dist);
EdgeDistribution distribution_from_json(const json& j);

json to_json(const Highway& h);
Highway highway_from_json(const json& j);

/// {"norm": [weights], "highways": [...]}.
json to_json(const NormPlusHighways& D);
NormPlusHighways metric_from_json(const json& j);

json to_json(const HighwayNetwork& net);
HighwayNetwork network_from_json(const json& j);

json to_json(const RatePoint& p);
RatePoint rate_point_from_json(const json& j);

json to_json(const RateSurface& s);
RateSurface surface_from_json(const json& j);

json to_json(const TimeConstantEstimate& tc);
json to_json(const ZeroSetReport& r);
json to_json(const FunctionalReport& r);
json to_json(const MonotonicityProbe& p);
json to_json(const LdTrendRow& r);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
/// Shortest round-trip decimal form of a double ("inf", "-inf", "nan" otherwise).
std::string format_double(double v);

void write_rate_points_csv(std::ostream& os, const std::vector<RatePoint>& points);
void write_surface_csv(std::ostream& os, const RateSurface& s);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace fpp
