#pragma once

#include <json.hpp>

#include "expdyn/constructions.hpp"

namespace expdyn {

using nlohmann::json;

json complex_to_json(const HPComplex& z);
HPComplex complex_from_json(const json& j,
                            uint64_t budget = kDefaultMaxExponentBits);

json curve_to_json(const SampledCurve& c);
SampledCurve curve_from_json(const json& j);

json hair_to_json(const HairSample& h);
HairSample hair_from_json(const json& j);

json strips_to_json(const ExpMap& map);
json orbit_record_to_json(const OrbitRecord& r);
json itinerary_result_to_json(const ItineraryResult& r);
json lemelt_report_to_json(const LemEltReport& r);
json classification_to_json(const Classification& c);
json periodic_to_json(const PeriodicPoint& p);
json angle_set_to_json(const AngleSet& a);
json four_arc_to_json(const FourArcResult& r);
json surround_to_json(const SurroundOutcome& o);
json refinement_to_json(const RefinementChain& c);
json covering_to_json(const CoveringReport& r);
json nice_to_json(const NiceReport& r);

}  // namespace expdyn
