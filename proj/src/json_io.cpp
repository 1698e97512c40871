#include "expdyn/json_io.hpp"

namespace expdyn {

json complex_to_json(const HPComplex& z) {
  return json{{"re", z.re().to_decimal()},
              {"im", z.im().to_decimal()},
              {"prec", z.precision()}};
}

HPComplex complex_from_json(const json& j, uint64_t budget) {
  unsigned prec = j.value("prec", kDefaultPrecisionBits);
  return {HPReal::from_decimal(j.at("re").get<std::string>(), prec),
          HPReal::from_decimal(j.at("im").get<std::string>(), prec), budget};
}

json curve_to_json(const SampledCurve& c) {
  json samples = json::array();
  for (const CurveSample& s : c.samples) {
    json js{{"t", s.t.to_decimal()}, {"z", complex_to_json(s.z)}};
    js["tangent"] = s.tangent ? complex_to_json(*s.tangent) : json(nullptr);
    samples.push_back(std::move(js));
  }
  json corners = json::array();
  for (const HPReal& t : c.corner_params) corners.push_back(t.to_decimal());
  return json{
      {"closed", c.closed}, {"samples", samples}, {"corners", corners}};
}

SampledCurve curve_from_json(const json& j) {
  SampledCurve c;
  c.closed = j.value("closed", false);
  for (const json& js : j.at("samples")) {
    HPComplex z = complex_from_json(js.at("z"));
    CurveSample s{
        HPReal::from_decimal(js.at("t").get<std::string>(), z.precision()), z,
        std::nullopt};
    if (js.contains("tangent") && !js["tangent"].is_null())
      s.tangent = complex_from_json(js["tangent"]);
    c.samples.push_back(std::move(s));
  }
  if (j.contains("corners"))
    for (const json& t : j["corners"])
      c.corner_params.push_back(
          HPReal::from_decimal(t.get<std::string>(), kDefaultPrecisionBits));
  return c;
}

namespace {
const char* side_name(HairSide s) {
  switch (s) {
    case HairSide::OnHair: return "hair";
    case HairSide::UpperBoundary: return "upper";
    case HairSide::LowerBoundary: return "lower";
  }
  return "hair";
}
}  // namespace

json hair_to_json(const HairSample& h) {
  json points = json::array();
  for (const HairPoint& p : h.points) {
    points.push_back(json{{"anchor", p.anchor.to_decimal()},
                          {"z", complex_to_json(p.z)},
                          {"err", p.err.worst_bound(p.z.precision()).to_decimal(8)},
                          {"err_log2", p.err.worst_log2},
                          {"inv_sharp", p.err.inv_sharp.str()},
                          {"seed_level", p.seed_level}});
  }
  return json{{"itinerary", h.itinerary.str()},
              {"depth", h.depth},
              {"side", side_name(h.side)},
              {"boundary_k", h.boundary_k},
              {"points", points}};
}

HairSample hair_from_json(const json& j) {
  HairSample h;
  h.itinerary = Itinerary::parse(j.at("itinerary").get<std::string>());
  h.depth = j.value("depth", 1);
  std::string side = j.value("side", "hair");
  h.side = side == "upper"   ? HairSide::UpperBoundary
           : side == "lower" ? HairSide::LowerBoundary
                             : HairSide::OnHair;
  h.boundary_k = j.value("boundary_k", 0);
  for (const json& jp : j.at("points")) {
    HairPoint p;
    p.z = complex_from_json(jp.at("z"));
    p.anchor = HPReal::from_decimal(jp.at("anchor").get<std::string>(),
                                    p.z.precision());
    p.err.worst_log2 = jp.value("err_log2", 0.0);
    p.err.depth = h.depth;
    p.seed_level = jp.value("seed_level", 0);
    h.points.push_back(std::move(p));
  }
  return h;
}

json strips_to_json(const ExpMap& map) {
  auto strip_json = [](const Strip& s) {
    return json{{"im_low", s.im_low.to_decimal(30)},
                {"im_high", s.im_high.to_decimal(30)},
                {"center", s.center.to_decimal(30)},
                {"lattice_k", s.lattice_k}};
  };
  json hats = json::array();
  for (const Strip& s : map.strips().hats) hats.push_back(strip_json(s));
  return json{{"lambda", complex_to_json(map.lambda())},
              {"K", map.K().to_decimal(30)},
              {"hat_strips", hats},
              {"S0", strip_json(map.strips().chosen[0])},
              {"S1", strip_json(map.strips().chosen[1])}};
}

json orbit_record_to_json(const OrbitRecord& r) {
  json samples = json::array();
  for (const OrbitSample& s : r.samples) {
    json js{{"n", s.n}, {"angle_unknown", s.angle_unknown}};
    if (s.z) js["z"] = complex_to_json(*s.z);
    if (s.magnitude) js["magnitude"] = s.magnitude->str();
    samples.push_back(std::move(js));
  }
  const char* status = r.status == OrbitRecord::Status::InSPrefix
                           ? "in_s_prefix"
                           : r.status == OrbitRecord::Status::LeftS
                                 ? "left_s"
                                 : "exponent_budget_stop";
  return json{
      {"samples", samples}, {"status", status}, {"status_step", r.status_step}};
}

json itinerary_result_to_json(const ItineraryResult& r) {
  std::string word;
  for (uint8_t b : r.word) word += static_cast<char>('0' + b);
  return json{{"word", word}, {"orbit", orbit_record_to_json(r.record)}};
}

namespace {
json check_to_json(const LemEltCheck& c) {
  return json{{"lhs", c.lhs.to_decimal(25)},
              {"rhs", c.rhs.to_decimal(25)},
              {"pass", c.pass}};
}
}  // namespace

json lemelt_report_to_json(const LemEltReport& r) {
  const char* status = "complete";
  switch (r.status) {
    case LemEltReport::Status::Complete: status = "complete"; break;
    case LemEltReport::Status::OrbitLeftS: status = "orbit_left_s"; break;
    case LemEltReport::Status::BudgetStop: status = "budget_stop"; break;
    case LemEltReport::Status::Ambiguous: status = "ambiguous"; break;
  }
  return json{{"n_requested", r.n_requested},
              {"n_reached", r.n_reached},
              {"status", status},
              {"status_step", r.status_step},
              {"growth", check_to_json(r.growth)},
              {"final_arg", check_to_json(r.final_arg)},
              {"arg_sum", check_to_json(r.arg_sum)},
              {"arg_sum_below_1_50", r.arg_sum_below_one_fiftieth},
              {"accumulated_df_arg", r.accumulated_df_arg.to_decimal(25)},
              {"pass", r.pass()}};
}

json classification_to_json(const Classification& c) {
  const char* verdict = "undecided";
  switch (c.verdict) {
    case Classification::Verdict::FastEscapingCandidate:
      verdict = "fast_escaping_candidate";
      break;
    case Classification::Verdict::EscapingCandidate:
      verdict = "escaping_candidate";
      break;
    case Classification::Verdict::BoundedSoFar:
      verdict = "bounded_so_far";
      break;
    case Classification::Verdict::Undecided:
      verdict = "undecided";
      break;
  }
  json j{{"verdict", verdict},
         {"magnitudes_used", c.magnitudes_used},
         {"orbit", orbit_record_to_json(c.record)}};
  if (c.verdict == Classification::Verdict::FastEscapingCandidate)
    j["offset"] = c.offset;
  return j;
}

json periodic_to_json(const PeriodicPoint& p) {
  return json{{"z", complex_to_json(p.z)},
              {"period", p.period},
              {"multiplier_abs", p.multiplier_abs.to_decimal(30)},
              {"itinerary", p.itinerary.str()},
              {"residual", p.residual.to_decimal(8)},
              {"iterations", p.iterations}};
}

json angle_set_to_json(const AngleSet& a) {
  auto witness = [](const AngleWitness& w) {
    return json{{"angle", w.angle.to_decimal(20)},
                {"t", w.t.to_decimal(20)},
                {"hair", w.itinerary},
                {"point", complex_to_json(w.point)}};
  };
  json angles = json::array(), tangential = json::array();
  for (const AngleWitness& w : a.angles) angles.push_back(witness(w));
  for (const AngleWitness& w : a.tangential) tangential.push_back(witness(w));
  json j{{"n", a.n}, {"angles", angles}, {"tangential", tangential}};
  if (a.budget_stop_step) j["budget_stop_step"] = *a.budget_stop_step;
  return j;
}

json four_arc_to_json(const FourArcResult& r) {
  json arcs = json::array();
  for (const ArcSpec& a : r.arcs)
    arcs.push_back(json{{"radius", a.radius.to_decimal(30)},
                        {"theta_lo", a.theta_lo.to_decimal(30)},
                        {"theta_hi", a.theta_hi.to_decimal(30)},
                        {"translate", a.translate}});
  json angles = json::array();
  for (const HPReal& a : r.cert.junction_angles)
    angles.push_back(a.to_decimal(10));
  return json{{"arcs", arcs},
              {"y", complex_to_json(r.y)},
              {"winding", r.cert.winding},
              {"diameter", r.cert.diameter.to_decimal(10)},
              {"junction_angles", angles},
              {"max_arc_length", r.cert.max_arc_length.to_decimal(10)},
              {"roundtrip_error", r.cert.roundtrip_error.to_decimal(8)},
              {"retries", r.cert.retries},
              {"jordan_ok", r.cert.jordan_ok},
              {"image", curve_to_json(r.image)}};
}

json surround_to_json(const SurroundOutcome& o) {
  json j;
  if (o.certificate) {
    const SurroundCertificate& c = *o.certificate;
    json subarcs = json::array();
    for (const auto& [lo, hi] : c.subarcs)
      subarcs.push_back(json{{"lo", lo.to_decimal()}, {"hi", hi.to_decimal()}});
    json corner_angles = json::array();
    for (const HPReal& a : c.corner_angles)
      corner_angles.push_back(a.to_decimal(10));
    j["certificate"] = json{{"subarcs", subarcs},
                            {"iterates", c.iterates},
                            {"target", complex_to_json(c.target)},
                            {"epsilon", c.epsilon.to_decimal(10)},
                            {"winding", c.winding},
                            {"diameter", c.diameter.to_decimal(10)},
                            {"corner_angles", corner_angles}};
    j["image"] = curve_to_json(o.certified_image);
  }
  if (o.horizon) {
    const HorizonReport& h = *o.horizon;
    j["precision_horizon"] = json{{"step", h.step},
                                  {"stage", h.stage},
                                  {"detail", h.detail},
                                  {"best_c1_distance", h.best_c1_distance},
                                  {"best_radius", h.best_radius},
                                  {"needed_radius", h.needed_radius}};
  }
  return j;
}

json refinement_to_json(const RefinementChain& c) {
  json stages = json::array();
  for (const RefinementStage& s : c.stages) {
    stages.push_back(json{{"target", complex_to_json(s.target)},
                          {"epsilon", s.epsilon.to_decimal(10)},
                          {"outcome", surround_to_json(s.outcome)},
                          {"surviving",
                           json{{"lo", s.surviving.first.to_decimal()},
                                {"hi", s.surviving.second.to_decimal()}}}});
  }
  return json{{"stages", stages},
              {"stopped_at_horizon", c.stopped_at_horizon}};
}

json covering_to_json(const CoveringReport& r) {
  json steps = json::array();
  for (const CoveringStep& s : r.steps)
    steps.push_back(json{{"N", s.N},
                         {"covered", s.covered},
                         {"min_winding", s.min_winding},
                         {"ambiguous_points", s.ambiguous_points}});
  json j{{"steps", steps}};
  if (r.budget_stop_step) j["budget_stop_step"] = *r.budget_stop_step;
  return j;
}

json nice_to_json(const NiceReport& r) {
  json j{{"depth_checked", r.depth_checked},
         {"caveat", "sampling resolution only"}};
  if (r.violation) {
    j["verdict"] = "violation";
    j["violation"] = json{{"n", r.violation->n},
                          {"t", r.violation->t.to_decimal()},
                          {"boundary_point",
                           complex_to_json(r.violation->boundary_point)},
                          {"image", complex_to_json(r.violation->image)}};
  } else {
    j["verdict"] = "nice_up_to_depth";
  }
  if (r.budget_stop_step) j["budget_stop_step"] = *r.budget_stop_step;
  return j;
}

}  // namespace expdyn
