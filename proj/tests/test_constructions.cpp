#include <doctest.h>

#include <random>

#include "expdyn/constructions.hpp"
#include "oracle.hpp"

using namespace expdyn;

namespace {
constexpr unsigned P = kDefaultPrecisionBits;
HPComplex cplx(double re, double im) { return {re, im, P}; }
HPReal hp(double x) { return HPReal(x, P); }
}  // namespace

TEST_CASE("sector_preimage: round trip and sector condition") {
  ExpMap m = make_map(cplx(1, 0));
  HPComplex y = sector_preimage(m, cplx(1, 0), hp(0.1));
  HPComplex f2y = m.apply(m.apply(y));
  CHECK(oracle::rel_err(f2y, cplx(1, 0)) < hp(1e-60));
  HPReal quarter_pi = HPReal::pi(P).mul_2exp(-2);
  CHECK((y.arg() - quarter_pi).abs() < hp(0.1));
  CHECK(y.abs() >= hp(9.0));
}

TEST_CASE("sector_preimage: zero target rejected, eps range checked") {
  ExpMap m = make_map(cplx(1, 0));
  CHECK_THROWS_AS(sector_preimage(m, cplx(0, 0), hp(0.1)), ZeroTarget);
  CHECK_THROWS_AS(sector_preimage(m, cplx(1, 0), hp(0.6)), InvalidArgument);
  CHECK_THROWS_AS(sector_preimage(m, cplx(1, 0), hp(0.0)), InvalidArgument);
}

TEST_CASE("sector_preimage: shrinking eps pushes the preimage outward") {
  ExpMap m = make_map(cplx(1, 0));
  HPComplex z = cplx(2, 1);
  HPComplex loose = sector_preimage(m, z, hp(0.1));
  HPComplex tight = sector_preimage(m, z, hp(1e-7));
  CHECK((tight.arg() - HPReal::pi(P).mul_2exp(-2)).abs() < hp(1e-7));
  CHECK(tight.abs() > loose.abs());
  // both round-trip
  CHECK(oracle::rel_err(m.apply(m.apply(tight)), z) < hp(1e-50));
}

TEST_CASE("sector_preimage works for other lambda") {
  for (auto [lre, lim] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {1e-9, 0.0}}) {
    ExpMap m = make_map(cplx(lre, lim));
    HPComplex z = cplx(0.7, -0.3);
    HPComplex y = sector_preimage(m, z, hp(0.2));
    CHECK(oracle::rel_err(m.apply(m.apply(y)), z) < hp(1e-50));
    CHECK((y.arg() - HPReal::pi(P).mul_2exp(-2)).abs() < hp(0.2));
  }
}

TEST_CASE("four_arc_jordan: verified certificates for the spec targets") {
  ExpMap m = make_map(cplx(1, 0));
  for (auto [zre, zim, eps] : {std::tuple{2.0, 0.0, 0.1}, {-1.0, 0.0, 0.5}}) {
    FourArcResult r = four_arc_jordan(m, cplx(zre, zim), hp(eps));
    CHECK((r.cert.winding == 1 || r.cert.winding == -1));
    CHECK(r.cert.diameter <= hp(eps));
    CHECK(r.cert.jordan_ok);
    for (const HPReal& a : r.cert.junction_angles)
      CHECK(a.to_double() >= kTransversalityFloor);
    CHECK(r.cert.roundtrip_error < hp(1e-50));

    // replay with the independent winding oracle on the shipped image
    CHECK(std::labs(winding_number(r.image, cplx(zre, zim))) == 1);

    // arc records: same-family arcs are disjoint by radius separation
    CHECK(r.arcs[0].translate == 0);
    CHECK(r.arcs[1].translate == 0);
    CHECK(r.arcs[2].translate == 1);
    CHECK(r.arcs[3].translate == 1);
    CHECK((r.arcs[0].radius - r.arcs[1].radius).abs() > hp(0.0));
    CHECK((r.arcs[2].radius - r.arcs[3].radius).abs() > hp(0.0));
    for (const ArcSpec& a : r.arcs) CHECK(a.length() <= hp(1.0));
  }
}

TEST_CASE("four_arc_jordan: image surrounds the target, not far points") {
  ExpMap m = make_map(cplx(1, 0));
  HPComplex z = cplx(0.5, 0.5);
  FourArcResult r = four_arc_jordan(m, z, hp(0.1));
  CHECK(winding_number(r.image, cplx(5, 5)) == 0);
  CHECK(std::labs(winding_number(r.image, z)) == 1);
  CHECK_THROWS_AS(four_arc_jordan(m, cplx(0, 0), hp(0.1)), ZeroTarget);
}

TEST_CASE("surround_from_curve: honest horizon on a generic crossing") {
  ExpMap m = make_map(cplx(1, 0));
  HairSample hair = trace_hair(m, Itinerary::parse("0*"), 8,
                               {hp(10.6), hp(11.5), hp(13.0)});
  SampledCurve c = make_segment(cplx(11.0, -1.9), cplx(11.0, 2.1), 16, P);
  SurroundOutcome o =
      surround_from_curve(m, c, hair, cplx(2, 0), hp(0.5), 6);
  // never a false certificate: a certificate must replay, a horizon must
  // name its stage
  if (o.certified()) {
    CHECK(std::labs(winding_number(o.certified_image, cplx(2, 0))) == 1);
    CHECK(o.certified_image.diameter() <= hp(0.5));
  } else {
    REQUIRE(o.horizon.has_value());
    CHECK(!o.horizon->stage.empty());
    CHECK(o.horizon->step >= 1);
    // the diagnostic records the radius gap that blocks the construction
    CHECK(o.horizon->needed_radius > 0);
  }
}

TEST_CASE("surround_from_curve: tangential crossing is a precondition gate") {
  ExpMap m = make_map(cplx(1, 0));
  HairSample hair = trace_hair(m, Itinerary::parse("0*"), 8,
                               {hp(10.6), hp(11.5), hp(13.0)});
  // a horizontal segment along the hair: no transversal crossing
  SampledCurve c = make_segment(cplx(10.7, 1e-40), cplx(12.9, 1.7e-40), 9, P);
  CHECK_THROWS_AS(
      surround_from_curve(m, c, hair, cplx(2, 0), hp(0.5), 4),
      NoTransversalCrossing);
}

TEST_CASE("refine_dense_orbit: empty targets, single stage, nesting") {
  ExpMap m = make_map(cplx(1, 0));
  SampledCurve c = make_segment(cplx(11.0, -1.9), cplx(11.0, 2.1), 16, P);

  RefinementChain empty = refine_dense_orbit(m, c, {}, 4);
  CHECK(empty.stages.empty());
  CHECK_FALSE(empty.stopped_at_horizon);

  RefinementChain one =
      refine_dense_orbit(m, c, {{cplx(2, 0), hp(0.5)}}, 4);
  REQUIRE(one.stages.size() == 1);
  const RefinementStage& st = one.stages[0];
  if (st.outcome.certified()) {
    CHECK(std::labs(winding_number(st.outcome.certified_image, cplx(2, 0))) ==
          1);
    CHECK(st.surviving.first <= st.surviving.second);
  } else {
    CHECK(one.stopped_at_horizon);
  }

  RefinementChain two = refine_dense_orbit(
      m, c, {{cplx(2, 0), hp(0.5)}, {cplx(1, 1), hp(0.25)}}, 4);
  CHECK(two.stages.size() <= 2);
  for (size_t i = 1; i < two.stages.size(); ++i) {
    // nested surviving intervals
    CHECK(two.stages[i].surviving.first >= two.stages[i - 1].surviving.first);
    CHECK(two.stages[i].surviving.second <=
          two.stages[i - 1].surviving.second);
  }
}

TEST_CASE("kappa_segment endpoints and strip coverage") {
  ExpMap m = make_map(cplx(1, 0));
  SampledCurve k = kappa_segment(m);
  HPReal three_pi = HPReal::pi(P) * hp(3.0);
  CHECK((k.samples.front().z.re() - hp(11.5)).abs() < hp(1e-70));
  CHECK((k.samples.front().z.im() + three_pi).abs() < hp(1e-70));
  CHECK((k.samples.back().z.im() - three_pi).abs() < hp(1e-70));
  // crosses both chosen strip bands: the Im range covers each band
  for (int s = 0; s < 2; ++s) {
    const Strip& strip = m.strips().chosen[s];
    CHECK(strip.im_low > k.samples.front().z.im());
    CHECK(strip.im_high < k.samples.back().z.im());
  }
  // every hair traced at anchor K+1 touches the segment's Re line
  HairSample h = trace_hair(m, Itinerary::parse("(01)*"), 6,
                            {m.K() + hp(1.0)});
  CHECK((h.points[0].z.re() - hp(11.5)).abs() < hp(1e-6));
}

TEST_CASE("covering_check: per-N verdicts with recomputed coverage") {
  ExpMap m = make_map(cplx(1, 0));
  PeriodicPoint p = periodic_point(m, {0});
  CHECK_THROWS_AS(covering_check(m, p, hp(0.0), 3), InvalidArgument);

  CoveringReport r = covering_check(m, p, hp(0.5), 7, 17);
  REQUIRE(!r.steps.empty());
  for (size_t i = 0; i < r.steps.size(); ++i) {
    CHECK(r.steps[i].N == static_cast<int>(i) + 1);
    CHECK(r.steps[i].ambiguous_points == 0);
    if (r.steps[i].covered) CHECK(r.steps[i].min_winding >= 1);
  }
  // shallow N around the fixed point cannot cover the far-away segment
  CHECK_FALSE(r.steps[0].covered);
}

TEST_CASE("nice_check: half-planes are nice for real lambda") {
  ExpMap m = make_map(cplx(1, 0));
  SampledCurve seg = make_segment(cplx(-5, 0), cplx(5, 0), 33, P);
  NiceReport r = nice_check(m, seg, halfplane_region(true), 5,
                            {hp(0.0), 0.2, size_t(1) << 17});
  CHECK(r.nice_up_to_depth());
  CHECK(r.depth_checked == 5);
  CHECK_FALSE(r.budget_stop_step.has_value());

  NiceReport lower = nice_check(m, seg, halfplane_region(false), 5,
                                {hp(0.0), 0.2, size_t(1) << 17});
  CHECK(lower.nice_up_to_depth());
  CHECK(lower.depth_checked == 5);
}

TEST_CASE("nice_check: unit disk boundary violates at n = 1") {
  ExpMap m = make_map(cplx(1, 0));
  // parametrised from -1 so the first violating sample is f(-1) = e^-1
  SampledCurve circ = make_circle(cplx(0, 0), hp(1.0), 64, HPReal::pi(P), P);
  NiceReport r = nice_check(m, circ, disk_region(cplx(0, 0), hp(1.0)), 1,
                            {hp(0.05), 0.1, size_t(1) << 17});
  REQUIRE(r.violation.has_value());
  CHECK(r.violation->n == 1);
  HPComplex e_inv{(-hp(1.0)).exp(), hp(0.0)};
  CHECK(distance(r.violation->image, e_inv) < hp(1e-70));
  CHECK(distance(r.violation->boundary_point, cplx(-1, 0)) < hp(1e-70));
}

TEST_CASE("nice_check: depth 0 and inconsistent boundary") {
  ExpMap m = make_map(cplx(1, 0));
  SampledCurve seg = make_segment(cplx(-5, 0), cplx(5, 0), 9, P);
  NiceReport r = nice_check(m, seg, halfplane_region(true), 0,
                            {hp(0.0), 0.2, size_t(1) << 16});
  CHECK(r.nice_up_to_depth());
  CHECK(r.depth_checked == 0);

  SampledCurve bad = make_segment(cplx(-5, 1), cplx(5, 1), 9, P);
  CHECK_THROWS_AS(nice_check(m, bad, halfplane_region(true), 1,
                             {hp(0.0), 0.2, size_t(1) << 16}),
                  InvalidArgument);
}

TEST_CASE("polygon region: square membership via winding") {
  SampledCurve square;
  square.closed = true;
  std::vector<std::pair<double, double>> pts{
      {1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 1}};
  for (size_t i = 0; i < pts.size(); ++i)
    square.samples.push_back({hp(static_cast<double>(i) / 4.0),
                              cplx(pts[i].first, pts[i].second),
                              std::nullopt});
  Region region = polygon_region(square);
  CHECK(region.inside(cplx(0, 0)));
  CHECK_FALSE(region.inside(cplx(3, 0)));
  CHECK_FALSE(region.inside(cplx(1, 1)));  // on the boundary
  CHECK(region.polar(tower_from_real(hp(1e9)), hp(0.0)) ==
        RegionVerdict::NotInside);
}
