#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "expdyn/expmap.hpp"
#include "expdyn/hairs.hpp"

namespace expdyn {

struct CurveSample {
  HPReal t;
  HPComplex z;
  std::optional<HPComplex> tangent;  // unit direction when present
};

// Ordered samples of a piecewise-C1 curve over t in [0,1]; the polyline
// between samples is the working representation everywhere.
struct SampledCurve {
  std::vector<CurveSample> samples;
  std::vector<HPReal> corner_params;  // finitely many non-smooth parameters
  bool closed = false;

  // Piecewise-linear point at parameter t.
  HPComplex at(const HPReal& t) const;
  // Direction of the segment containing t (unit vector).
  HPComplex segment_direction(const HPReal& t) const;
  HPReal diameter() const;
};

SampledCurve make_segment(const HPComplex& a, const HPComplex& b, size_t n,
                          unsigned prec);
// Circle of radius r around c, parametrised from phase t0 (radians).
SampledCurve make_circle(const HPComplex& c, const HPReal& r, size_t n,
                         const HPReal& phase0, unsigned prec);
// Polyline through the traced hair points, ordered by anchor.
SampledCurve hair_polyline(const HairSample& hair);

struct IterateOptions {
  // Absolute chord tolerance between adjacent image samples; zero disables
  // the chord criterion (turn-only refinement).
  HPReal tol{kDefaultPrecisionBits};
  double max_turn = 0.1;  // radians between adjacent image segments
  size_t sample_cap = size_t(1) << 20;
};

struct IterateResult {
  SampledCurve curve;
  int steps_done = 0;
  std::optional<int> budget_stop_step;  // first unrepresentable step
};

// Image f^n(c) with adaptive parameter bisection. On exponent-budget
// exhaustion the result holds the last fully representable step.
IterateResult iterate_curve(const ExpMap& map, const SampledCurve& c, int n,
                            const IterateOptions& opts);

// Exact integer winding of a closed sampled curve around z, via summed
// argument increments; robust at corner points. Throws PointOnCurve if z
// lies within tolerance of the polyline.
long winding_number(const SampledCurve& c, const HPComplex& z);

struct Crossing {
  HPReal t1;  // parameter on the first curve
  HPReal t2;  // parameter on the second curve
  HPComplex point;
  HPReal angle;  // between directions, in [0, pi)
};

// All proper crossings between non-adjacent segments of c with itself.
std::vector<Crossing> self_intersections(const SampledCurve& c);

// All proper crossings between two polylines.
std::vector<Crossing> crossings_between(const SampledCurve& a,
                                        const SampledCurve& b);

inline constexpr double kTransversalityFloor = 1e-3;  // radians

struct AngleWitness {
  HPReal angle;  // in [0, pi)
  HPReal t;      // parameter on the source curve
  size_t hair_index;
  std::string itinerary;
  HPComplex point;
};

struct AngleSet {
  int n = 0;
  std::vector<AngleWitness> angles;
  std::vector<AngleWitness> tangential;  // below the transversality floor
  std::optional<int> budget_stop_step;
};

struct AngleSetOptions {
  IterateOptions iterate{HPReal(0.0, kDefaultPrecisionBits), 5e-4,
                         size_t(1) << 20};
};

// Angles (mod pi) at which f^n(c) crosses the traced hair family.
AngleSet angle_set(const ExpMap& map, const SampledCurve& c, int n,
                   const std::vector<HairSample>& hair_family,
                   const AngleSetOptions& opts = {});

// True when every angle of a has a match in b within tol (the
// A_n subset A_(n+1) diagnostic).
bool angles_included(const AngleSet& a, const AngleSet& b, double tol);

}  // namespace expdyn
