#pragma once

#include <string_view>
#include <vector>

#include "expdyn/expmap.hpp"

namespace expdyn {

// Finite word over {0,1} with an optional periodic suffix; addresses the
// hair T_a and periodic points. Text form: "0110" (finite), "011(01)*"
// (prefix + cycle), "0*" (single-symbol cycle).
struct Itinerary {
  std::vector<uint8_t> prefix;
  std::vector<uint8_t> cycle;

  static Itinerary parse(std::string_view text);
  std::string str() const;

  bool has_cycle() const { return !cycle.empty(); }
  // Symbol a_n of the addressed sequence; throws past a finite word's end.
  uint8_t symbol_at(size_t n) const;
  Itinerary shifted() const;  // left shift sigma
};

struct ErrorBound {
  int depth = 0;
  // Sharp certificate: product of |Df| along the computed backward orbit,
  // kept as a tower because it outgrows any float past a few levels.
  TowerMagnitude inv_sharp;
  // Worst-case form (pi/2) * 2000^-depth, as log2; valid at any depth.
  double worst_log2 = 0.0;

  HPReal worst_bound(unsigned prec) const;
};

enum class HairSide { OnHair, UpperBoundary, LowerBoundary };

struct HairPoint {
  HPReal anchor;
  HPComplex z;
  ErrorBound err;
  CertifiedOrbit orbit;  // backward-stable chain certifying the itinerary
  int seed_level = 0;    // level actually seeded (precision may clip depth)
};

struct HairSample {
  Itinerary itinerary;
  int depth = 0;
  HairSide side = HairSide::OnHair;
  int boundary_k = 0;
  std::vector<HairPoint> points;  // ordered by anchor
};

// The unique z in S_s with f(z) = w, for w in the closed right half-plane
// outside the disc of radius |lambda|e^K. Throws OutsideRange otherwise.
HPComplex inverse_branch(const ExpMap& map, const HPComplex& w, int s);

// Points of T_a at the given anchor real parts. The seed for a point at
// anchor R sits at the top of the forward anchor ladder X_0 = R,
// X_(j+1) = |lambda| e^(X_j), at the deepest level the exponent budget can
// materialize; levels above that move the point by less than one ulp at any
// fixed precision and enter only the reported error bound.
HairSample trace_hair(const ExpMap& map, const Itinerary& a, int depth,
                      const std::vector<HPReal>& anchors);

// The accumulating boundary curve W^(+/-)_(k,a): seed on the horizontal
// boundary of strip a_k, pull back k times along a_0..a_(k-1).
HairSample trace_boundary(const ExpMap& map, const Itinerary& a, int k,
                          HairSide side, const std::vector<HPReal>& anchors);

struct PeriodicPoint {
  HPComplex z;
  int period = 0;
  HPReal multiplier_abs{kDefaultPrecisionBits};
  Itinerary itinerary;
  HPReal residual{kDefaultPrecisionBits};  // |f^p(z) - z|
  long iterations = 0;
};

struct PeriodicOptions {
  std::optional<HPComplex> seed;
  std::optional<HPReal> tolerance;  // default 2^(24 - precision)
  long max_iterations = 0;          // default 10 * precision
};

// Repelling periodic point with the given cycle itinerary, found by
// iterating the composed hat-strip inverse branch (Re >= K not required).
PeriodicPoint periodic_point(const ExpMap& map, const std::vector<uint8_t>& cycle,
                             const PeriodicOptions& opts = {});

}  // namespace expdyn
