#pragma once

#include <array>
#include <functional>

#include "expdyn/curve.hpp"

namespace expdyn {

// Closed arc of a circle centred at the origin. `translate` is the integer
// multiple of 2*pi added to Im after lifting (0 or +/-1): translated arcs
// close the Jordan curve while keeping the same f-image.
struct ArcSpec {
  HPReal radius;
  HPReal theta_lo;
  HPReal theta_hi;
  int translate = 0;

  HPReal length() const { return radius * (theta_hi - theta_lo); }
};

// Preimage y with f^2(y) = z and |arg(y) - pi/4| < eps, found by scanning
// the 2*pi*i k-lattice of first preimages for one whose log lands near the
// diagonal. Far preimages always exist; the budget caps how far we look.
HPComplex sector_preimage(const ExpMap& map, const HPComplex& z,
                          const HPReal& eps);

struct FourArcCert {
  long winding = 0;
  HPReal diameter{kDefaultPrecisionBits};
  std::array<HPReal, 4> junction_angles{
      HPReal(kDefaultPrecisionBits), HPReal(kDefaultPrecisionBits),
      HPReal(kDefaultPrecisionBits), HPReal(kDefaultPrecisionBits)};
  HPReal max_arc_length{kDefaultPrecisionBits};
  HPReal roundtrip_error{kDefaultPrecisionBits};  // |f^2(y) - z|
  int retries = 0;
  bool jordan_ok = false;  // no self-intersections away from junctions
};

struct FourArcResult {
  std::array<ArcSpec, 4> arcs;
  HPComplex y;             // the surrounded sector preimage
  SampledCurve preimage;   // the assembled curvilinear quadrilateral
  SampledCurve image;      // f^2 of it
  FourArcCert cert;
};

// Builds four circle arcs whose assembly surrounds y = sector_preimage(z)
// and verifies that the f^2-image is a Jordan curve of winding +/-1 around
// z with diameter <= eps and transversal junctions. Retries with halved
// arc scale before giving up with VerificationFailed.
FourArcResult four_arc_jordan(const ExpMap& map, const HPComplex& z,
                              const HPReal& eps);

struct SurroundCertificate {
  std::array<std::pair<HPReal, HPReal>, 4> subarcs;  // parameter intervals
  std::array<int, 4> iterates{};
  HPComplex target;
  HPReal epsilon{kDefaultPrecisionBits};
  long winding = 0;
  HPReal diameter{kDefaultPrecisionBits};
  std::vector<HPReal> corner_angles;
};

// The honest failure mode: the staged search ran out of representable
// angular information before the construction's "large n" was reached.
struct HorizonReport {
  int step = 0;
  std::string stage;
  std::string detail;
  double best_c1_distance = -1.0;
  double best_radius = -1.0;
  double needed_radius = -1.0;
};

struct SurroundOutcome {
  std::optional<SurroundCertificate> certificate;
  std::optional<HorizonReport> horizon;
  SampledCurve certified_image;  // populated only alongside a certificate
  bool certified() const { return certificate.has_value(); }
};

// Best-effort realisation of the subarc-surround construction from a curve
// crossing a hair transversally. Never emits an unverified certificate;
// PrecisionHorizon is a first-class outcome, not an exception.
SurroundOutcome surround_from_curve(const ExpMap& map, const SampledCurve& c,
                                    const HairSample& hair, const HPComplex& z,
                                    const HPReal& eps, int budget);

struct RefinementStage {
  HPComplex target;
  HPReal epsilon{kDefaultPrecisionBits};
  SurroundOutcome outcome;
  std::pair<HPReal, HPReal> surviving;  // interval on the original curve
};

struct RefinementChain {
  std::vector<RefinementStage> stages;
  bool stopped_at_horizon = false;
};

RefinementChain refine_dense_orbit(
    const ExpMap& map, const SampledCurve& c,
    const std::vector<std::pair<HPComplex, HPReal>>& targets, int budget);

// The closed vertical segment joining K+1 - 3*pi*i with K+1 + 3*pi*i.
SampledCurve kappa_segment(const ExpMap& map, size_t samples = 257);

struct CoveringStep {
  int N = 0;
  bool covered = false;
  long min_winding = 0;
  int ambiguous_points = 0;
};

struct CoveringReport {
  std::vector<CoveringStep> steps;
  std::optional<int> budget_stop_step;
};

// Iterates the boundary circle of B(p, radius) forward and reports, per
// reachable N, whether the image of the disk covers the kappa segment
// (winding test around its sample points). Shallow-depth only: absence of
// covering by N_max proves nothing.
CoveringReport covering_check(const ExpMap& map, const PeriodicPoint& p,
                              const HPReal& radius, int n_max,
                              size_t kappa_samples = 65);

enum class RegionVerdict { Inside, NotInside, Undecidable };

// Membership oracle for U, supplied explicitly. The polar test decides
// membership for orbit values known only as a tower magnitude with an
// exactly-tracked angle (how real-axis orbits continue past the exponent
// budget); it may answer Undecidable.
struct Region {
  std::function<bool(const HPComplex&)> inside;
  std::function<RegionVerdict(const TowerMagnitude&, const HPReal& angle)>
      polar;
};

Region halfplane_region(bool upper);
Region disk_region(const HPComplex& center, const HPReal& radius);
Region polygon_region(SampledCurve boundary);

struct NiceReport {
  struct Violation {
    int n = 0;
    HPReal t{kDefaultPrecisionBits};
    HPComplex boundary_point;
    HPComplex image;
  };
  int depth_checked = 0;
  std::optional<Violation> violation;
  // First step at which some sample became undecidable (angle information
  // lost past the exponent budget); the verdict covers earlier steps only.
  std::optional<int> budget_stop_step;
  bool nice_up_to_depth() const { return !violation.has_value(); }
};

// Checks f^n(boundary) against U for n = 1..depth, with adaptive refinement
// while the whole curve is representable and per-sample polar-tower
// continuation past that. A NiceUpTo verdict carries the usual
// sampling-resolution caveat.
NiceReport nice_check(const ExpMap& map, const SampledCurve& boundary,
                      const Region& region, int depth,
                      const IterateOptions& opts);

}  // namespace expdyn
