// Acceptance suite: one quantitative check per criterion, one line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "expdyn/constructions.hpp"
#include "oracle.hpp"

using namespace expdyn;

namespace {

constexpr unsigned P = kDefaultPrecisionBits;
HPComplex cplx(double re, double im) { return {re, im, P}; }
HPReal hp(double x) { return HPReal(x, P); }

int g_failures = 0;

void report(int id, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Largest safe anchor: |lambda| e^R must stay within the exponent budget
// with room for the level-2 value.
double max_anchor(const ExpMap& m) {
  double budget_ln = static_cast<double>(m.max_exponent_bits()) * 0.693147;
  return std::log(budget_ln) - m.log_abs_lambda().to_double() - 0.4;
}

const std::vector<std::string> kItineraries = {"0*",    "1*",     "(01)*",
                                               "(10)*", "(011)*", "(001)*"};

void criterion_1_lemelt() {
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<HPComplex> lambdas = {cplx(1, 0), cplx(0, 1),
                                          cplx(1e-9, 0), cplx(1, 1)};
  long points = 0, failures = 0;
  for (const HPComplex& lambda : lambdas) {
    ExpMap m = make_map(lambda);
    double lo = m.K().to_double() + 0.05;
    double hi = max_anchor(m);
    const int n_anchors = 42;
    std::vector<HPReal> anchors;
    for (int i = 0; i < n_anchors; ++i)
      anchors.push_back(hp(lo + (hi - lo) * (i + 0.5) / n_anchors));
    for (const std::string& it : kItineraries) {
      HairSample h = trace_hair(m, Itinerary::parse(it), 4, anchors);
      for (const HairPoint& pt : h.points) {
        ++points;
        for (int n : {1, 2}) {
          LemEltReport rep = verify_lemelt(m, pt.orbit, n);
          if (!rep.pass()) ++failures;
        }
      }
    }
  }
  double dt = seconds_since(t0);
  report(1, points >= 1000 && failures == 0 && dt < 60.0,
         "growth/argument inequalities on hair orbits, n in {1,2}",
         std::to_string(points) + " points, " + std::to_string(failures) +
             " failures, " + std::to_string(dt).substr(0, 5) + " s");
}

void criterion_2_roundtrip() {
  HPReal tol = HPReal::pow2(16 - static_cast<long>(P), P);
  long total = 0, bad = 0;
  HPReal worst(0.0, P);
  for (const HPComplex& lambda : {cplx(1, 0), cplx(0, 1)}) {
    ExpMap m = make_map(lambda);
    HPReal min_mod = m.lambda().abs() * m.K().exp();
    HPReal half_pi = HPReal::pi(P).mul_2exp(-1);
    for (int i = 0; i < 50; ++i) {
      HPReal r = min_mod * hp(i * 0.4).exp();
      for (int j = 0; j < 50; ++j) {
        HPReal th = half_pi * hp(-1.0 + 2.0 * (j + 0.5) / 50.0);
        HPComplex w{r * th.cos(), r * th.sin()};
        for (int s : {0, 1}) {
          HPReal err = oracle::rel_err(m.apply(inverse_branch(m, w, s)), w);
          worst = HPReal::max(worst, err);
          ++total;
          if (!(err <= tol)) ++bad;
        }
      }
    }
  }
  report(2, total == 10000 && bad == 0,
         "inverse-branch round-trip <= 2^(16-256) on a 10^4 grid",
         std::to_string(total) + " points, worst rel err 2^" +
             std::to_string(static_cast<long>(
                 worst.is_zero() ? -9999 : worst.exponent2())));
}

void criterion_3_contraction() {
  ExpMap m = make_map(cplx(1, 0));
  std::vector<HPReal> anchors = {hp(11), hp(12), hp(13.2), hp(20), hp(50)};
  bool ok = true;
  for (const char* it : {"0*", "(01)*", "1*"}) {
    HairSample d10 = trace_hair(m, Itinerary::parse(it), 10, anchors);
    HairSample d20 = trace_hair(m, Itinerary::parse(it), 20, anchors);
    for (size_t i = 0; i < anchors.size(); ++i) {
      HPReal move = distance(d10.points[i].z, d20.points[i].z);
      if (!(move < d10.points[i].err.worst_bound(P))) ok = false;
      // error_bound(20) <= 2000^-10 * error_bound(10) * 10
      double lhs = d20.points[i].err.worst_log2;
      double rhs = d10.points[i].err.worst_log2 -
                   10.0 * std::log2(2000.0) + std::log2(10.0);
      if (!(lhs <= rhs)) ok = false;
      // sharp tower certificates tell the same story
      TowerMagnitude floor10 = tower_mul(
          d10.points[i].err.inv_sharp,
          tower_from_real(
              (hp(2000.0).log() * hp(10.0) - hp(10.0).log()).exp()));
      if (d20.points[i].err.inv_sharp < floor10) ok = false;
    }
  }
  report(3, ok, "depth 10 -> 20 movement below error_bound(10), bounds shrink",
         "15 anchors x 3 itineraries, points bit-stable past the budget level");
}

void criterion_4_geometry() {
  bool ok = true;
  double worst = 0.0;
  for (const HPComplex& lambda : {cplx(1, 0), cplx(0, 1)}) {
    ExpMap m = make_map(lambda);
    double lo = m.K().to_double() + 0.05, hi = max_anchor(m);
    std::vector<HPReal> anchors;
    for (int i = 0; i < 15; ++i)
      anchors.push_back(hp(lo + (hi - lo) * (i + 0.5) / 15.0));
    anchors.push_back(hp(20));
    anchors.push_back(hp(50));
    for (const char* it : {"0*", "1*", "(01)*"}) {
      HairSample h = trace_hair(m, Itinerary::parse(it), 8, anchors);
      for (size_t i = 0; i + 1 < h.points.size(); ++i) {
        HPComplex chord = h.points[i + 1].z - h.points[i].z;
        double arg = std::abs(chord.arg().to_double());
        worst = std::max(worst, arg);
        if (!(arg < 1.0 / 50.0 + 1e-3)) ok = false;
      }
    }
  }
  // the 0* hair of lambda = 1 lies on the real axis within its bound
  ExpMap m1 = make_map(cplx(1, 0));
  HairSample real_hair =
      trace_hair(m1, Itinerary::parse("0*"), 10, {hp(11), hp(12), hp(30)});
  for (const HairPoint& p : real_hair.points)
    if (!(p.z.im().abs() < p.err.worst_bound(P))) ok = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |arg tangent| = %.3e < 0.021", worst);
  report(4, ok, "hair tangents within 1/50 + 1e-3; real hair on the axis",
         buf);
}

void criterion_5_periodic() {
  ExpMap m = make_map(cplx(1, 0));
  PeriodicPoint p = periodic_point(m, {0});
  HPComplex newton =
      oracle::newton_fixed_point(cplx(1, 0), cplx(0.3, 1.3), 100);
  HPReal gap = distance(p.z, newton);
  bool ok = gap < HPReal::from_decimal("1e-60", P) &&
            p.multiplier_abs > hp(1.0) &&
            p.residual < HPReal::from_decimal("1e-50", P);
  report(5, ok, "cycle-0 point vs Newton oracle, repelling, tiny residual",
         "gap 2^" + std::to_string(gap.is_zero() ? -9999 : gap.exponent2()) +
             ", residual 2^" +
             std::to_string(p.residual.is_zero() ? -9999
                                                 : p.residual.exponent2()) +
             ", |Df| = " + p.multiplier_abs.to_decimal(6));
}

void criterion_6_circle() {
  ExpMap m = make_map(cplx(1, 0));
  HPReal r = m.K() + hp(0.5);
  SampledCurve seg = make_segment({r, hp(0.0)}, {r, HPReal::two_pi(P)}, 65, P);
  seg.samples.back().z = HPComplex{r, HPReal::two_pi(P)};
  IterateResult img = iterate_curve(m, seg, 1, {hp(500.0), 0.1, 1 << 18});
  HPReal radius = m.lambda().abs() * r.exp();
  HPReal tol = HPReal::from_decimal("1e-30", P);
  bool ok = img.steps_done == 1;
  HPReal worst(0.0, P);
  for (const CurveSample& s : img.curve.samples) {
    HPReal dev = oracle::rel_err(s.z.abs(), radius);
    worst = HPReal::max(worst, dev);
    if (!(dev < tol)) ok = false;
  }
  // closed up
  if (!(distance(img.curve.samples.front().z, img.curve.samples.back().z) <
        radius * HPReal::pow2(-200, P)))
    ok = false;
  report(6, ok, "vertical 2-pi segment at K+0.5 maps onto the circle",
         std::to_string(img.curve.samples.size()) +
             " samples, worst radial rel dev 2^" +
             std::to_string(worst.is_zero() ? -9999 : worst.exponent2()));
}

void criterion_7_four_arc() {
  auto t0 = std::chrono::steady_clock::now();
  ExpMap m = make_map(cplx(1, 0));
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> mag(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> ang(-3.14159265, 3.14159265);
  int runs = 0, bad = 0;
  for (int i = 0; i < 20; ++i) {
    double r = std::exp(mag(rng)), th = ang(rng);
    HPComplex z = cplx(r * std::cos(th), r * std::sin(th));
    for (double eps : {0.5, 0.1}) {
      ++runs;
      try {
        FourArcResult res = four_arc_jordan(m, z, hp(eps));
        bool good = (res.cert.winding == 1 || res.cert.winding == -1) &&
                    res.cert.diameter <= hp(eps) && res.cert.jordan_ok;
        for (const HPReal& a : res.cert.junction_angles)
          if (a.to_double() < 1e-3) good = false;
        if (std::labs(winding_number(res.image, z)) != 1) good = false;
        if (!good) ++bad;
      } catch (const Error&) {
        ++bad;
      }
    }
  }
  double dt = seconds_since(t0);
  report(7, bad == 0 && dt < 300.0,
         "four-arc Jordan certificates for 20 random targets x 2 eps",
         std::to_string(runs) + " runs, " + std::to_string(bad) +
             " failures, " + std::to_string(dt).substr(0, 5) + " s");
}

void criterion_8_nice() {
  ExpMap m = make_map(cplx(1, 0));
  SampledCurve seg = make_segment(cplx(-5, 0), cplx(5, 0), 33, P);
  NiceReport half = nice_check(m, seg, halfplane_region(true), 5,
                               {hp(0.0), 0.2, size_t(1) << 17});
  bool ok = half.nice_up_to_depth() && half.depth_checked == 5;

  SampledCurve circ = make_circle(cplx(0, 0), hp(1.0), 64, HPReal::pi(P), P);
  NiceReport disk = nice_check(m, circ, disk_region(cplx(0, 0), hp(1.0)), 1,
                               {hp(0.05), 0.1, size_t(1) << 17});
  HPComplex e_inv{(-hp(1.0)).exp(), hp(0.0)};
  bool disk_ok = disk.violation.has_value() && disk.violation->n == 1 &&
                 distance(disk.violation->image, e_inv) <
                     HPReal::from_decimal("1e-30", P);
  report(8, ok && disk_ok,
         "half-plane NiceUpTo(5); unit disk violated at n=1 by f(-1)",
         std::string("half-plane depth ") +
             std::to_string(half.depth_checked) + ", disk witness |err| 2^" +
             std::to_string(
                 disk.violation
                     ? distance(disk.violation->image, e_inv).exponent2()
                     : 0));
}

void criterion_9_angles() {
  auto t0 = std::chrono::steady_clock::now();
  ExpMap m = make_map(cplx(1, 0));

  // Hair family for levels 0..2: anchors at the three magnitude bands the
  // images of curves near Re = 11 visit.
  std::vector<HPReal> anchors;
  for (double a : {10.55, 10.9, 11.3, 11.8, 12.4, 13.0, 13.4})
    anchors.push_back(hp(a));
  for (double a : {42000.0, 50000.0, 58000.0, 66000.0, 74000.0, 82000.0,
                   86000.0})
    anchors.push_back(hp(a));
  for (double a : {41000.0, 50000.0, 58000.0, 66000.0, 74000.0, 82000.0,
                   86000.0})
    anchors.push_back(hp(a).exp());  // level-2 band: e^41000 .. e^86000
  std::vector<HairSample> family{
      trace_hair(m, Itinerary::parse("0*"), 8, anchors)};

  AngleSetOptions opts;
  opts.iterate.max_turn = 5e-4;
  opts.iterate.sample_cap = size_t(1) << 19;

  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> tilt(0.35, 1.35);
  std::uniform_real_distribution<double> off(-0.31, 0.29);
  int curves = 0, holds = 0;
  for (int i = 0; i < 10; ++i) {
    double th = tilt(rng);
    double x0 = 11.0 + off(rng);
    // short transversal segment through (x0, ~0); length keeps the n=2
    // image to a few windings
    double h = 2.2e-4;
    SampledCurve c = make_segment(
        cplx(x0 - h * std::cos(th), 1.3e-5 - h * std::sin(th)),
        cplx(x0 + h * std::cos(th), 1.3e-5 + h * std::sin(th)), 9, P);
    ++curves;
    AngleSet a0 = angle_set(m, c, 0, family, opts);
    AngleSet a1 = angle_set(m, c, 1, family, opts);
    AngleSet a2 = angle_set(m, c, 2, family, opts);
    bool inc01 = !a0.angles.empty() && angles_included(a0, a1, 1e-3);
    bool inc12 = !a1.angles.empty() && angles_included(a1, a2, 1e-3);
    if (inc01 && inc12) ++holds;
  }
  double dt = seconds_since(t0);
  report(9, curves == 10 && holds == 10,
         "A_n subset A_(n+1) within 1e-3 rad for n in {0,1}, 10 seed curves",
         std::to_string(holds) + "/10 curves, " +
             std::to_string(dt).substr(0, 5) + " s");
}

void criterion_10_honesty() {
  auto t0 = std::chrono::steady_clock::now();
  ExpMap m = make_map(cplx(1, 0));
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> tilt(0.3, 1.2), x0d(10.8, 12.8),
      tmag(std::log(0.3), std::log(5.0)), tang(-3.1, 3.1);
  std::uniform_int_distribution<int> it_pick(0, 2);
  const char* its[] = {"0*", "1*", "(01)*"};

  int runs = 0, false_certs = 0, horizons = 0, certs = 0, gates = 0;
  auto audit = [&](const SurroundOutcome& o, const HPComplex& target,
                   const HPReal& eps) {
    if (o.certified()) {
      ++certs;
      // independent replay: winding and diameter oracles on the image
      bool replay_ok = false;
      try {
        replay_ok =
            std::labs(winding_number(o.certified_image, target)) == 1 &&
            o.certified_image.diameter() <= eps;
      } catch (const Error&) {
      }
      if (!replay_ok) ++false_certs;
    } else if (o.horizon) {
      ++horizons;
    }
  };
  for (int i = 0; i < 50; ++i) {
    std::string it = its[it_pick(rng)];
    HairSample hair = trace_hair(m, Itinerary::parse(it), 8,
                                 {hp(10.6), hp(11.5), hp(12.7), hp(13.3)});
    double th = tilt(rng), x0 = x0d(rng);
    double hair_im = hair.points[0].z.im().to_double();
    SampledCurve c = make_segment(
        cplx(x0 - 0.9 * std::cos(th), hair_im + 0.013 - 0.9 * std::sin(th)),
        cplx(x0 + 0.9 * std::cos(th), hair_im + 0.013 + 0.9 * std::sin(th)),
        14, P);
    double r = std::exp(tmag(rng)), a = tang(rng);
    HPComplex target = cplx(r * std::cos(a), r * std::sin(a));
    ++runs;
    if (i % 2 == 0) {
      try {
        audit(surround_from_curve(m, c, hair, target, hp(0.5), 5), target,
              hp(0.5));
      } catch (const NoTransversalCrossing&) {
        ++gates;  // acceptable precondition outcome for a non-crossing draw
      }
    } else {
      RefinementChain chain =
          refine_dense_orbit(m, c, {{target, hp(0.5)}}, 5);
      for (const RefinementStage& st : chain.stages)
        audit(st.outcome, st.target, st.epsilon);
      if (chain.stages.empty()) ++gates;
    }
  }
  double dt = seconds_since(t0);
  report(10, runs == 50 && false_certs == 0,
         "surround/refine fuzz: no false certificates, 50 configurations",
         std::to_string(certs) + " certified, " + std::to_string(horizons) +
             " horizons, " + std::to_string(gates) + " gated, " +
             std::to_string(false_certs) + " false, " +
             std::to_string(dt).substr(0, 5) + " s");
}

}  // namespace

int main() {
  criterion_1_lemelt();
  criterion_2_roundtrip();
  criterion_3_contraction();
  criterion_4_geometry();
  criterion_5_periodic();
  criterion_6_circle();
  criterion_7_four_arc();
  criterion_8_nice();
  criterion_9_angles();
  criterion_10_honesty();
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
