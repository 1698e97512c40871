#include "expdyn/curve.hpp"

#include <algorithm>
#include <cmath>

namespace expdyn {

namespace {

HPComplex unit(const HPComplex& v) {
  HPReal m = v.abs();
  if (m.is_zero()) return v;
  return {v.re() / m, v.im() / m, v.max_exponent_bits()};
}

// Exact-sign 2D cross product: the multiplications run at doubled precision,
// so the sign of the computed value is the sign of the true value.
int cross_sign(const HPComplex& o, const HPComplex& a, const HPComplex& b) {
  unsigned prec = 2 * std::max({o.precision(), a.precision(), b.precision()}) + 8;
  auto widen = [&](const HPReal& x) {
    HPReal w(prec);
    mpfr_set(w.raw(), x.raw(), MPFR_RNDN);
    return w;
  };
  HPReal ax = widen(a.re()) - widen(o.re());
  HPReal ay = widen(a.im()) - widen(o.im());
  HPReal bx = widen(b.re()) - widen(o.re());
  HPReal by = widen(b.im()) - widen(o.im());
  return (ax * by - ay * bx).sign();
}

HPReal cross(const HPComplex& a, const HPComplex& b) {
  return a.re() * b.im() - a.im() * b.re();
}

HPReal dot(const HPComplex& a, const HPComplex& b) {
  return a.re() * b.re() + a.im() * b.im();
}

// Angle between two directions modulo pi, in [0, pi).
HPReal direction_angle(const HPComplex& u, const HPComplex& v) {
  HPReal a = HPReal::atan2(cross(u, v), dot(u, v)).abs();
  HPReal pi = HPReal::pi(a.precision());
  if (a > pi.mul_2exp(-1)) a = pi - a;
  // map the pi endpoint (anti-parallel) to 0
  if (a == pi) a = HPReal(0.0, a.precision());
  return a;
}

size_t segment_index(const SampledCurve& c, const HPReal& t) {
  if (c.samples.size() < 2) throw InvalidArgument("curve needs >= 2 samples");
  size_t lo = 0, hi = c.samples.size() - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (c.samples[mid].t <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

HPComplex SampledCurve::at(const HPReal& t) const {
  size_t i = segment_index(*this, t);
  const CurveSample& a = samples[i];
  const CurveSample& b = samples[i + 1];
  HPReal span = b.t - a.t;
  if (span.is_zero()) return a.z;
  HPReal u = (t - a.t) / span;
  return {a.z.re() + u * (b.z.re() - a.z.re()),
          a.z.im() + u * (b.z.im() - a.z.im()), a.z.max_exponent_bits()};
}

HPComplex SampledCurve::segment_direction(const HPReal& t) const {
  size_t i = segment_index(*this, t);
  return unit(samples[i + 1].z - samples[i].z);
}

HPReal SampledCurve::diameter() const {
  HPReal best(0.0, samples.empty() ? kDefaultPrecisionBits
                                   : samples[0].z.precision());
  for (size_t i = 0; i < samples.size(); ++i)
    for (size_t j = i + 1; j < samples.size(); ++j)
      best = HPReal::max(best, distance(samples[i].z, samples[j].z));
  return best;
}

SampledCurve make_segment(const HPComplex& a, const HPComplex& b, size_t n,
                          unsigned prec) {
  if (n < 2) throw InvalidArgument("segment needs >= 2 samples");
  SampledCurve c;
  HPComplex dir = unit(b - a);
  for (size_t i = 0; i < n; ++i) {
    HPReal t = HPReal(static_cast<double>(i), prec) /
               HPReal(static_cast<double>(n - 1), prec);
    HPComplex z{a.re() + t * (b.re() - a.re()), a.im() + t * (b.im() - a.im()),
                a.max_exponent_bits()};
    c.samples.push_back({t, z, dir});
  }
  return c;
}

SampledCurve make_circle(const HPComplex& c0, const HPReal& r, size_t n,
                         const HPReal& phase0, unsigned prec) {
  if (n < 3) throw InvalidArgument("circle needs >= 3 samples");
  SampledCurve c;
  c.closed = true;
  HPReal two_pi = HPReal::two_pi(prec);
  for (size_t i = 0; i <= n; ++i) {
    HPReal t = HPReal(static_cast<double>(i), prec) /
               HPReal(static_cast<double>(n), prec);
    HPReal th = phase0 + t * two_pi;
    HPComplex z{c0.re() + r * th.cos(), c0.im() + r * th.sin(),
                c0.max_exponent_bits()};
    HPComplex tangent{-th.sin(), th.cos(), c0.max_exponent_bits()};
    if (i == n) z = c.samples.front().z;  // exact closure
    c.samples.push_back({t, z, tangent});
  }
  return c;
}

SampledCurve hair_polyline(const HairSample& hair) {
  SampledCurve c;
  const size_t n = hair.points.size();
  if (n < 2) throw InvalidArgument("hair needs >= 2 points for a polyline");
  unsigned prec = hair.points[0].z.precision();
  for (size_t i = 0; i < n; ++i) {
    HPReal t = HPReal(static_cast<double>(i), prec) /
               HPReal(static_cast<double>(n - 1), prec);
    c.samples.push_back({t, hair.points[i].z, std::nullopt});
  }
  return c;
}

namespace {

struct EvalPoint {
  HPReal t;
  HPComplex source;
  HPComplex image;
  std::optional<HPComplex> tangent;
};

// n-step orbit with unit-normalised derivative pushforward.
bool eval_orbit(const ExpMap& map, const HPComplex& z0,
                const std::optional<HPComplex>& tan0, int n, HPComplex& out,
                std::optional<HPComplex>& tan_out, int& failed_step) {
  HPComplex z = z0;
  std::optional<HPComplex> tan = tan0;
  for (int j = 1; j <= n; ++j) {
    try {
      z = map.apply(z);
    } catch (const ExponentBudgetExceeded&) {
      failed_step = j;
      return false;
    }
    if (tan) tan = unit(*tan * unit(z));  // Df = f, direction only
  }
  out = z;
  tan_out = tan;
  return true;
}

}  // namespace

IterateResult iterate_curve(const ExpMap& map, const SampledCurve& c, int n,
                            const IterateOptions& opts) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  if (c.samples.size() < 2) throw InvalidArgument("curve needs >= 2 samples");
  const unsigned prec = map.precision();

  int step_eff = n;
  std::optional<int> stop;

  while (true) {
    std::vector<EvalPoint> pts;
    pts.reserve(c.samples.size());
    bool restart = false;
    auto eval_at = [&](const HPReal& t, const HPComplex& src,
                       const std::optional<HPComplex>& tan,
                       EvalPoint& out_pt) -> bool {
      HPComplex img;
      std::optional<HPComplex> tan_img;
      int failed = 0;
      if (!eval_orbit(map, src, tan, step_eff, img, tan_img, failed)) {
        stop = stop ? std::min(*stop, failed) : failed;
        step_eff = failed - 1;
        return false;
      }
      out_pt = {t, src, img, tan_img};
      return true;
    };

    for (const CurveSample& s : c.samples) {
      EvalPoint p;
      if (!eval_at(s.t, s.z, s.tangent, p)) {
        restart = true;
        break;
      }
      pts.push_back(std::move(p));
    }
    if (restart) continue;

    // Adaptive refinement: absolute chord length plus image turning angle.
    // Turn checks skip declared corners (they never flatten out), and
    // intervals below a relative width floor stop splitting.
    const bool use_chord = !opts.tol.is_zero();
    HPReal max_turn(opts.max_turn, prec);
    HPReal width_floor =
        (pts.back().t - pts.front().t).abs().mul_2exp(-52);
    auto is_corner = [&](const HPReal& t) {
      for (const HPReal& tc : c.corner_params)
        if (t == tc) return true;
      return false;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<EvalPoint> next;
      next.reserve(pts.size() * 2);
      std::vector<bool> split(pts.size(), false);
      auto splittable = [&](size_t i) {
        return pts[i + 1].t - pts[i].t > width_floor;
      };
      for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (use_chord && splittable(i) &&
            distance(pts[i].image, pts[i + 1].image) > opts.tol)
          split[i] = true;
      }
      for (size_t i = 1; i + 1 < pts.size(); ++i) {
        if (is_corner(pts[i].t)) continue;
        HPComplex u = pts[i].image - pts[i - 1].image;
        HPComplex v = pts[i + 1].image - pts[i].image;
        if (u.is_zero() || v.is_zero()) continue;
        HPReal a = HPReal::atan2(cross(u, v), dot(u, v)).abs();
        if (a > max_turn) {
          if (splittable(i - 1)) split[i - 1] = true;
          if (splittable(i)) split[i] = true;
        }
      }
      size_t want = pts.size();
      for (bool s : split)
        if (s) ++want;
      if (want > opts.sample_cap)
        throw SampleCapExceeded("refinement would exceed the sample cap");

      for (size_t i = 0; i < pts.size(); ++i) {
        next.push_back(pts[i]);
        if (i + 1 < pts.size() && split[i]) {
          HPReal tm = (pts[i].t + pts[i + 1].t).mul_2exp(-1);
          HPComplex src = c.at(tm);
          EvalPoint p;
          if (!eval_at(tm, src, std::nullopt, p)) {
            restart = true;
            break;
          }
          next.push_back(std::move(p));
          changed = true;
        }
      }
      if (restart) break;
      pts.swap(next);
    }
    if (restart) continue;

    IterateResult out;
    out.steps_done = step_eff;
    out.budget_stop_step = (step_eff < n) ? stop : std::nullopt;
    out.curve.closed = c.closed;
    out.curve.corner_params = c.corner_params;
    for (EvalPoint& p : pts)
      out.curve.samples.push_back({p.t, p.image, p.tangent});
    return out;
  }
}

long winding_number(const SampledCurve& c, const HPComplex& z) {
  if (!c.closed) throw InvalidArgument("winding number needs a closed curve");
  const unsigned prec = z.precision();
  // On-curve rejection: distance from z to every segment.
  HPReal tol = HPReal::pow2(-static_cast<long>(prec) / 2, prec);
  for (size_t i = 0; i + 1 < c.samples.size(); ++i) {
    const HPComplex& a = c.samples[i].z;
    const HPComplex& b = c.samples[i + 1].z;
    HPComplex ab = b - a;
    HPReal len2 = dot(ab, ab);
    HPReal u = len2.is_zero() ? HPReal(0.0, prec)
                              : HPReal::min(HPReal(1.0, prec),
                                            HPReal::max(HPReal(0.0, prec),
                                                        dot(z - a, ab) / len2));
    HPComplex proj{a.re() + u * ab.re(), a.im() + u * ab.im(),
                   a.max_exponent_bits()};
    if (distance(z, proj) < tol)
      throw PointOnCurve("query point lies on the curve");
  }

  HPReal total(0.0, prec);
  for (size_t i = 0; i + 1 < c.samples.size(); ++i) {
    HPComplex a = c.samples[i].z - z;
    HPComplex b = c.samples[i + 1].z - z;
    total = total + HPReal::atan2(cross(a, b), dot(a, b));
  }
  HPReal w = total / HPReal::two_pi(prec);
  double wd = w.to_double();
  return std::lround(wd);
}

namespace {

bool segments_cross(const HPComplex& p1, const HPComplex& p2,
                    const HPComplex& q1, const HPComplex& q2, unsigned prec,
                    HPReal& s_out, HPReal& u_out) {
  // Exact-orientation test with symbolic perturbation: a vertex exactly on
  // the other segment counts as lying on its positive side, so a genuine
  // pass-through is counted once and a same-side graze not at all.
  auto perturbed = [](int o) { return o == 0 ? 1 : o; };
  int o1 = perturbed(cross_sign(p1, p2, q1));
  int o2 = perturbed(cross_sign(p1, p2, q2));
  int o3 = perturbed(cross_sign(q1, q2, p1));
  int o4 = perturbed(cross_sign(q1, q2, p2));
  if (o1 == o2 || o3 == o4) return false;
  HPComplex r = p2 - p1, s = q2 - q1;
  HPReal denom = cross(r, s);
  if (denom.is_zero()) return false;
  s_out = cross(q1 - p1, s) / denom;
  u_out = cross(q1 - p1, r) / denom;
  (void)prec;
  return true;
}

struct SegBox {
  double re_lo, re_hi, im_lo, im_hi;
};

// Monotone pseudo-coordinate from the binary exponent, finite at any scale
// the exponent budget admits; collapsing within a factor-2 band only makes
// the prefilter conservative.
double log_coord(const HPReal& x) {
  if (x.is_zero()) return 0.0;
  double e = static_cast<double>(x.exponent2());
  double g = e >= 0.0 ? e + 1.0 : 1.0 / (1.0 - e);
  return x.sign() > 0 ? g : -g;
}

SegBox box_of(const HPComplex& a, const HPComplex& b) {
  double are = log_coord(a.re()), bre = log_coord(b.re());
  double aim = log_coord(a.im()), bim = log_coord(b.im());
  return {std::min(are, bre), std::max(are, bre), std::min(aim, bim),
          std::max(aim, bim)};
}

bool boxes_meet(const SegBox& x, const SegBox& y) {
  return x.re_lo <= y.re_hi && y.re_lo <= x.re_hi && x.im_lo <= y.im_hi &&
         y.im_lo <= x.im_hi;
}

}  // namespace

std::vector<Crossing> self_intersections(const SampledCurve& c) {
  std::vector<Crossing> out;
  const size_t m = c.samples.empty() ? 0 : c.samples.size() - 1;
  if (m < 3) return out;
  unsigned prec = c.samples[0].z.precision();
  std::vector<SegBox> boxes;
  boxes.reserve(m);
  for (size_t i = 0; i < m; ++i)
    boxes.push_back(box_of(c.samples[i].z, c.samples[i + 1].z));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 2; j < m; ++j) {
      if (c.closed && i == 0 && j == m - 1) continue;  // wrap adjacency
      if (!boxes_meet(boxes[i], boxes[j])) continue;
      HPReal s(prec), u(prec);
      if (!segments_cross(c.samples[i].z, c.samples[i + 1].z, c.samples[j].z,
                          c.samples[j + 1].z, prec, s, u))
        continue;
      HPComplex d1 = c.samples[i + 1].z - c.samples[i].z;
      HPComplex d2 = c.samples[j + 1].z - c.samples[j].z;
      HPComplex pt{c.samples[i].z.re() + s * d1.re(),
                   c.samples[i].z.im() + s * d1.im(),
                   c.samples[i].z.max_exponent_bits()};
      Crossing x{c.samples[i].t + s * (c.samples[i + 1].t - c.samples[i].t),
                 c.samples[j].t + u * (c.samples[j + 1].t - c.samples[j].t),
                 pt, direction_angle(d1, d2)};
      out.push_back(std::move(x));
    }
  }
  return out;
}

std::vector<Crossing> crossings_between(const SampledCurve& a,
                                        const SampledCurve& b) {
  std::vector<Crossing> out;
  if (a.samples.size() < 2 || b.samples.size() < 2) return out;
  unsigned prec = a.samples[0].z.precision();
  const size_t ma = a.samples.size() - 1, mb = b.samples.size() - 1;
  std::vector<SegBox> bb;
  bb.reserve(mb);
  for (size_t j = 0; j < mb; ++j)
    bb.push_back(box_of(b.samples[j].z, b.samples[j + 1].z));
  for (size_t i = 0; i < ma; ++i) {
    SegBox ba = box_of(a.samples[i].z, a.samples[i + 1].z);
    for (size_t j = 0; j < mb; ++j) {
      if (!boxes_meet(ba, bb[j])) continue;
      HPReal s(prec), u(prec);
      if (!segments_cross(a.samples[i].z, a.samples[i + 1].z, b.samples[j].z,
                          b.samples[j + 1].z, prec, s, u))
        continue;
      HPComplex d1 = a.samples[i + 1].z - a.samples[i].z;
      HPComplex d2 = b.samples[j + 1].z - b.samples[j].z;
      HPComplex pt{a.samples[i].z.re() + s * d1.re(),
                   a.samples[i].z.im() + s * d1.im(),
                   a.samples[i].z.max_exponent_bits()};
      out.push_back(
          {a.samples[i].t + s * (a.samples[i + 1].t - a.samples[i].t),
           b.samples[j].t + u * (b.samples[j + 1].t - b.samples[j].t), pt,
           direction_angle(d1, d2)});
    }
  }
  return out;
}

AngleSet angle_set(const ExpMap& map, const SampledCurve& c, int n,
                   const std::vector<HairSample>& hair_family,
                   const AngleSetOptions& opts) {
  AngleSet out;
  out.n = n;
  IterateResult img = iterate_curve(map, c, n, opts.iterate);
  out.budget_stop_step = img.budget_stop_step;
  for (size_t h = 0; h < hair_family.size(); ++h) {
    SampledCurve hl = hair_polyline(hair_family[h]);
    for (const Crossing& x : crossings_between(img.curve, hl)) {
      AngleWitness w{x.angle, x.t1, h, hair_family[h].itinerary.str(),
                     x.point};
      if (x.angle.to_double() < kTransversalityFloor)
        out.tangential.push_back(std::move(w));
      else
        out.angles.push_back(std::move(w));
    }
  }
  return out;
}

bool angles_included(const AngleSet& a, const AngleSet& b, double tol) {
  for (const AngleWitness& wa : a.angles) {
    bool hit = false;
    for (const AngleWitness& wb : b.angles) {
      if ((wa.angle - wb.angle).abs().to_double() <= tol) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace expdyn
