#include "expdyn/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace expdyn {

namespace {

HPReal principal(HPReal theta) {
  const unsigned prec = theta.precision();
  return theta.remainder(HPReal::two_pi(prec));
}

}  // namespace

HPComplex sector_preimage(const ExpMap& map, const HPComplex& z,
                          const HPReal& eps) {
  if (z.is_zero()) throw ZeroTarget();
  const unsigned prec = map.precision();
  if (!(eps > HPReal(0.0, prec)) || !(eps < HPReal(0.5, prec)))
    throw InvalidArgument("eps must lie in (0, 1/2)");

  HPReal pi = HPReal::pi(prec);
  HPReal two_pi = pi.mul_2exp(1);
  HPReal quarter_pi = pi.mul_2exp(-2);
  HPComplex w0 = hp_log(div(z, map.lambda()));
  // Far preimages w = w0 + 2*pi*i*k point almost straight up, so
  // arg(w/lambda) tends to A = pi/2 - arg(lambda) (principal).
  HPReal A = principal(pi.mul_2exp(-1) - map.arg_lambda());
  HPReal y_min(9.0, prec);
  // Amplification |Df^2(y)| = |z||w| must leave room for the round-trip.
  HPReal amp_cap = HPReal::pow2(static_cast<long>(prec) / 2, prec);

  for (long m = 1; m < 1000; ++m) {
    // k aligning ln|w/lambda| with A + 2*pi*m, i.e. Re y = Im y.
    HPReal target = A + HPReal(static_cast<double>(m), prec) * two_pi;
    HPReal k_center =
        ((target + map.log_abs_lambda()).exp() / two_pi).round();
    for (long dk = -8; dk <= 8; ++dk) {
      HPReal k = k_center + HPReal(static_cast<double>(dk), prec);
      if (!(k > HPReal(0.0, prec))) continue;
      HPComplex w{w0.re(), w0.im() + two_pi * k, z.max_exponent_bits()};
      if (z.abs() * w.abs() > amp_cap)
        throw ExponentBudgetExceeded(
            (z.abs() * w.abs()).exponent2(), static_cast<double>(prec) / 2);
      HPComplex y0 = hp_log(div(w, map.lambda()));
      HPReal j = ((y0.re() - y0.im()) / two_pi).round();
      HPComplex y{y0.re(), y0.im() + two_pi * j, z.max_exponent_bits()};
      if (y.abs() < y_min) continue;
      if ((y.arg() - quarter_pi).abs() < eps) return y;
    }
  }
  throw ExponentBudgetExceeded(0.0, 0.0);  // unreachable for eps in range
}

namespace {

// Intersection of |p| = r with |p - 2*pi*i| = rho, on the Re > 0 side.
HPComplex circle_pair_corner(const HPReal& r, const HPReal& rho,
                             unsigned prec) {
  HPReal d = HPReal::two_pi(prec);
  HPReal a = (d * d + r * r - rho * rho) / (d.mul_2exp(1));
  HPReal h2 = r * r - a * a;
  if (h2.sign() <= 0)
    throw VerificationFailed("corner", "circle families do not intersect");
  return {h2.sqrt(), a, kDefaultMaxExponentBits};
}

struct QuadSide {
  HPComplex center;  // 0 or 2*pi*i
  HPReal radius;
  HPReal theta_a, theta_b;  // traversal angles about the center
};

void sample_side(const QuadSide& s, size_t n, unsigned prec, bool skip_first,
                 std::vector<std::pair<HPComplex, HPComplex>>& out) {
  for (size_t i = skip_first ? 1 : 0; i <= n; ++i) {
    HPReal u = HPReal(static_cast<double>(i), prec) /
               HPReal(static_cast<double>(n), prec);
    HPReal th = s.theta_a + u * (s.theta_b - s.theta_a);
    HPComplex p{s.center.re() + s.radius * th.cos(),
                s.center.im() + s.radius * th.sin(), kDefaultMaxExponentBits};
    int dir = (s.theta_b - s.theta_a).sign();
    HPComplex tangent{-th.sin() * HPReal(static_cast<double>(dir), prec),
                      th.cos() * HPReal(static_cast<double>(dir), prec),
                      kDefaultMaxExponentBits};
    out.emplace_back(p, tangent);
  }
}

HPReal angle_about(const HPComplex& p, const HPComplex& center) {
  return (p - center).arg();
}

}  // namespace

FourArcResult four_arc_jordan(const ExpMap& map, const HPComplex& z,
                              const HPReal& eps) {
  if (z.is_zero()) throw ZeroTarget();
  const unsigned prec = map.precision();
  if (!(eps > HPReal(0.0, prec))) throw InvalidArgument("eps must be > 0");

  HPComplex y = sector_preimage(map, z, HPReal(0.3, prec));
  HPComplex w = map.apply(y);
  HPComplex two_pi_i{HPReal(0.0, prec), HPReal::two_pi(prec),
                     kDefaultMaxExponentBits};
  HPReal deriv_scale = z.abs() * w.abs();  // |Df^2(y)|
  HPReal ry = y.abs();
  HPReal rho_y = (y - two_pi_i).abs();

  // Quadrilateral half-width: image diameter is about |Df^2| * quad size.
  HPReal h = eps / (HPReal(8.0, prec) * deriv_scale);
  const size_t n_side = 48;
  std::string fail_field = "winding";
  std::string fail_detail;

  for (int attempt = 0; attempt < 8; ++attempt, h = h.mul_2exp(-1)) {
    HPReal r_hi = ry + h, r_lo = ry - h;
    HPReal rho_hi = rho_y + h, rho_lo = rho_y - h;
    HPComplex origin{HPReal(0.0, prec), HPReal(0.0, prec),
                     kDefaultMaxExponentBits};

    HPComplex corner_a = circle_pair_corner(r_hi, rho_lo, prec);
    HPComplex corner_b = circle_pair_corner(r_hi, rho_hi, prec);
    HPComplex corner_c = circle_pair_corner(r_lo, rho_hi, prec);
    HPComplex corner_d = circle_pair_corner(r_lo, rho_lo, prec);

    std::array<QuadSide, 4> sides = {
        QuadSide{origin, r_hi, angle_about(corner_a, origin),
                 angle_about(corner_b, origin)},
        QuadSide{two_pi_i, rho_hi, angle_about(corner_b, two_pi_i),
                 angle_about(corner_c, two_pi_i)},
        QuadSide{origin, r_lo, angle_about(corner_c, origin),
                 angle_about(corner_d, origin)},
        QuadSide{two_pi_i, rho_lo, angle_about(corner_d, two_pi_i),
                 angle_about(corner_a, two_pi_i)}};

    std::vector<std::pair<HPComplex, HPComplex>> loop;
    for (size_t s = 0; s < 4; ++s)
      sample_side(sides[s], n_side, prec, s != 0, loop);
    loop.back() = loop.front();  // exact closure at corner A

    FourArcResult res;
    res.y = y;
    // Arc records: sides about 2*pi*i are stored as origin-centred arcs
    // shifted down, with translate = +1.
    auto mk_arc = [&](const QuadSide& s) {
      bool translated = !s.center.is_zero();
      HPReal lo = HPReal::min(s.theta_a, s.theta_b);
      HPReal hi = HPReal::max(s.theta_a, s.theta_b);
      return ArcSpec{s.radius, lo, hi, translated ? 1 : 0};
    };
    res.arcs = {mk_arc(sides[0]), mk_arc(sides[2]), mk_arc(sides[1]),
                mk_arc(sides[3])};

    SampledCurve quad;
    quad.closed = true;
    const size_t total = loop.size() - 1;
    for (size_t i = 0; i < loop.size(); ++i) {
      HPReal t = HPReal(static_cast<double>(i), prec) /
                 HPReal(static_cast<double>(total), prec);
      quad.samples.push_back({t, loop[i].first, loop[i].second});
      if (i % n_side == 0 && i < loop.size() - 1)
        quad.corner_params.push_back(t);
    }
    res.preimage = quad;

    IterateResult img = iterate_curve(
        map, quad, 2,
        {HPReal(0.0, prec), 0.05, size_t(1) << 18});
    if (img.steps_done < 2) {
      fail_field = "budget";
      fail_detail = "f^2 exceeded the exponent budget";
      continue;
    }
    res.image = img.curve;

    FourArcCert cert;
    cert.retries = attempt;
    cert.roundtrip_error = distance(map.apply(w), z);
    cert.max_arc_length = HPReal(0.0, prec);
    for (const ArcSpec& a : res.arcs)
      cert.max_arc_length = HPReal::max(cert.max_arc_length, a.length());

    try {
      cert.winding = winding_number(res.image, z);
    } catch (const PointOnCurve&) {
      fail_field = "winding";
      fail_detail = "target on the image curve";
      continue;
    }
    if (cert.winding != 1 && cert.winding != -1) {
      fail_field = "winding";
      fail_detail = "winding " + std::to_string(cert.winding);
      continue;
    }
    cert.diameter = res.image.diameter();
    if (!(cert.diameter <= eps)) {
      fail_field = "diameter";
      fail_detail = "diameter " + cert.diameter.to_decimal(6);
      continue;
    }

    // Junction transversality, measured on the image polyline.
    bool angles_ok = true;
    for (size_t corner = 0; corner < 4; ++corner) {
      const HPReal& tc = res.preimage.corner_params[corner];
      size_t idx = 0;
      for (size_t i = 0; i < res.image.samples.size(); ++i)
        if (res.image.samples[i].t <= tc) idx = i;
      size_t before = idx > 0 ? idx - 1 : res.image.samples.size() - 2;
      size_t after = idx + 1 < res.image.samples.size() ? idx + 1 : 1;
      HPComplex u = res.image.samples[idx].z - res.image.samples[before].z;
      HPComplex v = res.image.samples[after].z - res.image.samples[idx].z;
      HPReal ang = HPReal::atan2(u.re() * v.im() - u.im() * v.re(),
                                 u.re() * v.re() + u.im() * v.im())
                       .abs();
      cert.junction_angles[corner] = ang;
      if (ang.to_double() < kTransversalityFloor) angles_ok = false;
    }
    if (!angles_ok) {
      fail_field = "junction_angle";
      fail_detail = "a junction fell below the transversality floor";
      continue;
    }

    cert.jordan_ok = self_intersections(res.image).empty();
    if (!cert.jordan_ok) {
      fail_field = "jordan";
      fail_detail = "image self-intersects away from junctions";
      continue;
    }
    res.cert = cert;
    return res;
  }
  throw VerificationFailed(fail_field, fail_detail);
}

namespace {

SampledCurve slice_curve(const SampledCurve& c, const HPReal& lo,
                         const HPReal& hi, size_t min_samples) {
  SampledCurve out;
  out.closed = false;
  unsigned prec = c.samples[0].z.precision();
  out.samples.push_back({lo, c.at(lo), std::nullopt});
  for (const CurveSample& s : c.samples)
    if (s.t > lo && s.t < hi) out.samples.push_back(s);
  out.samples.push_back({hi, c.at(hi), std::nullopt});
  while (out.samples.size() < min_samples) {
    std::vector<CurveSample> dense;
    for (size_t i = 0; i + 1 < out.samples.size(); ++i) {
      dense.push_back(out.samples[i]);
      HPReal tm = (out.samples[i].t + out.samples[i + 1].t).mul_2exp(-1);
      dense.push_back({tm, c.at(tm), std::nullopt});
    }
    dense.push_back(out.samples.back());
    out.samples.swap(dense);
  }
  (void)prec;
  return out;
}

}  // namespace

SurroundOutcome surround_from_curve(const ExpMap& map, const SampledCurve& c,
                                    const HairSample& hair, const HPComplex& z,
                                    const HPReal& eps, int budget) {
  if (z.is_zero()) throw ZeroTarget();
  const unsigned prec = map.precision();
  SurroundOutcome out;

  SampledCurve hl = hair_polyline(hair);
  std::vector<Crossing> crossings = crossings_between(c, hl);
  const Crossing* best = nullptr;
  for (const Crossing& x : crossings)
    if (x.angle.to_double() >= kTransversalityFloor &&
        (!best || x.angle > best->angle))
      best = &x;
  if (!best)
    throw NoTransversalCrossing(
        crossings.empty() ? "curve does not cross the hair"
                          : "all crossings are tangential");
  HPReal t_star = best->t1;

  HPComplex y = sector_preimage(map, z, HPReal(0.3, prec));
  const double needed_radius = y.abs().to_double();

  // Isolation half-width: half the gap to the nearest other crossing.
  HPReal half_window(0.0625, prec);
  for (const Crossing& x : crossings) {
    HPReal gap = (x.t1 - t_star).abs();
    if (!gap.is_zero())
      half_window = HPReal::min(half_window, gap.mul_2exp(-1));
  }

  HorizonReport hz;
  hz.needed_radius = needed_radius;
  double amp_log2 = 0.0;
  HPComplex orbit_pt = c.at(t_star);
  const double amp_limit = static_cast<double>(prec) - 48.0;

  for (int n = 1; n <= budget; ++n) {
    try {
      orbit_pt = map.apply(orbit_pt);
    } catch (const ExponentBudgetExceeded&) {
      hz.step = n;
      hz.stage = "exponent budget";
      hz.detail = "f^" + std::to_string(n) +
                  " of the crossing point is not representable";
      out.horizon = hz;
      return out;
    }
    amp_log2 += static_cast<double>(orbit_pt.abs().exponent2());
    if (amp_log2 > amp_limit) {
      hz.step = n;
      hz.stage = "angular information exhausted";
      hz.detail = "|Df^n| ~ 2^" + std::to_string(static_cast<long>(amp_log2)) +
                  " exceeds the " + std::to_string(prec) +
                  "-bit angular resolution at the crossing";
      out.horizon = hz;
      return out;
    }

    // Window sized so the image stays a few needed-radii long.
    double w_log2 = std::log2(20.0 * std::max(needed_radius, 1.0)) - amp_log2;
    HPReal w(prec);
    if (w_log2 < -(static_cast<double>(prec) - 16)) {
      hz.step = n;
      hz.stage = "parameter resolution";
      hz.detail = "window below parameter resolution";
      out.horizon = hz;
      return out;
    }
    w = HPReal::pow2(static_cast<long>(w_log2), prec);
    w = HPReal::min(w, half_window);
    HPReal lo = HPReal::max(HPReal(0.0, prec), t_star - w);
    HPReal hi = HPReal::min(HPReal(1.0, prec), t_star + w);
    SampledCurve piece = slice_curve(c, lo, hi, 17);

    IterateResult img;
    try {
      img = iterate_curve(map, piece, n,
                          {HPReal(0.0, prec), 0.02, size_t(1) << 16});
    } catch (const SampleCapExceeded&) {
      continue;  // window too wide at this depth; deeper n shrinks it
    }
    if (img.steps_done < n) continue;

    // C1 distance to the best origin-centred circle.
    HPReal r_hat(0.0, prec);
    for (const CurveSample& s : img.curve.samples) r_hat = r_hat + s.z.abs();
    r_hat = r_hat / HPReal(static_cast<double>(img.curve.samples.size()), prec);
    if (r_hat.is_zero()) continue;
    double pos_dev = 0.0, tan_dev = 0.0;
    for (size_t i = 0; i < img.curve.samples.size(); ++i) {
      const HPComplex& p = img.curve.samples[i].z;
      pos_dev = std::max(pos_dev,
                         ((p.abs() - r_hat) / r_hat).abs().to_double());
      if (i + 1 < img.curve.samples.size()) {
        HPComplex d = img.curve.samples[i + 1].z - p;
        HPComplex circ{-p.im(), p.re(), p.max_exponent_bits()};
        HPReal a = HPReal::atan2(d.re() * circ.im() - d.im() * circ.re(),
                                 d.re() * circ.re() + d.im() * circ.im())
                       .abs();
        HPReal pi = HPReal::pi(prec);
        if (a > pi.mul_2exp(-1)) a = pi - a;
        tan_dev = std::max(tan_dev, a.to_double());
      }
    }
    double c1 = pos_dev + tan_dev;
    double r_now = r_hat.to_double();
    if (hz.best_c1_distance < 0 || c1 < hz.best_c1_distance) {
      hz.best_c1_distance = c1;
      hz.best_radius = r_now;
    }

    if (c1 <= 0.05 && r_now > 0.5 * needed_radius &&
        r_now < 2.0 * needed_radius) {
      // Circle approximation at a usable radius: carve the four subarcs
      // whose f^2-images assemble the small Jordan curve, then verify.
      FourArcResult target = four_arc_jordan(map, z, eps);
      std::array<std::pair<HPReal, HPReal>, 4> subarcs;
      SampledCurve assembled;
      assembled.closed = true;
      bool carve_ok = true;
      size_t count = 0;
      for (size_t j = 0; j < 4 && carve_ok; ++j) {
        const ArcSpec& arc = target.arcs[j];
        HPReal t_lo(prec), t_hi(prec);
        bool found_lo = false, found_hi = false;
        HPReal best_lo(1e9, prec), best_hi(1e9, prec);
        HPReal off = HPReal(static_cast<double>(arc.translate), prec) *
                     HPReal::two_pi(prec);
        HPComplex e_lo{arc.radius * arc.theta_lo.cos(),
                       arc.radius * arc.theta_lo.sin() + off,
                       z.max_exponent_bits()};
        HPComplex e_hi{arc.radius * arc.theta_hi.cos(),
                       arc.radius * arc.theta_hi.sin() + off,
                       z.max_exponent_bits()};
        for (const CurveSample& s : img.curve.samples) {
          HPReal dl = distance(s.z, e_lo), dh = distance(s.z, e_hi);
          if (dl < best_lo) { best_lo = dl; t_lo = s.t; found_lo = true; }
          if (dh < best_hi) { best_hi = dh; t_hi = s.t; found_hi = true; }
        }
        HPReal close_enough = arc.radius * HPReal(0.1, prec);
        if (!found_lo || !found_hi || best_lo > close_enough ||
            best_hi > close_enough || t_lo == t_hi) {
          carve_ok = false;
          break;
        }
        if (t_hi < t_lo) std::swap(t_lo, t_hi);
        subarcs[j] = {t_lo, t_hi};
        SampledCurve sub = slice_curve(c, t_lo, t_hi, 17);
        IterateResult sub_img = iterate_curve(
            map, sub, n + 2, {HPReal(0.0, prec), 0.05, size_t(1) << 16});
        if (sub_img.steps_done < n + 2) {
          carve_ok = false;
          break;
        }
        for (const CurveSample& s : sub_img.curve.samples) {
          HPReal t = HPReal(static_cast<double>(count++), prec);
          assembled.samples.push_back({t, s.z, s.tangent});
        }
      }
      if (carve_ok && assembled.samples.size() > 8) {
        for (CurveSample& s : assembled.samples)
          s.t = s.t / HPReal(static_cast<double>(count), prec);
        assembled.samples.push_back(
            {HPReal(1.0, prec), assembled.samples.front().z, std::nullopt});
        try {
          long wind = winding_number(assembled, z);
          HPReal diam = assembled.diameter();
          bool jordan = self_intersections(assembled).empty();
          if ((wind == 1 || wind == -1) && diam <= eps && jordan) {
            SurroundCertificate cert;
            cert.subarcs = subarcs;
            cert.iterates = {n + 2, n + 2, n + 2, n + 2};
            cert.target = z;
            cert.epsilon = eps;
            cert.winding = wind;
            cert.diameter = diam;
            for (size_t j = 1; j < 4; ++j) {
              // junction angles between consecutive assembled pieces
              size_t idx = j * (assembled.samples.size() / 4);
              if (idx > 0 && idx + 1 < assembled.samples.size()) {
                HPComplex u =
                    assembled.samples[idx].z - assembled.samples[idx - 1].z;
                HPComplex v =
                    assembled.samples[idx + 1].z - assembled.samples[idx].z;
                cert.corner_angles.push_back(
                    HPReal::atan2(u.re() * v.im() - u.im() * v.re(),
                                  u.re() * v.re() + u.im() * v.im())
                        .abs());
              }
            }
            out.certificate = cert;
            out.certified_image = assembled;
            return out;
          }
        } catch (const PointOnCurve&) {
        }
      }
      // fall through: keep searching or report the horizon
    }
  }
  hz.step = budget;
  hz.stage = "circle approximation";
  hz.detail = "no usable circle approximation within the budget";
  out.horizon = hz;
  return out;
}

RefinementChain refine_dense_orbit(
    const ExpMap& map, const SampledCurve& c,
    const std::vector<std::pair<HPComplex, HPReal>>& targets, int budget) {
  RefinementChain chain;
  if (targets.empty()) return chain;
  const unsigned prec = map.precision();

  // Standard hair family across the curve's anchor range.
  HPReal re_lo = c.samples.front().z.re(), re_hi = re_lo;
  for (const CurveSample& s : c.samples) {
    re_lo = HPReal::min(re_lo, s.z.re());
    re_hi = HPReal::max(re_hi, s.z.re());
  }
  re_lo = HPReal::max(re_lo, map.K() + HPReal(0.01, prec));
  std::vector<HPReal> anchors;
  for (int i = 0; i < 9; ++i)
    anchors.push_back(re_lo + (re_hi - re_lo) *
                                  HPReal(static_cast<double>(i) / 8.0, prec));
  std::vector<HairSample> family;
  for (const char* it : {"0*", "1*", "(01)*"})
    family.push_back(trace_hair(map, Itinerary::parse(it), 8, anchors));

  SampledCurve current = c;
  std::pair<HPReal, HPReal> surviving{HPReal(0.0, prec), HPReal(1.0, prec)};
  for (const auto& [target, eps] : targets) {
    RefinementStage stage;
    stage.target = target;
    stage.epsilon = eps;
    bool done = false;
    for (const HairSample& hair : family) {
      try {
        stage.outcome =
            surround_from_curve(map, current, hair, target, eps, budget);
        done = true;
        break;
      } catch (const NoTransversalCrossing&) {
        continue;
      }
    }
    if (!done) {
      stage.outcome.horizon =
          HorizonReport{0, "no crossing",
                        "no hair of the standard family crosses the curve",
                        -1.0, -1.0, -1.0};
    }
    if (stage.outcome.certified()) {
      surviving = stage.outcome.certificate->subarcs[0];
      stage.surviving = surviving;
      chain.stages.push_back(stage);
      current = stage.outcome.certified_image;
    } else {
      stage.surviving = surviving;
      chain.stages.push_back(stage);
      chain.stopped_at_horizon = true;
      break;
    }
  }
  return chain;
}

SampledCurve kappa_segment(const ExpMap& map, size_t samples) {
  const unsigned prec = map.precision();
  HPReal re = map.K() + HPReal(1.0, prec);
  HPReal three_pi = HPReal::pi(prec) * HPReal(3.0, prec);
  return make_segment({re, -three_pi, map.max_exponent_bits()},
                      {re, three_pi, map.max_exponent_bits()}, samples, prec);
}

CoveringReport covering_check(const ExpMap& map, const PeriodicPoint& p,
                              const HPReal& radius, int n_max,
                              size_t kappa_samples) {
  const unsigned prec = map.precision();
  if (!(radius > HPReal(0.0, prec)))
    throw InvalidArgument("V_radius must be positive");
  if (!(p.multiplier_abs > HPReal(1.0, prec)))
    throw InvalidArgument("periodic point must be repelling");

  CoveringReport report;
  SampledCurve kappa = kappa_segment(map, kappa_samples);
  SampledCurve cur = make_circle(p.z, radius, 128, HPReal(0.0, prec), prec);
  for (int n = 1; n <= n_max; ++n) {
    IterateResult img;
    try {
      img = iterate_curve(map, cur, 1,
                          {HPReal(0.0, prec), 0.2, size_t(1) << 18});
    } catch (const SampleCapExceeded&) {
      report.budget_stop_step = n;  // geometric resolution exhausted
      break;
    }
    if (img.steps_done < 1) {
      report.budget_stop_step = n;
      break;
    }
    cur = img.curve;
    CoveringStep step;
    step.N = n;
    step.covered = true;
    step.min_winding = 0;
    bool first = true;
    for (const CurveSample& q : kappa.samples) {
      long wind = 0;
      try {
        wind = winding_number(cur, q.z);
      } catch (const PointOnCurve&) {
        ++step.ambiguous_points;
        step.covered = false;
        continue;
      }
      if (wind == 0) step.covered = false;
      long aw = std::labs(wind);
      if (first || aw < step.min_winding) {
        step.min_winding = aw;
        first = false;
      }
    }
    report.steps.push_back(step);
  }
  return report;
}

Region halfplane_region(bool upper) {
  Region r;
  r.inside = [upper](const HPComplex& z) {
    return upper ? z.im().sign() > 0 : z.im().sign() < 0;
  };
  r.polar = [upper](const TowerMagnitude&, const HPReal& angle) {
    HPReal s = angle.sin();
    if (s.is_zero()) return RegionVerdict::NotInside;  // on the real axis
    return (s.sign() > 0) == upper ? RegionVerdict::Inside
                                   : RegionVerdict::NotInside;
  };
  return r;
}

Region disk_region(const HPComplex& center, const HPReal& radius) {
  Region r;
  r.inside = [center, radius](const HPComplex& z) {
    return distance(z, center) < radius;
  };
  TowerMagnitude reach = tower_from_real(center.abs() + radius);
  r.polar = [reach](const TowerMagnitude& mag, const HPReal&) {
    if (mag > reach) return RegionVerdict::NotInside;
    return RegionVerdict::Undecidable;
  };
  return r;
}

Region polygon_region(SampledCurve boundary) {
  if (!boundary.closed)
    throw InvalidArgument("polygon region needs a closed boundary");
  HPReal reach(0.0, boundary.samples[0].z.precision());
  for (const CurveSample& s : boundary.samples)
    reach = HPReal::max(reach, s.z.abs());
  TowerMagnitude reach_t = tower_from_real(reach);
  Region r;
  r.inside = [boundary](const HPComplex& z) {
    try {
      return winding_number(boundary, z) != 0;
    } catch (const PointOnCurve&) {
      return false;  // boundary itself is not strictly inside
    }
  };
  r.polar = [reach_t](const TowerMagnitude& mag, const HPReal&) {
    if (mag > reach_t) return RegionVerdict::NotInside;
    return RegionVerdict::Undecidable;
  };
  return r;
}

namespace {

// Per-sample continuation of an orbit past the exponent budget: magnitude
// as a tower, angle carried exactly. The angle survives a step only while
// mag * sin(angle) is exactly zero; otherwise the information is lost.
struct PolarSample {
  TowerMagnitude mag;
  HPReal angle;
};

}  // namespace

NiceReport nice_check(const ExpMap& map, const SampledCurve& boundary,
                      const Region& region, int depth,
                      const IterateOptions& opts) {
  if (depth < 0) throw InvalidArgument("depth must be >= 0");
  const unsigned prec = map.precision();
  for (const CurveSample& s : boundary.samples)
    if (region.inside(s.z))
      throw InvalidArgument(
          "boundary sample strictly inside the region (n = 0 check)");

  NiceReport report;
  SampledCurve cur = boundary;
  int n = 1;
  for (; n <= depth; ++n) {
    IterateResult img = iterate_curve(map, cur, 1, opts);
    if (img.steps_done < 1) break;  // switch to polar continuation
    cur = img.curve;
    for (const CurveSample& s : cur.samples) {
      if (region.inside(s.z)) {
        report.violation =
            NiceReport::Violation{n, s.t, boundary.at(s.t), s.z};
        report.depth_checked = n;
        return report;
      }
    }
  }
  if (n > depth) {
    report.depth_checked = depth;
    return report;
  }

  // Polar phase: no further refinement (the curve is beyond geometric
  // resolution); each sample advances independently.
  struct State {
    HPReal t;
    std::optional<HPComplex> z;
    std::optional<PolarSample> polar;
  };
  std::vector<State> states;
  states.reserve(cur.samples.size());
  for (const CurveSample& s : cur.samples)
    states.push_back({s.t, s.z, std::nullopt});

  for (; n <= depth; ++n) {
    for (State& st : states) {
      if (st.z) {
        try {
          HPComplex next = map.apply(*st.z);
          st.z = next;
        } catch (const ExponentBudgetExceeded&) {
          // |f(z)| = |lambda| e^Re(z), arg f(z) = arg(lambda) + Im(z).
          PolarSample p{
              tower_exp(tower_from_real(st.z->re() + map.log_abs_lambda())),
              (map.arg_lambda() + st.z->im())
                  .remainder(HPReal::two_pi(prec + 32))};
          st.z = std::nullopt;
          st.polar = p;
        }
      } else if (st.polar) {
        HPReal s = st.polar->angle.sin();
        HPReal c = st.polar->angle.cos();
        if (!s.is_zero() || c.sign() <= 0) {
          report.budget_stop_step = n;
          report.depth_checked = n - 1;
          return report;
        }
        // angle exactly 0: the value is the positive real M, and
        // f(M) = |lambda| e^M at angle arg(lambda).
        st.polar = PolarSample{
            tower_exp(tower_add(st.polar->mag,
                                tower_from_real(map.log_abs_lambda()))),
            map.arg_lambda()};
      }
      bool inside;
      if (st.z) {
        inside = region.inside(*st.z);
      } else {
        RegionVerdict v = region.polar(st.polar->mag, st.polar->angle);
        if (v == RegionVerdict::Undecidable) {
          report.budget_stop_step = n;
          report.depth_checked = n - 1;
          return report;
        }
        inside = v == RegionVerdict::Inside;
      }
      if (inside) {
        HPComplex witness =
            st.z ? *st.z : HPComplex(HPReal(0.0, prec), HPReal(0.0, prec));
        report.violation =
            NiceReport::Violation{n, st.t, boundary.at(st.t), witness};
        report.depth_checked = n;
        return report;
      }
    }
  }
  report.depth_checked = depth;
  return report;
}

}  // namespace expdyn
