#include "expdyn/expmap.hpp"

#include <algorithm>

namespace expdyn {

namespace {

// |lambda| e^K - 200 K, the quantity whose positivity the cutoff needs.
HPReal cutoff_gap(const HPReal& abs_lambda, const HPReal& k) {
  return abs_lambda * k.exp() - HPReal(200.0, k.precision()) * k;
}

HPReal auto_cutoff(const HPReal& abs_lambda) {
  const unsigned prec = abs_lambda.precision();
  HPReal lo(10.0, prec), hi(200.0, prec);
  HPReal half(0.5, prec);
  if (cutoff_gap(abs_lambda, hi) < HPReal(0.0, prec))
    throw InvalidLambda("|lambda| too small: |lambda|e^K <= 200K on [10,200]");
  HPReal root = lo;
  if (cutoff_gap(abs_lambda, lo) < HPReal(0.0, prec)) {
    // Bisect; the gap is increasing in K across its single sign change here.
    for (int i = 0; i < 400; ++i) {
      HPReal mid = (lo + hi) * half;
      if (cutoff_gap(abs_lambda, mid) < HPReal(0.0, prec))
        lo = mid;
      else
        hi = mid;
    }
    root = hi;
  }
  return HPReal::max(HPReal(10.5, prec), root + half);
}

}  // namespace

StripSystem compute_strips(const HPComplex& lambda, const HPReal& k_cutoff) {
  (void)k_cutoff;
  const unsigned prec = lambda.precision();
  HPReal pi = HPReal::pi(prec);
  HPReal half_pi = pi.mul_2exp(-1);
  HPReal two_pi = pi.mul_2exp(1);
  HPReal arg_l = lambda.arg();
  HPReal tol = HPReal::pow2(-static_cast<long>(prec / 2), prec);

  StripSystem sys;
  for (long k = -1; k <= 1; ++k) {
    HPReal center = -arg_l + HPReal(static_cast<double>(2 * k), prec) * pi;
    // Containment of the whole band in |Im z| <= 5*pi/2 means |center| <= 2*pi.
    if (center.abs() <= two_pi + tol)
      sys.hats.push_back(
          {center - half_pi, center + half_pi, center, k});
  }
  std::sort(sys.hats.begin(), sys.hats.end(),
            [](const Strip& a, const Strip& b) { return a.center < b.center; });

  // The two smallest |center| win; ties break toward the positive center.
  std::vector<size_t> order(sys.hats.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const HPReal& ca = sys.hats[a].center;
    const HPReal& cb = sys.hats[b].center;
    HPReal aa = ca.abs(), ab = cb.abs();
    if (aa != ab) return aa < ab;
    return cb < ca;  // positive first
  });
  if (order.size() < 2)
    throw InvalidLambda("fewer than two strips in |Im z| <= 5pi/2");
  sys.chosen = {sys.hats[order[0]], sys.hats[order[1]]};
  return sys;
}

ExpMap::ExpMap(HPComplex lambda, const KPolicy& policy)
    : lambda_(std::move(lambda)),
      k_(lambda_.precision()),
      log_abs_lambda_(lambda_.precision()),
      arg_lambda_(lambda_.precision()) {
  if (lambda_.is_zero()) throw InvalidLambda("lambda must be non-zero");
  const unsigned prec = lambda_.precision();
  HPReal abs_l = lambda_.abs();
  log_abs_lambda_ = abs_l.log();
  arg_lambda_ = lambda_.arg();
  if (policy.automatic) {
    k_ = auto_cutoff(abs_l);
  } else {
    k_ = policy.explicit_k;
    if (!(k_ > HPReal(10.0, prec)))
      throw InvalidK("K must exceed 10");
    if (!(cutoff_gap(abs_l, k_) > HPReal(0.0, prec)))
      throw InvalidK("|lambda|e^K must exceed 200K");
  }
  strips_ = compute_strips(lambda_, k_);
}

ExpMap make_map(const HPComplex& lambda, const KPolicy& policy) {
  return ExpMap(lambda, policy);
}

HPComplex ExpMap::apply(const HPComplex& z) const {
  return lambda_ * hp_exp(z);
}

HPReal ExpMap::strip_tolerance() const {
  return HPReal::pow2(-static_cast<long>(precision() / 2), precision());
}

Membership ExpMap::in_strip(const HPComplex& z, int s) const {
  const Strip& strip = strips_.chosen[static_cast<size_t>(s)];
  HPReal tol = strip_tolerance();
  bool ambiguous = false;

  HPReal re_gap = z.re() - k_;
  if (re_gap.abs() <= tol)
    ambiguous = true;
  else if (re_gap < HPReal(0.0, precision()))
    return Membership::Out;

  HPReal lo_gap = z.im() - strip.im_low;
  HPReal hi_gap = strip.im_high - z.im();
  if (lo_gap.abs() <= tol || hi_gap.abs() <= tol)
    ambiguous = true;
  else if (lo_gap < HPReal(0.0, precision()) ||
           hi_gap < HPReal(0.0, precision()))
    return Membership::Out;

  return ambiguous ? Membership::Ambiguous : Membership::In;
}

ExpMap::StripHit ExpMap::locate(const HPComplex& z) const {
  for (int s = 0; s < 2; ++s) {
    Membership m = in_strip(z, s);
    if (m == Membership::In) return {s, false};
    if (m == Membership::Ambiguous) return {s, true};
  }
  return {std::nullopt, false};
}

ItineraryResult itinerary_of(const ExpMap& map, const HPComplex& z, int depth) {
  if (depth < 0) throw InvalidArgument("depth must be >= 0");
  ItineraryResult out;
  HPComplex cur = z;
  for (int n = 0; n < depth; ++n) {
    out.record.samples.push_back({n, cur, std::nullopt, false});
    auto hit = map.locate(cur);
    if (!hit.symbol) {
      out.record.status = OrbitRecord::Status::LeftS;
      out.record.status_step = n;
      return out;
    }
    out.word.push_back(static_cast<uint8_t>(*hit.symbol));
    try {
      cur = map.apply(cur);
    } catch (const ExponentBudgetExceeded&) {
      out.record.status = OrbitRecord::Status::ExponentBudgetStop;
      out.record.status_step = n + 1;
      TowerMagnitude mag = tower_exp(
          tower_from_real(cur.re() + map.log_abs_lambda()));
      out.record.samples.push_back({n + 1, std::nullopt, mag, true});
      return out;
    }
  }
  out.record.status = OrbitRecord::Status::InSPrefix;
  out.record.status_step = static_cast<int>(out.word.size());
  return out;
}

namespace {

HPReal pow100(int n, unsigned prec) {
  HPReal r(1.0, prec);
  HPReal hundred(100.0, prec);
  for (int i = 0; i < n; ++i) r = r * hundred;
  return r;
}

LemEltReport finish_lemelt(const ExpMap& map, const HPComplex& z0, int n,
                           int n_reached, LemEltReport::Status status,
                           int status_step,
                           const std::vector<HPReal>& args_prefix,
                           const HPReal& final_re_or_unused,
                           const HPReal& final_arg_abs,
                           const std::vector<TowerMagnitude>* tail_re,
                           const HPReal* tail_arg_sum_bound) {
  const unsigned prec = map.precision();
  LemEltReport rep;
  rep.n_requested = n;
  rep.n_reached = n_reached;
  rep.status = status;
  rep.status_step = status_step;
  if (status != LemEltReport::Status::Complete &&
      status != LemEltReport::Status::Ambiguous)
    return rep;
  if (n == 0) {
    rep.growth = {HPReal(0.0, prec), HPReal(0.0, prec), true};
    rep.final_arg = rep.growth;
    rep.arg_sum = rep.growth;
    rep.arg_sum_below_one_fiftieth = true;
    rep.accumulated_df_arg = HPReal(0.0, prec);
    return rep;
  }

  HPReal p100 = pow100(n, prec);
  HPReal ten(10.0, prec);
  HPReal re0 = z0.re();

  bool tail_case = tail_re && !tail_re->empty();
  if (!tail_case) {
    rep.growth = {final_re_or_unused, p100 * re0,
                  final_re_or_unused > p100 * re0};
    rep.final_arg = {final_arg_abs, ten / (p100 * re0),
                     final_arg_abs < ten / (p100 * re0)};
  } else {
    // Final value only known as a tower of its real part; the angle is
    // bounded by the strip band: |arg| <= (5*pi/2) / Re.
    const TowerMagnitude& xn = tail_re->back();
    TowerMagnitude growth_rhs = tower_from_real(p100 * re0);
    rep.growth = {HPReal(0.0, prec), p100 * re0, xn > growth_rhs};
    HPReal five_half_pi = HPReal::pi(prec) * HPReal(2.5, prec);
    // (5pi/2)/X_n < 10/(100^n re0)  <=>  X_n > (pi/4) 100^n re0.
    TowerMagnitude arg_rhs =
        tower_from_real(HPReal::pi(prec) * HPReal(0.25, prec) * p100 * re0);
    rep.final_arg = {five_half_pi, ten / (p100 * re0), xn > arg_rhs};
  }

  HPReal sum(0.0, prec);
  for (const HPReal& a : args_prefix) sum = sum + a.abs();
  if (tail_arg_sum_bound) sum = sum + *tail_arg_sum_bound;
  HPReal rhs = ten / re0 / HPReal(99.0, prec);
  rep.arg_sum = {sum, rhs, sum < rhs};
  rep.arg_sum_below_one_fiftieth = sum < HPReal(0.02, prec);
  HPReal acc(0.0, prec);
  for (const HPReal& a : args_prefix) acc = acc + a;
  rep.accumulated_df_arg = acc.abs();
  return rep;
}

}  // namespace

LemEltReport verify_lemelt(const ExpMap& map, const HPComplex& z, int n) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  bool ambiguous = false;
  HPComplex cur = z;
  std::vector<HPReal> args;
  for (int j = 0; j <= n; ++j) {
    auto hit = map.locate(cur);
    if (!hit.symbol) {
      LemEltReport rep;
      rep.n_requested = n;
      rep.n_reached = j > 0 ? j - 1 : 0;
      rep.status = LemEltReport::Status::OrbitLeftS;
      rep.status_step = j;
      return rep;
    }
    if (hit.ambiguous) ambiguous = true;
    if (j > 0) args.push_back(cur.arg());
    if (j < n) {
      try {
        cur = map.apply(cur);
      } catch (const ExponentBudgetExceeded&) {
        LemEltReport rep;
        rep.n_requested = n;
        rep.n_reached = j;
        rep.status = LemEltReport::Status::BudgetStop;
        rep.status_step = j + 1;
        return rep;
      }
    }
  }
  return finish_lemelt(map, z, n, n,
                       ambiguous ? LemEltReport::Status::Ambiguous
                                 : LemEltReport::Status::Complete,
                       n, args, cur.re(), cur.arg().abs(), nullptr, nullptr);
}

LemEltReport verify_lemelt(const ExpMap& map, const CertifiedOrbit& orbit,
                           int n) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  const unsigned prec = map.precision();
  const int m = static_cast<int>(orbit.values.size());
  const int total = m + static_cast<int>(orbit.tail_re.size());
  if (n > total) {
    LemEltReport rep;
    rep.n_requested = n;
    rep.n_reached = total;
    rep.status = LemEltReport::Status::BudgetStop;
    rep.status_step = total;
    return rep;
  }
  // Re-check the chain's strip membership instead of trusting it.
  for (int j = 0; j <= std::min(n, m); ++j) {
    const HPComplex& zj =
        j == 0 ? orbit.z0 : orbit.values[static_cast<size_t>(j - 1)];
    int symbol = j < static_cast<int>(orbit.symbols.size())
                     ? orbit.symbols[static_cast<size_t>(j)]
                     : 0;
    if (map.in_strip(zj, symbol) == Membership::Out) {
      LemEltReport rep;
      rep.n_requested = n;
      rep.n_reached = j > 0 ? j - 1 : 0;
      rep.status = LemEltReport::Status::OrbitLeftS;
      rep.status_step = j;
      return rep;
    }
  }
  std::vector<HPReal> args;
  for (int j = 1; j <= std::min(n, m); ++j)
    args.push_back(orbit.values[static_cast<size_t>(j - 1)].arg());

  if (n <= m) {
    const HPComplex& zn =
        n == 0 ? orbit.z0 : orbit.values[static_cast<size_t>(n - 1)];
    return finish_lemelt(map, orbit.z0, n, n, LemEltReport::Status::Complete,
                         n, args, zn.re(), zn.arg().abs(), nullptr, nullptr);
  }

  // Tail: levels above the complex chain. Each |arg f^j| is bounded by
  // (5pi/2)/X_j and X_(j+1) >= e^(X_j), so the tail sum is swallowed by one
  // 2^-(budget) term, which is representable even when 1/X_j is not.
  std::vector<TowerMagnitude> tail(orbit.tail_re.begin(),
                                   orbit.tail_re.begin() + (n - m));
  HPReal tail_bound(prec);
  {
    const TowerMagnitude& first = orbit.tail_re.front();
    if (tower_representable(first, map.max_exponent_bits())) {
      HPReal x = tower_to_real(first, prec, map.max_exponent_bits());
      tail_bound = HPReal::pi(prec) * HPReal(5.0, prec) / x;
    } else {
      tail_bound =
          HPReal::pow2(-static_cast<long>(map.max_exponent_bits()) + 3, prec);
    }
  }
  return finish_lemelt(map, orbit.z0, n, n, LemEltReport::Status::Complete, n,
                       args, HPReal(0.0, prec), HPReal(0.0, prec), &tail,
                       &tail_bound);
}

Classification classify(const ExpMap& map, const HPComplex& z, int budget) {
  if (budget < 1) throw InvalidArgument("budget must be >= 1");
  Classification out;
  std::vector<TowerMagnitude> mags;
  HPComplex cur = z;
  bool budget_stop = false;
  mags.push_back(tower_from_real(cur.abs()));
  out.record.samples.push_back({0, cur, std::nullopt, false});
  for (int n = 1; n <= budget; ++n) {
    try {
      cur = map.apply(cur);
    } catch (const ExponentBudgetExceeded&) {
      // One more magnitude is still exactly known: |f(w)| = |lambda| e^Re(w).
      TowerMagnitude mag =
          tower_exp(tower_from_real(cur.re() + map.log_abs_lambda()));
      mags.push_back(mag);
      out.record.samples.push_back({n, std::nullopt, mag, true});
      out.record.status = OrbitRecord::Status::ExponentBudgetStop;
      out.record.status_step = n;
      budget_stop = true;
      break;
    }
    mags.push_back(tower_from_real(cur.abs()));
    out.record.samples.push_back({n, cur, std::nullopt, false});
  }
  if (!budget_stop) {
    out.record.status = OrbitRecord::Status::InSPrefix;
    out.record.status_step = budget;
  }
  const int m = static_cast<int>(mags.size());
  out.magnitudes_used = m;

  std::vector<TowerMagnitude> g;
  g.push_back(tower_from_real(HPReal(0.0, map.precision())));
  for (int i = 1; i < m; ++i) g.push_back(tower_exp(g.back()));

  // A candidate verdict needs the comparisons to reach at least g^3(0)=e^e;
  // shorter overlaps pass vacuously for any bounded orbit.
  const int max_offset = m - 4;
  for (int k = 0; k <= std::min(max_offset, budget); ++k) {
    bool ok = true;
    for (int n = 0; n + k < m; ++n) {
      if (!(mags[static_cast<size_t>(n + k)] > g[static_cast<size_t>(n)])) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.verdict = Classification::Verdict::FastEscapingCandidate;
      out.offset = k;
      return out;
    }
  }
  if (budget_stop) {
    out.verdict = Classification::Verdict::EscapingCandidate;
    return out;
  }
  // Bounded-so-far: the orbit never reached the |lambda|e^K scale.
  TowerMagnitude cap = tower_from_real(map.lambda().abs() * map.K().exp());
  bool bounded = true;
  for (const auto& mg : mags)
    if (mg > cap) {
      bounded = false;
      break;
    }
  out.verdict = bounded ? Classification::Verdict::BoundedSoFar
                        : Classification::Verdict::Undecided;
  return out;
}

}  // namespace expdyn
