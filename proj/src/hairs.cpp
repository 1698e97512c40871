#include "expdyn/hairs.hpp"

#include <algorithm>
#include <cmath>

namespace expdyn {

Itinerary Itinerary::parse(std::string_view text) {
  Itinerary it;
  std::vector<uint8_t>* target = &it.prefix;
  std::vector<uint8_t> group;
  bool in_group = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '0' || c == '1') {
      if (in_group)
        group.push_back(static_cast<uint8_t>(c - '0'));
      else
        target->push_back(static_cast<uint8_t>(c - '0'));
    } else if (c == '(') {
      if (in_group) throw InvalidArgument("nested '(' in itinerary");
      in_group = true;
    } else if (c == ')') {
      if (!in_group || i + 1 >= text.size() || text[i + 1] != '*')
        throw InvalidArgument("expected ')*' in itinerary");
      in_group = false;
      it.cycle = group;
      ++i;
      if (i + 1 != text.size())
        throw InvalidArgument("trailing text after ')*'");
    } else if (c == '*') {
      // shorthand: last plain symbol repeats
      if (it.prefix.empty() || in_group)
        throw InvalidArgument("'*' needs a preceding symbol");
      it.cycle = {it.prefix.back()};
      it.prefix.pop_back();
      if (i + 1 != text.size()) throw InvalidArgument("trailing text after '*'");
    } else {
      throw InvalidArgument(std::string("bad itinerary character '") + c + "'");
    }
  }
  if (in_group) throw InvalidArgument("unterminated '(' in itinerary");
  if (it.prefix.empty() && it.cycle.empty())
    throw InvalidArgument("empty itinerary");
  return it;
}

std::string Itinerary::str() const {
  std::string s;
  for (uint8_t b : prefix) s += static_cast<char>('0' + b);
  if (!cycle.empty()) {
    s += '(';
    for (uint8_t b : cycle) s += static_cast<char>('0' + b);
    s += ")*";
  }
  return s;
}

uint8_t Itinerary::symbol_at(size_t n) const {
  if (n < prefix.size()) return prefix[n];
  if (cycle.empty())
    throw InvalidArgument("itinerary has no symbol at index " +
                          std::to_string(n));
  return cycle[(n - prefix.size()) % cycle.size()];
}

Itinerary Itinerary::shifted() const {
  Itinerary out = *this;
  if (!out.prefix.empty()) {
    out.prefix.erase(out.prefix.begin());
  } else if (!out.cycle.empty()) {
    std::rotate(out.cycle.begin(), out.cycle.begin() + 1, out.cycle.end());
  } else {
    throw InvalidArgument("cannot shift empty itinerary");
  }
  return out;
}

HPReal ErrorBound::worst_bound(unsigned prec) const {
  HPReal b = HPReal::pi(prec).mul_2exp(-1);
  HPReal contraction(2000.0, prec);
  for (int i = 0; i < depth; ++i) b = b / contraction;
  return b;
}

HPComplex inverse_branch(const ExpMap& map, const HPComplex& w, int s) {
  if (s != 0 && s != 1) throw InvalidArgument("branch symbol must be 0 or 1");
  const unsigned prec = map.precision();
  HPReal tol = map.strip_tolerance();
  HPReal aw = w.abs();
  if (aw.is_zero()) throw OutsideRange("w = 0 has no preimage");
  // Closed right half-plane, exterior of the |lambda|e^K disc.
  if (w.re() < -(tol * aw))
    throw OutsideRange("Re w < 0: outside the univalent range");
  HPReal min_mod = map.lambda().abs() * map.K().exp();
  if (aw < min_mod * (HPReal(1.0, prec) - tol))
    throw OutsideRange("|w| < |lambda|e^K: anchor too shallow");

  const Strip& strip = map.strips().chosen[static_cast<size_t>(s)];
  HPReal re = aw.log() - map.log_abs_lambda();
  HPReal im = w.arg() - map.arg_lambda() +
              HPReal(static_cast<double>(2 * strip.lattice_k), prec) *
                  HPReal::pi(prec);
  return {re, im, w.max_exponent_bits()};
}

namespace {

// Hat-strip inverse branch for periodic-point search: same lift, but only
// w != 0 is required, so intermediate iterates may leave Re >= K.
HPComplex hat_inverse(const ExpMap& map, const HPComplex& w, int s) {
  if (w.is_zero()) throw OutsideRange("w = 0 has no preimage");
  const Strip& strip = map.strips().chosen[static_cast<size_t>(s)];
  HPReal re = w.abs().log() - map.log_abs_lambda();
  HPReal im = w.arg() - map.arg_lambda() +
              HPReal(static_cast<double>(2 * strip.lattice_k), map.precision()) *
                  HPReal::pi(map.precision());
  return {re, im, w.max_exponent_bits()};
}

struct TraceSpec {
  HairSide side = HairSide::OnHair;
  int boundary_k = 0;
};

HairPoint trace_point(const ExpMap& map, const Itinerary& a, int depth,
                      const HPReal& anchor, const TraceSpec& spec) {
  const unsigned prec = map.precision();
  const uint64_t budget = map.max_exponent_bits();
  if (anchor < map.K()) throw OutsideRange("anchor below K");
  if (anchor.exponent2() > static_cast<long>(budget))
    throw ExponentBudgetExceeded(static_cast<double>(anchor.exponent2()),
                                 static_cast<double>(budget));

  // Forward anchor ladder X_0 = R, X_(j+1) = |lambda| e^(X_j).
  const int seed_target = depth;
  std::vector<TowerMagnitude> ladder;
  ladder.push_back(tower_from_real(anchor));
  TowerMagnitude log_lambda = tower_from_real(map.log_abs_lambda());
  int seed_level = 0;
  for (int j = 1; j <= seed_target; ++j) {
    ladder.push_back(tower_exp(tower_add(ladder.back(), log_lambda)));
    if (seed_level == j - 1 && tower_representable(ladder.back(), budget))
      seed_level = j;
  }

  // Seed: a point of strip a_seed at the ladder height. On the hair the
  // centre line is used; boundary traces sit on the band edge when the
  // precision allows seeding at level k itself. Above the budget level the
  // hair hugs the centre line within ~(pi/2)/X_(j+1), so a centre seed at
  // the deepest representable level keeps the 2000^-depth bound valid for
  // any depth the budget can express.
  const bool clipped = seed_level < seed_target;
  HPReal seed_re = tower_to_real(ladder[static_cast<size_t>(seed_level)],
                                 prec, budget);
  const Strip& seed_strip = map.strips().chosen[a.symbol_at(
      static_cast<size_t>(seed_level))];
  HPReal seed_im = seed_strip.center;
  if (!clipped && spec.side == HairSide::UpperBoundary)
    seed_im = seed_strip.im_high;
  else if (!clipped && spec.side == HairSide::LowerBoundary)
    seed_im = seed_strip.im_low;
  HPComplex cur(seed_re, seed_im, budget);

  std::vector<HPComplex> chain;  // z_seed_level .. z_1
  chain.reserve(static_cast<size_t>(seed_level));
  if (seed_level > 0) chain.push_back(cur);
  for (int j = seed_level - 1; j >= 0; --j) {
    cur = inverse_branch(map, cur, a.symbol_at(static_cast<size_t>(j)));
    if (j > 0) chain.push_back(cur);
  }

  HairPoint pt{anchor, cur, {}, {}, seed_level};
  pt.err.depth = depth;
  pt.err.worst_log2 =
      0.6514961294723187 /* log2(pi/2) */ - depth * std::log2(2000.0);
  TowerMagnitude inv = tower_from_real(HPReal(1.0, prec));
  std::reverse(chain.begin(), chain.end());  // now z_1 .. z_seed_level
  for (const HPComplex& zj : chain)
    inv = tower_mul(inv, tower_from_real(zj.abs()));
  for (int j = seed_level + 1; j <= depth; ++j)
    inv = tower_mul(inv, ladder[static_cast<size_t>(j)]);
  pt.err.inv_sharp = inv;

  pt.orbit.z0 = pt.z;
  pt.orbit.values = chain;
  for (int j = seed_level + 1; j <= depth; ++j)
    pt.orbit.tail_re.push_back(ladder[static_cast<size_t>(j)]);
  for (int j = 0; j <= depth; ++j)
    pt.orbit.symbols.push_back(a.symbol_at(static_cast<size_t>(j)));
  return pt;
}

HairSample trace_common(const ExpMap& map, const Itinerary& a, int depth,
                        const std::vector<HPReal>& anchors,
                        const TraceSpec& spec) {
  HairSample out;
  out.itinerary = a;
  out.depth = depth;
  out.side = spec.side;
  out.boundary_k = spec.boundary_k;
  std::vector<HPReal> sorted = anchors;
  std::sort(sorted.begin(), sorted.end());
  out.points.reserve(sorted.size());
  for (const HPReal& r : sorted)
    out.points.push_back(trace_point(map, a, depth, r, spec));
  return out;
}

}  // namespace

HairSample trace_hair(const ExpMap& map, const Itinerary& a, int depth,
                      const std::vector<HPReal>& anchors) {
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  return trace_common(map, a, depth, anchors, {HairSide::OnHair, 0});
}

HairSample trace_boundary(const ExpMap& map, const Itinerary& a, int k,
                          HairSide side, const std::vector<HPReal>& anchors) {
  if (k < 0) throw InvalidArgument("k must be >= 0");
  if (side == HairSide::OnHair)
    throw InvalidArgument("side must be a boundary");
  TraceSpec spec{side, k};
  // depth == k: the boundary curve W_(k,a) is pinned after k pullbacks.
  return trace_common(map, a, k, anchors, spec);
}

PeriodicPoint periodic_point(const ExpMap& map,
                             const std::vector<uint8_t>& cycle,
                             const PeriodicOptions& opts) {
  if (cycle.empty()) throw InvalidArgument("cycle must be nonempty");
  const unsigned prec = map.precision();
  const int p = static_cast<int>(cycle.size());
  HPReal tol = opts.tolerance
                   ? *opts.tolerance
                   : HPReal::pow2(24 - static_cast<long>(prec), prec);
  long max_iters = opts.max_iterations > 0 ? opts.max_iterations
                                           : 10L * static_cast<long>(prec);

  HPComplex z = opts.seed ? *opts.seed
                          : HPComplex(map.K(),
                                      map.strips().chosen[cycle[0]].center,
                                      map.max_exponent_bits());
  long iters = 0;
  while (true) {
    HPComplex next = z;
    for (int j = p - 1; j >= 0; --j)
      next = hat_inverse(map, next, cycle[static_cast<size_t>(j)]);
    HPReal step = distance(next, z);
    z = next;
    ++iters;
    if (step < tol) break;
    if (iters >= max_iters) throw NonConvergence(iters);
  }

  PeriodicPoint out;
  out.z = z;
  out.period = p;
  out.iterations = iters;
  out.itinerary.cycle = cycle;

  // Multiplier |Df^p(z)| = prod |f^j(z)|, j = 1..p, and the residual.
  HPComplex cur = z;
  HPReal mult(1.0, prec);
  for (int j = 0; j < p; ++j) {
    cur = map.apply(cur);
    mult = mult * cur.abs();
  }
  out.multiplier_abs = mult;
  out.residual = distance(cur, z);
  return out;
}

}  // namespace expdyn
