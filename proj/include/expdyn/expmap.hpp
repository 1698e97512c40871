#pragma once

#include <array>
#include <optional>
#include <vector>

#include "expdyn/hpcomplex.hpp"
#include "expdyn/tower.hpp"

namespace expdyn {

// One horizontal strip of height pi, a connected component of the complement
// of f^-1(imaginary axis) that f maps into the closed right half-plane.
struct Strip {
  HPReal im_low;
  HPReal im_high;
  HPReal center;   // -arg(lambda) + 2*pi*lattice_k
  long lattice_k;  // multiple of 2*pi used when lifting arguments here
};

struct StripSystem {
  std::vector<Strip> hats;        // all candidates inside |Im z| <= 5*pi/2
  std::array<Strip, 2> chosen;    // S_0, S_1 (closed, right of Re = K)
};

enum class Membership { In, Out, Ambiguous };

struct OrbitSample {
  int n = 0;
  std::optional<HPComplex> z;               // while representable
  std::optional<TowerMagnitude> magnitude;  // once only |.| is known
  bool angle_unknown = false;               // set once, never cleared
};

struct OrbitRecord {
  enum class Status { InSPrefix, LeftS, ExponentBudgetStop };
  std::vector<OrbitSample> samples;
  Status status = Status::InSPrefix;
  int status_step = 0;  // prefix length / exit step / stop step
};

struct KPolicy {
  bool automatic = true;
  HPReal explicit_k{kDefaultPrecisionBits};
  static KPolicy Auto() { return {}; }
  static KPolicy Explicit(HPReal k) { return {false, std::move(k)}; }
};

// The map f(z) = lambda * e^z together with its cutoff K and strip system.
// Immutable; the single source of dynamical truth for everything downstream.
class ExpMap {
 public:
  ExpMap(HPComplex lambda, const KPolicy& policy);

  const HPComplex& lambda() const { return lambda_; }
  const HPReal& K() const { return k_; }
  const StripSystem& strips() const { return strips_; }
  unsigned precision() const { return lambda_.precision(); }
  uint64_t max_exponent_bits() const { return lambda_.max_exponent_bits(); }
  const HPReal& log_abs_lambda() const { return log_abs_lambda_; }
  const HPReal& arg_lambda() const { return arg_lambda_; }

  // lambda * e^z; note Df(z) = f(z).
  HPComplex apply(const HPComplex& z) const;
  HPComplex derivative(const HPComplex& z) const { return apply(z); }

  // Membership in the closed strip S_s with the boundary-ambiguity band
  // of half-width 2^(-precision/2).
  Membership in_strip(const HPComplex& z, int s) const;
  // Which chosen strip holds z, if any; Ambiguous maps to nullopt+flag.
  struct StripHit {
    std::optional<int> symbol;
    bool ambiguous = false;
  };
  StripHit locate(const HPComplex& z) const;

  HPReal strip_tolerance() const;

 private:
  HPComplex lambda_;
  HPReal k_;
  HPReal log_abs_lambda_;
  HPReal arg_lambda_;
  StripSystem strips_;
};

ExpMap make_map(const HPComplex& lambda, const KPolicy& policy = KPolicy::Auto());
StripSystem compute_strips(const HPComplex& lambda, const HPReal& k_cutoff);

struct ItineraryResult {
  std::vector<uint8_t> word;
  OrbitRecord record;
};
ItineraryResult itinerary_of(const ExpMap& map, const HPComplex& z, int depth);

// A forward orbit certified by backward construction (hair tracing): the
// complex prefix is exact-in-S by construction; past it only the real-part
// magnitudes are known as towers, with the angle bounded by the strip width.
struct CertifiedOrbit {
  HPComplex z0;
  std::vector<HPComplex> values;        // f^1(z0) .. f^m(z0)
  std::vector<TowerMagnitude> tail_re;  // Re f^(m+1) .. as far as traced
  std::vector<uint8_t> symbols;         // itinerary prefix covering the orbit
};

struct LemEltCheck {
  HPReal lhs{kDefaultPrecisionBits};
  HPReal rhs{kDefaultPrecisionBits};
  bool pass = false;
};

struct LemEltReport {
  enum class Status { Complete, OrbitLeftS, BudgetStop, Ambiguous };
  int n_requested = 0;
  int n_reached = 0;
  Status status = Status::Complete;
  int status_step = 0;
  LemEltCheck growth;     // Re f^n(z) > 100^n Re z
  LemEltCheck final_arg;  // |arg f^n(z)| < 10 / (100^n Re z)
  LemEltCheck arg_sum;    // sum_j |arg f^j(z)| < (10/Re z)(1/99)
  bool arg_sum_below_one_fiftieth = false;
  HPReal accumulated_df_arg{kDefaultPrecisionBits};  // |arg Df^n| via the sum
  bool pass() const {
    return status == Status::Complete && growth.pass && final_arg.pass &&
           arg_sum.pass && arg_sum_below_one_fiftieth;
  }
};

// Forward evaluation; requires the literal orbit to stay in S.
LemEltReport verify_lemelt(const ExpMap& map, const HPComplex& z, int n);
// Certified-orbit variant: evaluates the inequalities on the backward-stable
// chain, which is the only way to reach n >= 2 at fixed precision.
LemEltReport verify_lemelt(const ExpMap& map, const CertifiedOrbit& orbit,
                           int n);

struct Classification {
  enum class Verdict {
    FastEscapingCandidate,
    EscapingCandidate,
    BoundedSoFar,
    Undecided
  };
  Verdict verdict = Verdict::Undecided;
  int offset = -1;  // forward shift: |f^(n+offset)(z)| > |g^n(0)|
  int magnitudes_used = 0;
  OrbitRecord record;
};

// Compares orbit magnitudes against the tower g^n(0), g: z -> e^z, for the
// smallest forward offset that works over all reachable n. Finite-budget
// candidate verdicts only, never proofs.
Classification classify(const ExpMap& map, const HPComplex& z, int budget);

}  // namespace expdyn
