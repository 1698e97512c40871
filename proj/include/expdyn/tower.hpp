#pragma once

#include <cstdint>

#include "expdyn/hpreal.hpp"

namespace expdyn {

// Level-index magnitude: denotes exp applied `level` times to `mantissa`.
// Normalization is unique: for level >= 1 the mantissa lies in [1, e), so
// level-0 values are exactly the reals below e and comparison is
// lexicographic in (level, mantissa). This is what makes |g^n(0)|-sized
// growth representable and totally ordered far beyond any float budget.
class TowerMagnitude {
 public:
  TowerMagnitude() : level_(0), mantissa_(kDefaultPrecisionBits) {}
  TowerMagnitude(long level, HPReal mantissa);

  long level() const { return level_; }
  const HPReal& mantissa() const { return mantissa_; }

  // -1, 0, +1 consistent with the denoted real numbers.
  static int compare(const TowerMagnitude& a, const TowerMagnitude& b);

  friend bool operator<(const TowerMagnitude& a, const TowerMagnitude& b) {
    return compare(a, b) < 0;
  }
  friend bool operator>(const TowerMagnitude& a, const TowerMagnitude& b) {
    return compare(a, b) > 0;
  }
  friend bool operator==(const TowerMagnitude& a, const TowerMagnitude& b) {
    return compare(a, b) == 0;
  }

  std::string str() const;

 private:
  long level_;
  HPReal mantissa_;
};

TowerMagnitude tower_from_real(const HPReal& x);

// exp of the denoted value; strictly monotone with respect to compare.
TowerMagnitude tower_exp(const TowerMagnitude& m);

// Materializes the denoted value as an HPReal, or throws
// ExponentBudgetExceeded when it needs more than max_exponent_bits.
HPReal tower_to_real(const TowerMagnitude& m, unsigned prec,
                     uint64_t max_exponent_bits = kDefaultMaxExponentBits);
bool tower_representable(const TowerMagnitude& m,
                         uint64_t max_exponent_bits = kDefaultMaxExponentBits);

// Sum / product of denoted values. Exact while both operands materialize
// below an internal 2^16-bit cap; beyond that the dominant term wins, with
// relative error far below one level-0 mantissa step (never enough to flip
// a comparison across a 2000-fold ratio).
TowerMagnitude tower_add(const TowerMagnitude& a, const TowerMagnitude& b);
TowerMagnitude tower_mul(const TowerMagnitude& a, const TowerMagnitude& b);

}  // namespace expdyn
