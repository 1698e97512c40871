#pragma once

#include <stdexcept>
#include <string>

namespace expdyn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a forward evaluation would need more exponent range than the
// value's budget allows. Callers either switch to tower tracking or stop
// deepening; the budget is never silently saturated.
struct ExponentBudgetExceeded : Error {
  double needed_bits;
  double budget_bits;
  ExponentBudgetExceeded(double needed, double budget)
      : Error("exponent budget exceeded: need " + std::to_string(needed) +
              " bits, budget " + std::to_string(budget)),
        needed_bits(needed),
        budget_bits(budget) {}
};

struct InvalidLambda : Error {
  using Error::Error;
};

struct InvalidK : Error {
  using Error::Error;
};

// Inverse-branch input outside the closed right half-plane / exterior-disc
// range; usually means a pullback anchor is too shallow.
struct OutsideRange : Error {
  using Error::Error;
};

struct OrbitLeftS : Error {
  int step;
  explicit OrbitLeftS(int n)
      : Error("orbit left S at step " + std::to_string(n)), step(n) {}
};

struct NonConvergence : Error {
  long iterations;
  explicit NonConvergence(long iters)
      : Error("inverse iteration did not converge after " +
              std::to_string(iters) + " iterations"),
        iterations(iters) {}
};

struct PointOnCurve : Error {
  using Error::Error;
};

struct SampleCapExceeded : Error {
  using Error::Error;
};

struct ZeroTarget : Error {
  ZeroTarget() : Error("target must be non-zero") {}
};

struct VerificationFailed : Error {
  std::string field;
  explicit VerificationFailed(std::string f, const std::string& detail)
      : Error("verification failed: " + f + " (" + detail + ")"),
        field(std::move(f)) {}
};

struct NoTransversalCrossing : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace expdyn
