#pragma once
#include <stdexcept>
#include <string>

namespace kmchev {

// Every domain failure carries a stable machine-readable code so the CLI
// can map it into its JSON error object.
enum class ErrorCode {
  DiagonalNotTwo,
  PositiveOffDiagonal,
  ZeroSymmetryViolated,
  NotSymmetrizable,
  Decomposable,
  ArmTooShort,
  DegenerateCartan,
  NotDominant,
  ResourceBudgetExceeded,
  DepthOutOfRange,
  TruncationOverflow,
  ZeroTorusParameter,
  NotARealRoot,
  NotOrderedDescending,
  NotDeterminantOne,
  MoveBudgetExceeded,
  NonIntegralParameter,
  SyntaxError,
  ZeroDenominator,
  UsageError,
  Internal,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

} // namespace kmchev
