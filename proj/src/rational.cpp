#include "kmchev/rational.hpp"
#include "kmchev/errors.hpp"

namespace kmchev {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DiagonalNotTwo: return "DiagonalNotTwo";
    case ErrorCode::PositiveOffDiagonal: return "PositiveOffDiagonal";
    case ErrorCode::ZeroSymmetryViolated: return "ZeroSymmetryViolated";
    case ErrorCode::NotSymmetrizable: return "NotSymmetrizable";
    case ErrorCode::Decomposable: return "Decomposable";
    case ErrorCode::ArmTooShort: return "ArmTooShort";
    case ErrorCode::DegenerateCartan: return "DegenerateCartan";
    case ErrorCode::NotDominant: return "NotDominant";
    case ErrorCode::ResourceBudgetExceeded: return "ResourceBudgetExceeded";
    case ErrorCode::DepthOutOfRange: return "DepthOutOfRange";
    case ErrorCode::TruncationOverflow: return "TruncationOverflow";
    case ErrorCode::ZeroTorusParameter: return "ZeroTorusParameter";
    case ErrorCode::NotARealRoot: return "NotARealRoot";
    case ErrorCode::NotOrderedDescending: return "NotOrderedDescending";
    case ErrorCode::NotDeterminantOne: return "NotDeterminantOne";
    case ErrorCode::MoveBudgetExceeded: return "MoveBudgetExceeded";
    case ErrorCode::NonIntegralParameter: return "NonIntegralParameter";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

Rat rat_pow(const Rat& t, long e) {
  if (e == 0) return Rat(1);
  if (t == 0) {
    if (e < 0) fail(ErrorCode::ZeroTorusParameter, "0 raised to a negative power");
    return Rat(0);
  }
  bool neg = e < 0;
  unsigned long n = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rat num, den;
  mpz_pow_ui(num.get_num_mpz_t(), t.get_num_mpz_t(), n);
  mpz_pow_ui(num.get_den_mpz_t(), t.get_den_mpz_t(), n);
  if (!neg) return num;
  if (num == 0) fail(ErrorCode::ZeroTorusParameter, "0 raised to a negative power");
  return 1 / num;
}

std::string rat_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string int_str(const Int& z) { return z.get_str(); }

Rat parse_rat(const std::string& text) {
  auto bad = [&]() {
    fail(ErrorCode::SyntaxError, "malformed rational '" + text + "'");
  };
  auto slash = text.find('/');
  std::string num = text.substr(0, slash == std::string::npos ? text.size() : slash);
  if (num.empty()) bad();
  size_t start = (num[0] == '+' || num[0] == '-') ? 1 : 0;
  if (start == num.size()) bad();
  for (size_t i = start; i < num.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(num[i]))) bad();
  Int n(num, 10);
  Int d(1);
  if (slash != std::string::npos) {
    std::string den = text.substr(slash + 1);
    if (den.empty()) bad();
    for (char ch : den)
      if (!isdigit(static_cast<unsigned char>(ch))) bad();
    d = Int(den, 10);
    if (d == 0) fail(ErrorCode::ZeroDenominator, "zero denominator in '" + text + "'");
  }
  return make_rat(n, d);
}

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

} // namespace kmchev
