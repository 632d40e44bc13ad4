#pragma once
#include <gmpxx.h>
#include <string>
#include <vector>

namespace kmchev {

// Exact arithmetic everywhere: GMP integers and canonical rationals.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat make_rat(long num, long den = 1) {
  return make_rat(Int(num), Int(den));
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline bool is_unit(const Rat& r) { return r == 1 || r == -1; }

// t^e for e possibly negative; requires t != 0 when e < 0.
Rat rat_pow(const Rat& t, long e);

// Canonical string: "p" when the denominator is 1, else "p/q" with q > 0.
std::string rat_str(const Rat& r);
std::string int_str(const Int& z);

// Parses "p" or "p/q"; throws SyntaxError / ZeroDenominator.
Rat parse_rat(const std::string& text);

Int lcm(const Int& a, const Int& b);

using QVec = std::vector<Rat>;
using IVec = std::vector<Int>;

} // namespace kmchev
