#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace qsure {

// Exact rational scalar used throughout. Never introduce floating point into
// measure arithmetic: absolute continuity, polarity and the LP certificates
// are support/sign predicates that must not suffer rounding.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// Canonical text form: "p/q" with q > 0 and gcd(|p|,q) = 1; integers are
// written without the "/1" suffix.
std::string rat_str(const Rat& r);

// Accepts "p" or "p/q" with an optional leading '-' on p; q > 0 after the
// slash. No whitespace, no decimals. Returns nullopt on malformed input.
std::optional<Rat> parse_rat(std::string_view s);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
inline int rat_sign(const Rat& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

inline Int rat_floor(const Rat& r) {
  Int p = numerator(r), q = denominator(r);  // q > 0 in canonical form
  Int d = p / q;
  if (p % q != 0 && p < 0) --d;
  return d;
}

inline Int rat_ceil(const Rat& r) {
  Int p = numerator(r), q = denominator(r);
  Int d = p / q;
  if (p % q != 0 && p > 0) ++d;
  return d;
}

}  // namespace qsure
