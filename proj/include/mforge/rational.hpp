#pragma once
// Exact rational scalar used throughout the library. All point-game
// arithmetic is exact; floating point appears only in the protocol module.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace mforge {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p/q" or a plain integer string. Canonicalizes to lowest terms
// with positive denominator. Returns nullopt on malformed input.
std::optional<Rational> try_parse_rational(const std::string& s);

inline Rational parse_rational(const std::string& s) {
    auto r = try_parse_rational(s);
    if (!r) throw std::invalid_argument("not a rational: '" + s + "'");
    return *r;
}

// Canonical "p/q" (or "p" when q == 1), q > 0.
std::string to_string(const Rational& r);

inline int sign(const Rational& r) { return sgn(r); }

// Largest integer n with n <= r.
Integer floor_int(const Rational& r);
// Smallest integer n with n >= r.
Integer ceil_int(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace mforge
