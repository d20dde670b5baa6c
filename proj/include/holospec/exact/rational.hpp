#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace holospec {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "n", "-n", "p/q"; whitespace is not allowed.
Rational parse_rational(const std::string& s);

// "p/q", or "n" when q == 1.
std::string to_string(const Rational& q);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
long floor_long(const Rational& q);
long ceil_long(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

double to_double(const Rational& q);

}  // namespace holospec
