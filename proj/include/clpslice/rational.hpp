#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace clpslice {

//! Exact rational number, always kept in canonical form (lowest terms, positive denominator).
using Rational = mpq_class;

//! Render as "n" for integers and "n/d" otherwise.
std::string to_string(const Rational &value);

//! Parse "n" or "n/d" (optionally signed). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

inline bool is_integer(const Rational &value) { return value.get_den() == 1; }

} // namespace clpslice
