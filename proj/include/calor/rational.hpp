#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace calor {

// Exact rational arithmetic.  All geometric comparisons (face coincidence,
// domain tiling, slice stations) run on rationals so that symbolically equal
// expressions compare equal regardless of how they were written down.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parse a decimal literal ("12", "0.002", "-3.5e-2") exactly.
std::optional<Rational> parse_decimal(const std::string& s);

// Render without loss, "p/q" when the denominator is not 1.
std::string to_string_exact(const Rational& r);

}  // namespace calor
