#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcast {

// Exact arithmetic everywhere a division can appear (edge weights, delays,
// metric means).  Keeps equal-length ties exactly equal and makes CSV output
// byte-stable across platforms and thread counts.
using Rational = boost::rational<long long>;

// Parses "3", "3/2" or "1.25" into an exact rational. Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

// Minimal exact representation: integer if whole, terminating decimal if the
// reduced denominator is 2^a*5^b, otherwise "p/q".
std::string format_exact(const Rational& r);

// Fixed-point decimal with `digits` fractional digits, rounded half-up, via
// integer long division (no floating point anywhere).
std::string format_decimal(const Rational& r, int digits);

}  // namespace mcast
