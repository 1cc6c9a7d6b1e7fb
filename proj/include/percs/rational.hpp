#pragma once

// Exact rational arithmetic used for every demand/load computation.
// Floating point only ever appears at report time.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace percs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(long long num, long long den) { return Rational(num, den); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Nearest integer, ties to even — printf's "%.0f" convention, which the
// reported throughput figures follow (2.5 -> 2, 320/3 -> 107, 160/3 -> 53).
long long round_half_even(const Rational& x);

// "num/den", or just "num" for integers.
std::string rational_str(const Rational& x);

}  // namespace percs
