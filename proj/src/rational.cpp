#include "percs/rational.hpp"

namespace percs {

long long round_half_even(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);  // always > 0
  const bool neg = num < 0;
  const BigInt a = neg ? BigInt(-num) : num;
  BigInt q = a / den;
  const BigInt r2 = (a % den) * 2;
  if (r2 > den || (r2 == den && (q % 2) != 0)) ++q;
  return neg ? -q.convert_to<long long>() : q.convert_to<long long>();
}

std::string rational_str(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace percs
