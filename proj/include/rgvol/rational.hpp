#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgvol {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline bigint factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial of negative");
  bigint r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

inline bigint binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  bigint r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

inline rational pow_rational(const rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw std::domain_error("0^negative");
    return 1 / pow_rational(base, -e);
  }
  rational r = 1, b = base;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// "num/den" or plain "num"; den omitted means 1.
inline rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return rational(bigint(s));
    bigint num(s.substr(0, slash));
    bigint den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational: " + s);
  }
}

inline std::string to_fraction_string(const rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace rgvol
