#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// C++20 rewritten comparisons send boost's mixed rational == int template into
// infinite recursion; exact-match overloads take precedence.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a.denominator() == 1 && a.numerator() == b;
}
}  // namespace boost

namespace ellstab {

using Rational = boost::rational<std::int64_t>;

/// Largest integer not exceeding r.
std::int64_t floorOf(const Rational& r);
std::int64_t ceilOf(const Rational& r);

inline bool isIntegral(const Rational& r) { return r.denominator() == 1; }

/// "p" for integers, "p/q" otherwise.
std::string toString(const Rational& r);

/// Accepts "p", "-p", "p/q". Throws std::invalid_argument.
Rational parseRational(std::string_view text);

std::int64_t lcm(std::int64_t a, std::int64_t b);

}  // namespace ellstab
