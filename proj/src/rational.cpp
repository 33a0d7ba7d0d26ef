#include "ellstab/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace ellstab {

std::int64_t floorOf(const Rational& r) {
  const auto n = r.numerator();
  const auto d = r.denominator();  // always positive for boost::rational
  auto q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

std::int64_t ceilOf(const Rational& r) { return -floorOf(-r); }

std::string toString(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parseInt(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parseRational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parseInt(text));
  const auto den = parseInt(trim(text.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(parseInt(trim(text.substr(0, slash))), den);
}

std::int64_t lcm(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace ellstab
