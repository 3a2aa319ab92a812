#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace webgeom {

using Int = boost::multiprecision::cpp_int;

// Exact rational scalar. cpp_rational keeps gcd(num, den) = 1 and den > 0
// after every operation, which is the canonical form assumed by all
// printers, hashes and solvers in this library.
using Rat = boost::multiprecision::cpp_rational;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical text form: `p` for integers, `p/q` otherwise (q > 0, reduced).
inline std::string rat_str(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

namespace detail {
inline Int parse_int(std::string_view s) {
  if (s.empty()) throw parse_error("empty integer literal");
  bool plus = s[0] == '+';
  std::size_t i = (s[0] == '-' || plus) ? 1 : 0;
  if (i == s.size()) throw parse_error("bad integer literal: " + std::string(s));
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9')
      throw parse_error("bad integer literal: " + std::string(s));
  return Int(std::string(plus ? s.substr(1) : s));
}
}  // namespace detail

// Accepts `p` or `p/q`; the result is reduced to canonical form.
inline Rat parse_rat(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(detail::parse_int(s));
  Int num = detail::parse_int(s.substr(0, slash));
  Int den = detail::parse_int(s.substr(slash + 1));
  if (den == 0) throw parse_error("zero denominator: " + std::string(s));
  return Rat(num, den);
}

}  // namespace webgeom
