#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <string>

#include "singmetric/errors.hpp"

namespace singmetric {

/// Exact rational scalar used by the toric and atomic engines. Expression
/// templates are off so arithmetic composes with generic code.
using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline double to_double(double r) { return r; }

/// Renders a rational as "p/q" ("p" when q == 1). Deterministic: always
/// in lowest terms with the sign on the numerator.
inline std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

namespace detail {
/// Decimal integer parse. Boost treats a leading zero as an octal prefix,
/// so strip it (keeping the sign) before handing the string over.
inline BigInt parse_decimal_int(std::string s) {
  bool neg = !s.empty() && (s[0] == '-' || s[0] == '+');
  std::string sign = neg ? s.substr(0, 1) : "";
  std::string body = neg ? s.substr(1) : s;
  if (body.empty()) throw ParseError("empty integer literal");
  size_t nz = body.find_first_not_of('0');
  body = nz == std::string::npos ? "0" : body.substr(nz);
  return BigInt(sign + body);
}
}  // namespace detail

/// Parses "p/q", "p" or a plain decimal like "0.25".
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt p = detail::parse_decimal_int(s.substr(0, slash));
      BigInt q = detail::parse_decimal_int(s.substr(slash + 1));
      if (q == 0) throw ParseError("zero denominator in '" + s + "'");
      return Rat(p, q);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(detail::parse_decimal_int(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    BigInt q = 1;
    for (size_t i = dot + 1; i < s.size(); ++i) q *= 10;
    return Rat(detail::parse_decimal_int(digits), q);
  } catch (const std::exception&) {
    throw ParseError("bad rational literal '" + s + "'");
  }
}

}  // namespace singmetric
