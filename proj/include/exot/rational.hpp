#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace exot {

// Exact rational scalar used for positions, weights, CDF values and plan
// masses. Always reduced, denominator > 0. Floating point enters only where
// irrational powers |y-x|^p force it (module solve / plan costs).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt rational_num(const Rational& r) {
  return boost::multiprecision::numerator(r);
}
inline BigInt rational_den(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline int rational_sign(const Rational& r) { return r.sign(); }

/// Renders "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& r) {
  BigInt n = rational_num(r), d = rational_den(r);
  std::string s = n.str();
  if (d != 1) {
    s += '/';
    s += d.str();
  }
  return s;
}

/// Parses "n", "n/d" or a plain decimal such as "-3.25". Decimals are read
/// exactly (325/100 style), never through a binary float.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();

  std::string_view body = text;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) fail();

  auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) fail();
    BigInt d{std::string(den)};
    if (d == 0) fail();
    value = Rational(BigInt{std::string(num)}, d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty() && fp.empty()) fail();
    if (!ip.empty() && !digits_only(ip)) fail();
    if (!fp.empty() && !digits_only(fp)) fail();
    BigInt scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    BigInt whole = ip.empty() ? BigInt(0) : BigInt{std::string(ip)};
    BigInt frac = fp.empty() ? BigInt(0) : BigInt{std::string(fp)};
    value = Rational(whole * scale + frac, scale);
  } else {
    if (!digits_only(body)) fail();
    value = Rational(BigInt{std::string(body)});
  }
  return negative ? Rational(-value) : value;
}

}  // namespace exot
