#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "errors.hpp"

// Boost 1.74 defines `integer == rational` as `rational == integer`, which
// C++20 rewrites back into the same call: endless recursion.  Exact
// non-template overloads win overload resolution and stop the loop.
namespace boost {
#define MLEF_RATIONAL_EQ(T)                                                    \
  inline bool operator==(rational<std::int64_t> const& a, T b) {               \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b); \
  }
  MLEF_RATIONAL_EQ(int)
  MLEF_RATIONAL_EQ(long)
  MLEF_RATIONAL_EQ(long long)
  MLEF_RATIONAL_EQ(unsigned)
  MLEF_RATIONAL_EQ(unsigned long)
#undef MLEF_RATIONAL_EQ
}  // namespace boost

namespace mlef {

  using Rational = boost::rational<std::int64_t>;

  // Outcome of comparing a norm value with a threshold.
  enum class Sign : char { less = '<', equal = '=', greater = '>' };

  inline Sign compare(Rational const& a, Rational const& b) {
    if (a < b) {
      return Sign::less;
    }
    return a == b ? Sign::equal : Sign::greater;
  }

  inline char to_char(Sign s) {
    return static_cast<char>(s);
  }

  inline Sign sign_from_char(char c) {
    switch (c) {
      case '<': return Sign::less;
      case '=': return Sign::equal;
      case '>': return Sign::greater;
      default: throw InvalidArgument(std::string("not a comparison symbol: ") + c);
    }
  }

  // "p/q", or "p" when the denominator is 1.
  inline std::string to_string(Rational const& r) {
    if (r.denominator() == 1) {
      return std::to_string(r.numerator());
    }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  }

  inline Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty()) {
        throw InvalidArgument("malformed rational: '" + std::string(text) + "'");
      }
      std::size_t pos = 0;
      std::int64_t v  = 0;
      try {
        v = std::stoll(std::string(s), &pos);
      } catch (std::exception const&) {
        throw InvalidArgument("malformed rational: '" + std::string(text) + "'");
      }
      if (pos != s.size()) {
        throw InvalidArgument("malformed rational: '" + std::string(text) + "'");
      }
      return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      return Rational(parse_int(text));
    }
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) {
      throw InvalidArgument("zero denominator: '" + std::string(text) + "'");
    }
    return Rational(parse_int(text.substr(0, slash)), den);
  }

  // Smallest integer >= r.
  inline std::int64_t ceil(Rational const& r) {
    auto n = r.numerator();
    auto d = r.denominator();  // always positive
    auto q = n / d;
    if (n % d != 0 && n > 0) {
      ++q;
    }
    return q;
  }

}  // namespace mlef
