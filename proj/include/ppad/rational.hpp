#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "ppad/error.hpp"

namespace ppad {

/// Exact rational in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Parses `p/q` or an integer, each with an optional leading '-'. Zero
/// denominators and stray characters are rejected.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false)) {
    throw Error("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline std::string format_rational(const Rational& r) { return r.get_str(); }

}  // namespace ppad
