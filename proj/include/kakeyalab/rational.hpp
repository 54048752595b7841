#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

#include "kakeyalab/errors.hpp"

namespace kakeyalab {

using Rational = boost::rational<std::int64_t>;

/// "num/den" in lowest terms; integers keep the "/1" so every norm parses the same way.
inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw FormatError("malformed rational '" + text + "'");
  }
}

}  // namespace kakeyalab
