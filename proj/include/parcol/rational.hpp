// Exact rationals for density accounting.

#ifndef PARCOL_RATIONAL_HPP_
#define PARCOL_RATIONAL_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "parcol/group.hpp"

namespace parcol {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational frac(long p, long q) { return Rational(Integer(p), Integer(q)); }

// Always "p/q", including integers ("1/1").
inline std::string to_fraction_string(Rational const& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

// "p" for integers, "p/q" otherwise.
inline std::string to_display_string(Rational const& r) {
  if (boost::multiprecision::denominator(r) == 1) {
    return boost::multiprecision::numerator(r).str();
  }
  return to_fraction_string(r);
}

inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(Integer(std::string(text)));
    }
    Integer q(std::string(text.substr(slash + 1)));
    if (q == 0) {
      throw Error("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(Integer(std::string(text.substr(0, slash))), q);
  } catch (std::runtime_error const&) {
    throw Error("not a rational: '" + std::string(text) + "'");
  }
}

inline double to_double(Rational const& r) { return r.convert_to<double>(); }

}  // namespace parcol

#endif  // PARCOL_RATIONAL_HPP_
