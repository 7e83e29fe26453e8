#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include <gmpxx.h>

namespace kadic {

/// Exact arbitrary-precision rational. Always kept in canonical form.
using Rational = mpq_class;

/// Canonical num/den; the denominator must be non-zero.
Rational make_rational(std::int64_t num, std::int64_t den);

/// Parses `p/q`, `p`, or a plain decimal such as `0.125` into an exact rational.
/// Throws ParameterError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical `p/q` text; integers are written with an explicit `/1`.
std::string format_rational(const Rational& value);

/// Round-to-nearest decimal with 12 significant digits. Lossy, for humans only.
std::string format_decimal(const Rational& value);

/// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// Lifts an integer into any scalar the numeric templates accept.
template <typename Scalar>
Scalar scalar_from_int(std::int64_t n) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return Rational(static_cast<long>(n));
  } else {
    return static_cast<Scalar>(n);
  }
}

}  // namespace kadic
