#include "kadic/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "kadic/error.hpp"

namespace kadic {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

[[noreturn]] void reject(std::string_view text) {
  throw ParameterError("not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ParameterError("zero denominator");
  Rational out(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  out.canonicalize();
  return out;
}

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational out;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) reject(text);
    mpz_class q(std::string(den), 10);
    if (q == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
    out = Rational(mpz_class(std::string(num), 10), q);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) reject(text);
    if (!whole.empty() && !all_digits(whole)) reject(text);
    if (!frac.empty() && !all_digits(frac)) reject(text);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class digits(std::string(whole) + std::string(frac), 10);
    out = Rational(digits, scale);
  } else {
    if (!all_digits(body)) reject(text);
    out = Rational(mpz_class(std::string(body), 10));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string format_decimal(const Rational& value) {
  // mpf keeps enough bits that the 12-digit rounding is the only loss.
  mpf_class approx(value, 256);
  char buf[64];
  gmp_snprintf(buf, sizeof buf, "%.12Fg", approx.get_mpf_t());
  return buf;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw ParameterError("non-finite value has no rational form");
  return Rational(value);
}

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace kadic
