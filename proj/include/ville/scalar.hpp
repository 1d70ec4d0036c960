#ifndef VILLE_SCALAR_HPP
#define VILLE_SCALAR_HPP

// Arithmetic backends. Every algorithm in the library is templated on a
// scalar type; two are supported:
//
//   double    fast floating point, used for simulation and Monte Carlo.
//   Rational  exact GMP rationals, used wherever an identity is asserted
//             with zero tolerance.

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include "ville/error.hpp"

namespace ville {

using Rational = mpq_class;

template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rational>;

template <Scalar S>
inline bool is_finite(const S& x) {
  if constexpr (std::same_as<S, double>) {
    return std::isfinite(x);
  } else {
    (void)x;
    return true;
  }
}

template <Scalar S>
inline double to_double(const S& x) {
  if constexpr (std::same_as<S, double>) {
    return x;
  } else {
    return x.get_d();
  }
}

// Exact conversion: every finite double is a dyadic rational.
template <Scalar S>
inline S from_double(double x) {
  if constexpr (std::same_as<S, double>) {
    return x;
  } else {
    if (!std::isfinite(x)) throw DomainError("cannot convert non-finite value to a rational");
    return Rational(x);
  }
}

template <Scalar S>
inline S from_ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("zero denominator");
  if constexpr (std::same_as<S, double>) {
    return static_cast<double>(num) / static_cast<double>(den);
  } else {
    Rational r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    r.canonicalize();
    return r;
  }
}

// Shortest decimal that parses back to the identical double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw DomainError("failed to format number");
  return std::string(buf, end);
}

// Rationals print as "n/d" (or "n" when integral); doubles print in
// shortest round-trip form.
template <Scalar S>
inline std::string to_string(const S& x) {
  if constexpr (std::same_as<S, double>) {
    return format_double(x);
  } else {
    return x.get_str();
  }
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Parses [+-]digits[.digits][e[+-]digits] exactly into a rational.
inline bool parse_decimal_exact(std::string_view text, Rational& out) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) return false;
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return false;
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) return false;
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) return false;
    digits = std::string(s);
  }
  mpz_class numerator(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(numerator, scale) : Rational(numerator * scale);
  r.canonicalize();
  out = negative ? Rational(-r) : r;
  return true;
}

}  // namespace detail

// Accepts decimal ("0.6", "1e-3") or fractional ("3/7") notation. Decimal
// input is converted exactly in rational mode.
template <Scalar S>
inline S parse_scalar(std::string_view text) {
  auto fail = [&]() -> S { throw ParseError("malformed number '" + std::string(text) + "'"); };
  if (text.empty()) return fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num, den;
    if (!detail::parse_decimal_exact(text.substr(0, slash), num) ||
        !detail::parse_decimal_exact(text.substr(slash + 1), den) || den == 0)
      return fail();
    Rational q = num / den;
    if constexpr (std::same_as<S, double>) {
      return q.get_d();
    } else {
      return q;
    }
  }
  if constexpr (std::same_as<S, double>) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      // from_chars rejects a leading '+'.
      if (text.front() == '+') return parse_scalar<double>(text.substr(1));
      return fail();
    }
    return value;
  } else {
    Rational q;
    if (!detail::parse_decimal_exact(text, q)) return fail();
    return q;
  }
}

template <Scalar S>
inline S abs_value(const S& x) {
  if constexpr (std::same_as<S, double>) {
    return std::fabs(x);
  } else {
    return abs(x);
  }
}

// |a - b| <= tol for doubles; exact equality for rationals.
template <Scalar S>
inline bool nearly_equal(const S& a, const S& b, double tol) {
  if constexpr (std::same_as<S, double>) {
    return std::fabs(a - b) <= tol;
  } else {
    (void)tol;
    return a == b;
  }
}

}  // namespace ville

#endif  // VILLE_SCALAR_HPP
