#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "peretz/error.hpp"

namespace peretz {

/// Exact rational number; gmp keeps it in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Exponent of a variable in a monomial. May be negative or fractional.
using Exponent = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error(ErrorCode::ZeroDenominator, "rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(ErrorCode::ZeroDenominator, "rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline int sign(const Rational& q) { return sgn(q); }

/// q^n for integer n; throws DivisionByZero for 0^negative.
inline Rational pow(const Rational& q, long n) {
  if (n < 0) {
    if (q == 0) throw Error(ErrorCode::DivisionByZero, "zero raised to a negative power");
    Rational inv = 1 / q;
    return pow(inv, -n);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n));
  return make_rational(num, den);
}

/// Exact real d-th root of q, if it is rational.
inline std::optional<Rational> exact_root(const Rational& q, unsigned long d) {
  if (d == 0) return std::nullopt;
  if (d == 1) return q;
  if (q < 0 && d % 2 == 0) return std::nullopt;
  mpz_class num = abs(q.get_num());
  mpz_class rn, rd;
  if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), d) == 0) return std::nullopt;
  if (mpz_root(rd.get_mpz_t(), q.get_den_mpz_t(), d) == 0) return std::nullopt;
  if (q < 0) rn = -rn;
  return make_rational(rn, rd);
}

/// q^e for a rational exponent, when the result is a real rational.
inline std::optional<Rational> rational_power(const Rational& q, const Exponent& e) {
  if (!e.get_den().fits_ulong_p() || !e.get_num().fits_slong_p()) return std::nullopt;
  auto root = exact_root(q, e.get_den().get_ui());
  if (!root) return std::nullopt;
  if (*root == 0 && e < 0) return std::nullopt;
  return pow(*root, e.get_num().get_si());
}

inline mpz_class lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline mpz_class gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Nearest double when numerator and denominator are exact in binary64
/// (one IEEE division); otherwise a 128-bit intermediate.
inline double to_double(const Rational& q) {
  static const mpz_class kExact = mpz_class(1) << 53;
  if (abs(q.get_num()) <= kExact && q.get_den() <= kExact) return q.get_num().get_d() / q.get_den().get_d();
  mpf_class f(q, 128);
  return f.get_d();
}

}  // namespace peretz
