#pragma once

#include <random>

#include "peretz/assertions.hpp"
#include "peretz/poly.hpp"

namespace peretz::proptest {

/// Seeded generator of small rationals and polynomials in x, y.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational rational(long span = 5, long max_den = 3) {
    long d = integer(1, max_den);
    return make_rational(integer(-span * d, span * d), d);
  }

  Rational nonzero_rational(long span = 5, long max_den = 3) {
    Rational r;
    do r = rational(span, max_den);
    while (r == 0);
    return r;
  }

  /// Polynomial in x, y with exponents in [lo, hi] and optional half-integer steps.
  Poly poly(int max_terms = 4, long lo = 0, long hi = 3, bool fractional = false) {
    Poly p;
    int n = static_cast<int>(integer(0, max_terms));
    for (int t = 0; t < n; ++t) {
      Exponent ex = exponent(lo, hi, fractional), ey = exponent(lo, hi, fractional);
      p += Poly::monomial(rational(), {{kX, ex}, {kY, ey}});
    }
    return p;
  }

  Poly univariate(const Var& v, int max_degree) {
    Poly p;
    for (int i = 0; i <= max_degree; ++i) p += Poly::monomial(rational(), {{v, Exponent(i)}});
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  Exponent exponent(long lo, long hi, bool fractional) {
    if (!fractional) return Exponent(integer(lo, hi));
    return make_rational(integer(2 * lo, 2 * hi), 2);
  }

  std::mt19937_64 rng_;
};

}  // namespace peretz::proptest
