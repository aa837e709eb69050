#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "peretz/error.hpp"
#include "peretz/poly.hpp"
#include "peretz/rational.hpp"

namespace peretz {

/// Dense univariate polynomial over Q; coeffs[i] multiplies t^i, no trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UPoly from_poly(const Poly& p, const Var& var) {
    for (const auto& v : p.variables())
      if (!(v == var)) throw Error(ErrorCode::NotUnivariate, p.to_string() + " mentions " + v.name());
    if (!p.has_integer_exponents())
      throw Error(ErrorCode::NotUnivariate, p.to_string() + " has fractional exponents");
    Exponent lo = p.min_degree(var);
    if (lo < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent in " + p.to_string());
    std::vector<Rational> c;
    for (const auto& [k, coeff] : p.terms()) {
      std::size_t i = k.exponent(var).get_num().get_ui();
      if (c.size() <= i) c.resize(i + 1);
      c[i] = coeff;
    }
    return UPoly(std::move(c));
  }

  Poly to_poly(const Var& var) const {
    Poly p;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) p += Poly::monomial(c_[i], {{var, Exponent(static_cast<long>(i))}});
    return p;
  }

  bool is_zero() const noexcept { return c_.empty(); }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const Rational& lead() const { return c_.back(); }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  Rational operator()(const Rational& t) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  int sign_at(const Rational& t) const { return sgn((*this)(t)); }

  UPoly derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
    return UPoly(std::move(d));
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> d = c_;
    Rational l = lead();
    for (auto& x : d) x /= l;
    return UPoly(std::move(d));
  }

  /// Integer coefficients with gcd 1 and a positive leading coefficient.
  std::vector<mpz_class> primitive() const {
    mpz_class den = 1;
    for (const auto& x : c_) den = lcm(den, x.get_den());
    std::vector<mpz_class> out;
    mpz_class g = 0;
    for (const auto& x : c_) {
      Rational scaled = x * den;
      out.push_back(scaled.get_num());
      g = peretz::gcd(g, scaled.get_num());
    }
    if (g == 0) return out;
    if (out.back() < 0) g = -g;
    for (auto& x : out) x /= g;
    return out;
  }

  UPoly primitive_poly() const {
    std::vector<Rational> d;
    for (const auto& z : primitive()) d.emplace_back(z);
    return UPoly(std::move(d));
  }

  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> d(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    return UPoly(std::move(d));
  }

  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<Rational> d(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.coeff(i) - b.coeff(i);
    return UPoly(std::move(d));
  }

  /// Euclidean division: a = q*b + r with deg r < deg b.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
    std::vector<Rational> r = a.c_;
    long db = b.degree();
    long da = a.degree();
    if (da < db) return {UPoly(), a};
    std::vector<Rational> q(static_cast<std::size_t>(da - db + 1));
    for (long i = da; i >= db; --i) {
      Rational f = r[static_cast<std::size_t>(i)] / b.lead();
      q[static_cast<std::size_t>(i - db)] = f;
      if (f == 0) continue;
      for (long j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }

  static UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
      auto r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  friend bool operator==(const UPoly&, const UPoly&) = default;

 private:
  std::vector<Rational> c_;
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
};

struct RationalRoot {
  Rational value;
  unsigned multiplicity = 1;
};

struct RootInterval {
  Rational lower;
  Rational upper;
  unsigned count = 1;
};

struct RootReport {
  std::vector<RationalRoot> rational_roots;         // ascending
  std::vector<RootInterval> irrational_root_intervals;  // ascending, disjoint
  Poly squarefree_part;

  std::size_t distinct_real_roots() const { return rational_roots.size() + irrational_root_intervals.size(); }
};

namespace detail {

/// Square-free decomposition (Yun): f = lc * prod factors[i]^(i+1), factors monic.
inline std::vector<UPoly> squarefree_decomposition(const UPoly& f) {
  std::vector<UPoly> out;
  if (f.degree() < 1) return out;
  UPoly df = f.derivative();
  UPoly a = UPoly::gcd(f, df);
  UPoly b = UPoly::divmod(f, a).first;
  UPoly c = UPoly::divmod(df, a).first;
  UPoly d = c - b.derivative();
  while (b.degree() >= 1) {
    UPoly g = UPoly::gcd(b, d);
    out.push_back(g);
    UPoly nb = UPoly::divmod(b, g).first;
    c = UPoly::divmod(d, g).first;
    b = nb;
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() < 1) out.pop_back();
  return out;
}

inline std::vector<UPoly> sturm_sequence(const UPoly& f) {
  std::vector<UPoly> seq{f, f.derivative()};
  while (!seq.back().is_zero()) {
    UPoly r = UPoly::divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    std::vector<Rational> neg;
    for (const auto& x : r.coeffs()) neg.push_back(-x);
    seq.emplace_back(std::move(neg));
  }
  return seq;
}

inline int sign_variations(const std::vector<UPoly>& seq, const Rational& t) {
  int count = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = p.sign_at(t);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Distinct roots in (a, b].
inline int count_roots(const std::vector<UPoly>& seq, const Rational& a, const Rational& b) {
  return sign_variations(seq, a) - sign_variations(seq, b);
}

/// 1 + max |c_i / c_n|; every real root lies strictly inside (-B, B).
inline Rational cauchy_bound(const UPoly& f) {
  Rational m = 0;
  for (long i = 0; i < f.degree(); ++i) {
    Rational r = abs(f.coeff(static_cast<std::size_t>(i)) / f.lead());
    if (r > m) m = r;
  }
  return m + 1;
}

/// Disjoint intervals (lo, hi], each holding exactly one root of the square-free f,
/// bisected until hi - lo <= max_width.
inline std::vector<RootInterval> isolate(const UPoly& f, const Rational& max_width) {
  std::vector<RootInterval> out;
  if (f.degree() < 1) return out;
  auto seq = sturm_sequence(f);
  Rational bound = cauchy_bound(f);
  std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    int n = count_roots(seq, lo, hi);
    if (n == 0) continue;
    if (n == 1) {
      out.push_back({lo, hi, 1});
      continue;
    }
    Rational mid = (lo + hi) / 2;
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, mid);
  }
  for (auto& iv : out) {
    while (iv.upper - iv.lower > max_width) {
      Rational mid = (iv.lower + iv.upper) / 2;
      if (count_roots(seq, iv.lower, mid) == 1) {
        iv.upper = mid;
      } else {
        iv.lower = mid;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lower < b.lower; });
  return out;
}

inline std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, unsigned>> factors;
  for (mpz_class p = 2; p * p <= n; ++p) {
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k > 0) factors.emplace_back(p, k);
  }
  if (n > 1) factors.emplace_back(n, 1);
  std::vector<mpz_class> out{1};
  for (const auto& [p, k] : factors) {
    std::size_t base = out.size();
    mpz_class pk = 1;
    for (unsigned e = 1; e <= k; ++e) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Rational number with the least denominator in [lo, hi] (lo <= hi).
inline Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (lo <= 0 && hi >= 0) return Rational(0);
  if (hi < 0) return -simplest_between(-hi, -lo);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational rest = simplest_between(1 / (hi - Rational(fl)), 1 / (lo - Rational(fl)));
  return Rational(fl) + 1 / rest;
}

inline constexpr long kTrialDivisionLimit = 1'000'000'000'000L;

/// Rational roots of a square-free polynomial with nonzero constant term.
inline std::vector<Rational> rational_roots_squarefree(const UPoly& f) {
  std::vector<Rational> roots;
  if (f.degree() < 1) return roots;
  auto z = f.primitive();
  mpz_class a0 = z.front();
  mpz_class an = z.back();
  UPoly g = f.primitive_poly();
  if (abs(a0) <= kTrialDivisionLimit && abs(an) <= kTrialDivisionLimit) {
    auto ps = divisors(a0);
    auto qs = divisors(an);
    for (const auto& p : ps)
      for (const auto& q : qs)
        for (int s : {1, -1}) {
          Rational cand = make_rational(mpz_class(s * p), q);
          if (g(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
        }
  } else {
    // Distinct fractions with denominators <= |an| are at least 1/an^2 apart.
    Rational width = Rational(1) / (Rational(an * an) * 2);
    for (const auto& iv : isolate(g, width)) {
      Rational cand = simplest_between(iv.lower, iv.upper);
      if (abs(cand.get_den()) <= abs(an) && g(cand) == 0) roots.push_back(cand);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace detail

inline const Rational kDefaultIsolationWidth = make_rational(1, 1'000'000);

/// All real roots of a univariate integer-exponent polynomial: rational ones
/// exactly with multiplicity, the others in disjoint rational intervals.
inline RootReport real_roots(const Poly& p, const Var& var, const Rational& max_width = kDefaultIsolationWidth) {
  for (const auto& v : p.variables())
    if (!(v == var)) throw Error(ErrorCode::NotUnivariate, p.to_string() + " mentions " + v.name());
  if (!p.has_integer_exponents()) throw Error(ErrorCode::NotUnivariate, p.to_string() + " has fractional exponents");
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "the zero polynomial has no isolated roots");

  Exponent lo = p.min_degree(var);
  unsigned zero_mult = lo > 0 ? static_cast<unsigned>(lo.get_num().get_ui()) : 0;
  Poly shifted = p * Poly::variable(var, -lo);
  UPoly f = UPoly::from_poly(shifted, var);

  RootReport report;
  std::vector<UPoly> layers = detail::squarefree_decomposition(f);
  UPoly sqfree(std::vector<Rational>{Rational(1)});
  UPoly remaining(std::vector<Rational>{Rational(1)});
  if (zero_mult > 0) {
    report.rational_roots.push_back({Rational(0), zero_mult});
    sqfree = UPoly(std::vector<Rational>{Rational(0), Rational(1)});
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    sqfree = sqfree * layers[i];
    UPoly rest = layers[i];
    for (const auto& r : detail::rational_roots_squarefree(layers[i])) {
      report.rational_roots.push_back({r, static_cast<unsigned>(i + 1)});
      rest = UPoly::divmod(rest, UPoly(std::vector<Rational>{-r, Rational(1)})).first;
    }
    remaining = remaining * rest;
  }
  std::sort(report.rational_roots.begin(), report.rational_roots.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });

  auto intervals = detail::isolate(remaining, max_width);
  for (auto& iv : intervals) {
    auto seq = detail::sturm_sequence(remaining);
    auto inside = [&](const Rational& r) { return r >= iv.lower && r <= iv.upper; };
    while (std::any_of(report.rational_roots.begin(), report.rational_roots.end(),
                       [&](const auto& rr) { return inside(rr.value); })) {
      Rational mid = (iv.lower + iv.upper) / 2;
      if (detail::count_roots(seq, iv.lower, mid) == 1) {
        iv.upper = mid;
      } else {
        iv.lower = mid;
      }
    }
  }
  report.irrational_root_intervals = std::move(intervals);
  report.squarefree_part = sqfree.primitive_poly().to_poly(var);
  return report;
}

}  // namespace peretz
