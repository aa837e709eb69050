#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peretz/error.hpp"
#include "peretz/rational.hpp"

namespace peretz {

/// A variable symbol. Variables are totally ordered by name.
class Var {
 public:
  Var() = default;
  explicit Var(std::string name) : name_(std::move(name)) {}
  explicit Var(const char* name) : name_(name) {}

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Var&, const Var&) = default;
  friend std::strong_ordering operator<=>(const Var& a, const Var& b) { return a.name_ <=> b.name_; }

 private:
  std::string name_;
};

/// The distinguished limit symbol for level-0 targets.
inline const Var kLimitSymbol{"C"};

/// Sparse exponent vector sorted by variable, zero exponents omitted.
using ExpVec = std::vector<std::pair<Var, Exponent>>;

/// Exponent vector with its cached total degree; the key of a polynomial term.
struct ExpKey {
  Exponent degree;
  ExpVec exps;

  ExpKey() = default;
  explicit ExpKey(ExpVec e) : exps(std::move(e)) {
    degree = 0;
    for (const auto& [v, x] : exps) degree += x;
  }

  Exponent exponent(const Var& v) const {
    auto it = std::lower_bound(exps.begin(), exps.end(), v,
                               [](const auto& p, const Var& w) { return p.first < w; });
    if (it != exps.end() && it->first == v) return it->second;
    return Exponent(0);
  }

  friend bool operator==(const ExpKey& a, const ExpKey& b) { return a.exps == b.exps; }
};

/// Graded lexicographic order, descending: higher total degree first, then
/// the larger exponent of the first differing variable (variables by name).
struct TermOrder {
  bool operator()(const ExpKey& a, const ExpKey& b) const {
    if (a.degree != b.degree) return a.degree > b.degree;
    std::size_t i = 0, j = 0;
    const Exponent zero(0);
    while (i < a.exps.size() || j < b.exps.size()) {
      const Var* v;
      const Exponent* ea = &zero;
      const Exponent* eb = &zero;
      if (j >= b.exps.size() || (i < a.exps.size() && a.exps[i].first < b.exps[j].first)) {
        v = &a.exps[i].first;
        ea = &a.exps[i].second;
        ++i;
      } else if (i >= a.exps.size() || b.exps[j].first < a.exps[i].first) {
        v = &b.exps[j].first;
        eb = &b.exps[j].second;
        ++j;
      } else {
        v = &a.exps[i].first;
        ea = &a.exps[i].second;
        eb = &b.exps[j].second;
        ++i;
        ++j;
      }
      (void)v;
      if (*ea != *eb) return *ea > *eb;
    }
    return false;
  }
};

struct Monomial {
  Rational coeff;
  ExpVec exps;
};

/// Sparse multivariate Laurent polynomial with rational coefficients and
/// rational exponents. Immutable in practice: every operation returns a new value.
class Poly {
 public:
  using Terms = std::map<ExpKey, Rational, TermOrder>;

  Poly() = default;
  Poly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(ExpKey{}, c);
  }
  Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static Poly variable(const Var& v, const Exponent& e = Exponent(1)) { return monomial(Rational(1), {{v, e}}); }
  static Poly variable(const char* name, const Exponent& e = Exponent(1)) { return variable(Var(name), e); }

  static Poly monomial(const Rational& c, ExpVec exps) {
    Poly p;
    p.add_term(ExpKey(normalize(std::move(exps))), c);
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.exps.empty());
  }

  bool is_monomial() const noexcept { return terms_.size() == 1; }

  /// Coefficient of the exponent-free term.
  Rational constant_term() const {
    auto it = terms_.find(ExpKey{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational coefficient(const ExpVec& exps) const {
    auto it = terms_.find(ExpKey(normalize(exps)));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::set<Var> variables() const {
    std::set<Var> out;
    for (const auto& [k, c] : terms_)
      for (const auto& [v, e] : k.exps) out.insert(v);
    return out;
  }

  bool contains(const Var& v) const {
    for (const auto& [k, c] : terms_)
      if (k.exponent(v) != 0) return true;
    return false;
  }

  /// Largest exponent of v over all terms (0 for the zero polynomial).
  Exponent degree(const Var& v) const {
    if (terms_.empty()) return Exponent(0);
    bool first = true;
    Exponent best;
    for (const auto& [k, c] : terms_) {
      Exponent e = k.exponent(v);
      if (first || e > best) best = e;
      first = false;
    }
    return best;
  }

  Exponent min_degree(const Var& v) const {
    if (terms_.empty()) return Exponent(0);
    bool first = true;
    Exponent best;
    for (const auto& [k, c] : terms_) {
      Exponent e = k.exponent(v);
      if (first || e < best) best = e;
      first = false;
    }
    return best;
  }

  Exponent total_degree() const { return terms_.empty() ? Exponent(0) : terms_.begin()->first.degree; }

  bool has_integer_exponents() const {
    for (const auto& [k, c] : terms_)
      for (const auto& [v, e] : k.exps)
        if (!is_integer(e)) return false;
    return true;
  }

  /// True when every exponent is a nonnegative integer.
  bool is_polynomial() const {
    for (const auto& [k, c] : terms_)
      for (const auto& [v, e] : k.exps)
        if (!is_integer(e) || e < 0) return false;
    return true;
  }

  Poly operator-() const {
    Poly out = *this;
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [k, c] : b.terms_) out.add_term(k, c);
    return out;
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [k, c] : b.terms_) out.add_term(k, -c);
    return out;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add_term(multiply_keys(ka, kb), ca * cb);
    return out;
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    for (; i != a.terms_.end(); ++i, ++j)
      if (!(i->first == j->first) || i->second != j->second) return false;
    return true;
  }

  /// Accumulates c * (exponent vector of key). Zero results are erased.
  void add_term(const ExpKey& key, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::string to_string() const;

  static ExpVec normalize(ExpVec exps) {
    std::sort(exps.begin(), exps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    ExpVec out;
    for (auto& [v, e] : exps) {
      if (!out.empty() && out.back().first == v) {
        out.back().second += e;
      } else {
        out.emplace_back(v, e);
      }
    }
    std::erase_if(out, [](const auto& p) { return p.second == 0; });
    return out;
  }

  static ExpKey multiply_keys(const ExpKey& a, const ExpKey& b) {
    ExpVec out;
    out.reserve(a.exps.size() + b.exps.size());
    std::size_t i = 0, j = 0;
    while (i < a.exps.size() || j < b.exps.size()) {
      if (j >= b.exps.size() || (i < a.exps.size() && a.exps[i].first < b.exps[j].first)) {
        out.push_back(a.exps[i++]);
      } else if (i >= a.exps.size() || b.exps[j].first < a.exps[i].first) {
        out.push_back(b.exps[j++]);
      } else {
        Exponent e = a.exps[i].second + b.exps[j].second;
        if (e != 0) out.emplace_back(a.exps[i].first, e);
        ++i;
        ++j;
      }
    }
    ExpKey k;
    k.exps = std::move(out);
    k.degree = a.degree + b.degree;
    return k;
  }

 private:
  Terms terms_;
};

inline Poly add(const Poly& a, const Poly& b) { return a + b; }
inline Poly mul(const Poly& a, const Poly& b) { return a * b; }

inline Poly pow(const Poly& p, unsigned long n) {
  Poly result(1);
  Poly base = p;
  while (n > 0) {
    if (n & 1UL) result = result * base;
    n >>= 1UL;
    if (n > 0) base = base * base;
  }
  return result;
}

namespace detail {

inline void append_power(std::string& out, const Var& v, const Exponent& e) {
  out += v.name();
  if (e == 1) return;
  out += '^';
  if (is_integer(e)) {
    out += e.get_num().get_str();
  } else {
    out += '(';
    out += e.get_str();
    out += ')';
  }
}

}  // namespace detail

/// Canonical text: terms in graded-lex descending order, '*' between factors,
/// '^1' and unit coefficients omitted, fractional exponents parenthesized.
inline std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    bool wrote = false;
    if (mag != 1 || k.exps.empty()) {
      out += mag.get_str();
      wrote = true;
    }
    for (const auto& [v, e] : k.exps) {
      if (wrote) out += '*';
      detail::append_power(out, v, e);
      wrote = true;
    }
  }
  return out;
}

inline std::string to_string(const Poly& p) { return p.to_string(); }

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

/// Coefficient extraction along one variable: pairs (exponent, coefficient),
/// sorted by descending exponent, such that sum coefficient * var^exponent == p.
inline std::vector<std::pair<Exponent, Poly>> decompose(const Poly& p, const Var& var) {
  std::map<Exponent, Poly, std::greater<>> buckets;
  for (const auto& [k, c] : p.terms()) {
    Exponent e = k.exponent(var);
    ExpVec rest;
    for (const auto& [v, x] : k.exps)
      if (!(v == var)) rest.emplace_back(v, x);
    buckets[e].add_term(ExpKey(std::move(rest)), c);
  }
  if (buckets.empty()) buckets[Exponent(0)] = Poly();
  return {buckets.begin(), buckets.end()};
}

/// Dense coefficient list P_0..P_n for a var appearing with nonnegative
/// integer exponents only.
inline std::vector<Poly> coefficient_list(const Poly& p, const Var& var) {
  Exponent lo = p.min_degree(var);
  Exponent hi = p.degree(var);
  if (lo < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent of " + var.name());
  std::vector<Poly> out;
  for (const auto& [e, c] : decompose(p, var)) {
    if (!is_integer(e)) throw Error(ErrorCode::InvalidArgument, "fractional exponent of " + var.name());
    std::size_t i = e.get_num().get_ui();
    if (out.size() <= i) out.resize(i + 1);
    out[i] = c;
  }
  (void)hi;
  if (out.empty()) out.emplace_back();
  return out;
}

/// Formal partial derivative; fractional and negative exponents use the power rule.
inline Poly derivative(const Poly& p, const Var& var) {
  Poly out;
  for (const auto& [k, c] : p.terms()) {
    Exponent e = k.exponent(var);
    if (e == 0) continue;
    ExpVec exps = k.exps;
    for (auto& [v, x] : exps)
      if (v == var) x -= 1;
    out.add_term(ExpKey(Poly::normalize(std::move(exps))), c * e);
  }
  return out;
}

using Substitution = std::map<Var, Poly>;

namespace detail {

/// replacement^e for a rational exponent, under Laurent semantics.
inline Poly power_of(const Poly& r, const Exponent& e) {
  if (is_integer(e) && e >= 0) return pow(r, e.get_num().get_ui());
  if (r.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero replacement raised to exponent " + e.get_str());
  if (!r.is_monomial()) {
    if (is_integer(e))
      throw Error(ErrorCode::NegativePowerOfSum, "(" + r.to_string() + ")^" + e.get_str() + " is not a Laurent polynomial");
    throw Error(ErrorCode::FractionalPowerOfSum, "(" + r.to_string() + ")^(" + e.get_str() + ") is undefined");
  }
  const auto& [key, c] = *r.terms().begin();
  Rational coeff;
  if (is_integer(e)) {
    coeff = pow(c, e.get_num().get_si());
  } else {
    if (c <= 0)
      throw Error(ErrorCode::FractionalPowerOfSum,
                  "fractional power of monomial with non-positive coefficient " + c.get_str());
    auto q = rational_power(c, e);
    if (!q) throw Error(ErrorCode::FractionalPowerOfSum, c.get_str() + "^(" + e.get_str() + ") is not rational");
    coeff = *q;
  }
  ExpVec exps = key.exps;
  for (auto& [v, x] : exps) x *= e;
  return Poly::monomial(coeff, std::move(exps));
}

}  // namespace detail

/// Simultaneous substitution of every mapped variable, expanded exactly.
inline Poly substitute(const Poly& p, const Substitution& sub) {
  for (const auto& [v, r] : sub)
    if (!(v == kLimitSymbol) && r.contains(kLimitSymbol))
      throw Error(ErrorCode::LimitSymbolClash, "replacement for " + v.name() + " mentions the limit symbol C");
  std::map<std::pair<Var, Exponent>, Poly> cache;
  Poly out;
  for (const auto& [k, c] : p.terms()) {
    Poly term(c);
    ExpVec kept;
    for (const auto& [v, e] : k.exps) {
      auto it = sub.find(v);
      if (it == sub.end()) {
        kept.emplace_back(v, e);
        continue;
      }
      auto key = std::make_pair(v, e);
      auto cached = cache.find(key);
      if (cached == cache.end()) cached = cache.emplace(key, detail::power_of(it->second, e)).first;
      term = term * cached->second;
    }
    if (!kept.empty()) term = term * Poly::monomial(Rational(1), std::move(kept));
    out += term;
  }
  return out;
}

inline Poly substitute(const Poly& p, const Var& var, const Poly& replacement) {
  return substitute(p, Substitution{{var, replacement}});
}

/// Renames variables; the target names must not already occur unless they are renamed too.
inline Poly rename(const Poly& p, const std::map<Var, Var>& names) {
  Poly out;
  for (const auto& [k, c] : p.terms()) {
    ExpVec exps = k.exps;
    for (auto& [v, e] : exps) {
      auto it = names.find(v);
      if (it != names.end()) v = it->second;
    }
    out.add_term(ExpKey(Poly::normalize(std::move(exps))), c);
  }
  return out;
}

using RationalBindings = std::map<Var, Rational>;
using FloatBindings = std::map<Var, double>;

inline Rational evaluate(const Poly& p, const RationalBindings& bindings) {
  Rational sum = 0;
  for (const auto& [k, c] : p.terms()) {
    Rational term = c;
    for (const auto& [v, e] : k.exps) {
      auto it = bindings.find(v);
      if (it == bindings.end()) throw Error(ErrorCode::UnboundVariable, v.name());
      if (is_integer(e)) {
        term *= pow(it->second, e.get_num().get_si());
      } else {
        if (it->second == 0 && e > 0) {
          term = 0;
          continue;
        }
        auto q = rational_power(it->second, e);
        if (!q)
          throw Error(ErrorCode::NonRealPower,
                      it->second.get_str() + "^(" + e.get_str() + ") is not a real rational");
        term *= *q;
      }
    }
    sum += term;
  }
  return sum;
}

namespace detail {

inline double ipow(double base, long n) {
  bool invert = n < 0;
  unsigned long m = invert ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  double result = 1.0;
  while (m > 0) {
    if (m & 1UL) result *= base;
    m >>= 1UL;
    if (m > 0) base *= base;
  }
  return invert ? 1.0 / result : result;
}

}  // namespace detail

/// Polynomial lowered to doubles over a fixed variable list. Evaluation order
/// is the canonical term order, so results are reproducible bit for bit.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  CompiledPoly(const Poly& p, std::vector<Var> vars) : vars_(std::move(vars)) {
    for (const auto& [k, c] : p.terms()) {
      Term t;
      t.coeff = to_double(c);
      t.exps.assign(vars_.size(), Exponent(0));
      for (const auto& [v, e] : k.exps) {
        auto it = std::find(vars_.begin(), vars_.end(), v);
        if (it == vars_.end()) throw Error(ErrorCode::UnboundVariable, v.name());
        t.exps[static_cast<std::size_t>(it - vars_.begin())] = e;
      }
      for (const auto& e : t.exps) {
        t.integral.push_back(is_integer(e));
        t.int_exps.push_back(is_integer(e) ? e.get_num().get_si() : 0);
        t.float_exps.push_back(to_double(e));
      }
      terms_.push_back(std::move(t));
    }
  }

  const std::vector<Var>& vars() const noexcept { return vars_; }

  double operator()(const std::vector<double>& values) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      double term = t.coeff;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (t.integral[i]) {
          if (t.int_exps[i] != 0) term *= detail::ipow(values[i], t.int_exps[i]);
        } else {
          if (!(values[i] > 0.0))
            throw Error(ErrorCode::NonRealPower, vars_[i].name() + " must be positive for a fractional power");
          term *= std::pow(values[i], t.float_exps[i]);
        }
      }
      sum += term;
    }
    return sum;
  }

 private:
  struct Term {
    double coeff = 0.0;
    std::vector<Exponent> exps;
    std::vector<bool> integral;
    std::vector<long> int_exps;
    std::vector<double> float_exps;
  };
  std::vector<Var> vars_;
  std::vector<Term> terms_;
};

inline double evaluate_float(const Poly& p, const FloatBindings& bindings) {
  std::vector<Var> vars;
  std::vector<double> values;
  for (const auto& v : p.variables()) {
    auto it = bindings.find(v);
    if (it == bindings.end()) throw Error(ErrorCode::UnboundVariable, v.name());
    vars.push_back(v);
    values.push_back(it->second);
  }
  return CompiledPoly(p, std::move(vars))(values);
}

}  // namespace peretz
