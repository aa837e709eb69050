#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "peretz/balance.hpp"
#include "peretz/error.hpp"
#include "peretz/poly.hpp"
#include "peretz/roots.hpp"

namespace peretz {

enum class Mode { YFinite, XFinite };

inline std::string to_string(Mode m) { return m == Mode::YFinite ? "y-finite" : "x-finite"; }

/// y-finite: x grows, y stays finite; x-finite swaps the roles.
inline Var growth_var(Mode m) { return m == Mode::YFinite ? kX : kY; }
inline Var finite_var(Mode m) { return m == Mode::YFinite ? kY : kX; }

enum class Stage { Initial, Refined, Valued, Contradicted, Stalled };

inline std::string to_string(Stage s) {
  switch (s) {
    case Stage::Initial: return "initial";
    case Stage::Refined: return "refined";
    case Stage::Valued: return "valued";
    case Stage::Contradicted: return "contradicted";
    case Stage::Stalled: return "stalled";
  }
  return "unknown";
}

inline const Var kParam{"s"};
inline const Var kErrorVar{"z"};

/// coeff * t^exponent with t = |growth variable|.
struct ExpansionTerm {
  Poly coeff;
  Exponent exponent;

  friend bool operator==(const ExpansionTerm&, const ExpansionTerm&) = default;
};

/// Candidate curve growth = direction*t, finite = sum expansion + error_var, t -> +inf.
/// Exponents strictly decrease; a valued branch ends in a free term whose coefficient is kParam.
struct BranchState {
  Mode mode = Mode::YFinite;
  int direction = 1;
  std::vector<ExpansionTerm> expansion;
  Var error_var = kErrorVar;
  OBound bound{kErrorVar, kX, Exponent(0)};
  Stage stage = Stage::Initial;
  unsigned depth = 0;
  std::optional<Poly> value;  // C(s) from the level-0 balance
  std::optional<RootInterval> stalled_interval;
  std::string note;

  Var growth() const { return growth_var(mode); }
  Var finite() const { return finite_var(mode); }

  /// Finite variable as a Laurent polynomial in t (named after the growth variable) plus error_var.
  Poly finite_expression(bool with_error = true) const {
    Poly out = with_error ? Poly::variable(error_var) : Poly();
    for (const auto& term : expansion) out += term.coeff * Poly::variable(growth(), term.exponent);
    return out;
  }
};

/// p(sign/small^k, param*small^N + sum_{i<N} lower_coeffs[i]*small^i) == rhs.
struct AsymptoticIdentity {
  int sign = 1;
  long k = 1;
  long N = 0;
  std::vector<Poly> lower_coeffs;  // index i holds the coefficient of small^i
  Var growth = kX;
  Var finite = kY;
  Var small = kX;
  Var param = kY;
  std::optional<Poly> rhs;
  bool verified = false;

  Poly growth_replacement() const {
    return Poly::monomial(Rational(sign), {{small, Exponent(-k)}});
  }

  Poly finite_replacement() const {
    Poly out = Poly::variable(param) * Poly::variable(small, Exponent(N));
    for (std::size_t i = 0; i < lower_coeffs.size(); ++i)
      out += lower_coeffs[i] * Poly::variable(small, Exponent(static_cast<long>(i)));
    return out;
  }

  Substitution substitution() const { return {{growth, growth_replacement()}, {finite, finite_replacement()}}; }
};

/// small^-k replaces t, so each expansion exponent e maps to small^(-k*e).
inline AsymptoticIdentity build_identity(const BranchState& b) {
  if (b.expansion.empty()) throw Error(ErrorCode::InvalidArgument, "branch has no expansion");
  mpz_class k = 1;
  for (const auto& term : b.expansion) k = lcm(k, term.exponent.get_den());
  AsymptoticIdentity id;
  id.sign = b.direction;
  id.k = k.get_si();
  id.growth = b.growth();
  id.finite = b.finite();
  id.small = b.growth();
  id.param = b.finite();
  const auto& free = b.expansion.back();
  if (!(free.coeff == Poly::variable(kParam)))
    throw Error(ErrorCode::InvalidArgument, "last expansion coefficient must be the free parameter");
  auto scaled = [&](const Exponent& e) -> long {
    Exponent v = -e * Exponent(k);
    if (!is_integer(v) || v < 0)
      throw Error(ErrorCode::ExponentDenominatorMismatch, "exponent " + e.get_str() + " does not map to a power of small");
    return v.get_num().get_si();
  };
  id.N = scaled(free.exponent);
  id.lower_coeffs.assign(static_cast<std::size_t>(id.N), Poly());
  for (std::size_t j = 0; j + 1 < b.expansion.size(); ++j) {
    long i = scaled(b.expansion[j].exponent);
    if (i >= id.N) throw Error(ErrorCode::ExponentDenominatorMismatch, "expansion exponents must decrease");
    id.lower_coeffs[static_cast<std::size_t>(i)] += b.expansion[j].coeff;
  }
  return id;
}

/// Composes p with the identity; true iff the composite is a polynomial and matches a supplied rhs.
inline std::pair<bool, Poly> verify_identity(const Poly& p, const AsymptoticIdentity& id) {
  Poly composite = substitute(p, id.substitution());
  bool ok = composite.is_polynomial() && (!id.rhs || *id.rhs == composite);
  return {ok, composite};
}

/// rhs at small = 0: the attained values as a polynomial in the parameter.
inline Poly asymptotic_values(const AsymptoticIdentity& id) {
  if (!id.rhs) throw Error(ErrorCode::InvalidArgument, "identity has no right-hand side");
  return substitute(*id.rhs, id.small, Poly());
}

/// Freezes the free coefficient as symbol `fixed` and appends a new free term at `exponent`.
inline BranchState extend_branch(const BranchState& b, const Var& fixed, const Exponent& exponent) {
  if (b.expansion.empty() || !(b.expansion.back().coeff == Poly::variable(kParam)))
    throw Error(ErrorCode::InvalidArgument, "branch has no free term to extend");
  if (exponent >= b.expansion.back().exponent)
    throw Error(ErrorCode::InvalidArgument, "extension exponent must be below the free term");
  BranchState out = b;
  out.expansion.back().coeff = Poly::variable(fixed);
  out.expansion.push_back({Poly::variable(kParam), exponent});
  out.value.reset();
  return out;
}

/// For odd k, small -> -small turns a sign -1 identity into a sign +1 one.
inline bool same_curve_family(const AsymptoticIdentity& plus, const AsymptoticIdentity& minus) {
  if (plus.k != minus.k || plus.N != minus.N || plus.k % 2 == 0 || plus.sign == minus.sign) return false;
  Poly flip = -Poly::variable(minus.small);
  Poly param = Rational(minus.N % 2 == 0 ? 1 : -1) * Poly::variable(minus.param);
  Substitution s{{minus.small, flip}, {minus.param, param}};
  return substitute(minus.growth_replacement(), s) == plus.growth_replacement() &&
         substitute(minus.finite_replacement(), s) == plus.finite_replacement();
}

}  // namespace peretz
