#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "peretz/error.hpp"
#include "peretz/poly.hpp"

namespace peretz {

enum class Target { Zero, Limit };

inline std::string to_string(Target t) { return t == Target::Limit ? kLimitSymbol.name() : "0"; }

/// One limit condition: body -> C at level 0, body -> 0 above it.
struct Assertion {
  unsigned level = 0;
  Poly body;
  Target target = Target::Zero;
};

/// Assertions for p = sum P_i(v) u^i decomposed along u, indexed by level 0..n.
struct AssertionList {
  Var decomposition_var;
  Var coefficient_var;
  std::vector<Assertion> assertions;

  std::size_t size() const noexcept { return assertions.size(); }
  const Assertion& operator[](std::size_t level) const { return assertions.at(level); }
};

inline const Var kX{"x"};
inline const Var kY{"y"};

struct Degrees {
  long total = 0;
  long in_x = 0;
  long in_y = 0;
};

inline Degrees bivariate_degrees(const Poly& p, const Var& x = kX, const Var& y = kY) {
  for (const auto& v : p.variables())
    if (!(v == x) && !(v == y))
      throw Error(ErrorCode::NotBivariate, p.to_string() + " mentions " + v.name());
  if (!p.is_polynomial()) throw Error(ErrorCode::NotBivariate, p.to_string() + " is not a polynomial");
  return {p.total_degree().get_num().get_si(), p.degree(x).get_num().get_si(), p.degree(y).get_num().get_si()};
}

/// deg(p) == deg_x(p) + deg_y(p).
inline bool normalization_check(const Poly& p, const Var& x = kX, const Var& y = kY) {
  Degrees d = bivariate_degrees(p, x, y);
  return d.total == d.in_x + d.in_y;
}

/// Level k body = sum_{i>k} P_i u^(i-k) + P_k(0), where P_i are the coefficients
/// of u^i and P_k(0) sets the coefficient variable to zero.
inline AssertionList build_assertions(const Poly& p, const Var& decomposition_var, const Var& coefficient_var) {
  std::vector<Poly> coeffs = coefficient_list(p, decomposition_var);
  AssertionList out{decomposition_var, coefficient_var, {}};
  const std::size_t n = coeffs.size() - 1;
  for (std::size_t k = 0; k <= n; ++k) {
    Poly body = substitute(coeffs[k], coefficient_var, Poly());
    for (std::size_t i = k + 1; i <= n; ++i)
      body += coeffs[i] * Poly::variable(decomposition_var, Exponent(static_cast<long>(i - k)));
    out.assertions.push_back({static_cast<unsigned>(k), body, k == 0 ? Target::Limit : Target::Zero});
  }
  return out;
}

inline AssertionList build_assertions(const Poly& p, const Var& decomposition_var) {
  return build_assertions(p, decomposition_var, decomposition_var == kX ? kY : kX);
}

/// Highest level whose constant term P_k(0) is nonzero.
inline unsigned first_active_level(const AssertionList& list) {
  for (std::size_t k = list.size(); k-- > 0;)
    if (list[k].body.constant_term() != 0) return static_cast<unsigned>(k);
  throw Error(ErrorCode::AllTrivial, "every P_k(0) vanishes");
}

inline AssertionList apply_substitution(const AssertionList& list, const Substitution& sub) {
  AssertionList out{list.decomposition_var, list.coefficient_var, {}};
  for (const auto& a : list.assertions) out.assertions.push_back({a.level, substitute(a.body, sub), a.target});
  return out;
}

inline AssertionList apply_substitution(const AssertionList& list, const Var& var, const Poly& replacement) {
  return apply_substitution(list, Substitution{{var, replacement}});
}

}  // namespace peretz
