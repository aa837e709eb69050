#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peretz/assertions.hpp"
#include "peretz/error.hpp"
#include "peretz/poly.hpp"

namespace peretz {

inline const Var kRootSymbol{"r"};

/// bounded = o(growth^(-alpha)) as growth -> +inf. alpha = 0 encodes bounded -> 0.
struct OBound {
  Var bounded;
  Var growth;
  Exponent alpha;

  std::string to_string() const {
    Exponent e = -alpha;
    std::string pow = is_integer(e) ? e.get_str() : "(" + e.get_str() + ")";
    return bounded.name() + " = o(" + growth.name() + "^" + pow + ")";
  }

  friend bool operator==(const OBound&, const OBound&) = default;
};

struct OSimplified {
  Poly kept;
  Poly unbounded;  // kept terms free of the bounded variable with a positive growth exponent
};

/// A term with bounded exponent m >= 1 is dropped iff e <= m*alpha; a term with
/// m = 0 is dropped iff e < 0. Other symbols count as bounded constants.
inline OSimplified o_simplify_detailed(const Poly& body, const OBound& bound) {
  OSimplified out;
  for (const auto& [k, c] : body.terms()) {
    Exponent e = k.exponent(bound.growth);
    Exponent m = k.exponent(bound.bounded);
    bool drop = m > 0 ? e <= m * bound.alpha : (m == 0 && e < 0);
    if (drop) continue;
    out.kept.add_term(k, c);
    if (m == 0 && e > 0) out.unbounded.add_term(k, c);
  }
  return out;
}

inline Poly o_simplify(const Poly& body, const OBound& bound) { return o_simplify_detailed(body, bound).kept; }

/// Extra facts about the same pair of variables tighten alpha to the strongest one.
inline Poly o_simplify(const Poly& body, const OBound& bound, std::span<const OBound> known) {
  OBound b = bound;
  for (const auto& k : known)
    if (k.bounded == b.bounded && k.growth == b.growth && k.alpha > b.alpha) b.alpha = k.alpha;
  return o_simplify(body, b);
}

/// Term growth^e * bounded^m with rational coefficient.
struct NewtonPoint {
  Exponent e;
  long m = 0;
  Rational coeff;
};

/// Terms that balance when bounded ~ c * growth^(-slope): all share growth exponent `height`.
struct NewtonEdge {
  Exponent slope;
  Exponent height;
  std::vector<NewtonPoint> points;
  bool through_limit = false;  // level-0 edge holding the (0,0) point that carries -C

  /// sum coeff * c^m over the edge, excluding -C.
  Poly edge_poly(const Var& c) const {
    Poly out;
    for (const auto& p : points) out += Poly::monomial(p.coeff, {{c, Exponent(p.m)}});
    return out;
  }
};

struct NewtonAnalysis {
  std::vector<NewtonPoint> bounded_points;  // m >= 1
  std::vector<NewtonPoint> free_points;     // m == 0
  std::vector<NewtonEdge> edges;            // ascending slope, every slope > alpha
  /// max e/m over bounded points: all of them vanish iff bounded = o(growth^(-vanish_slope)).
  std::optional<Exponent> vanish_slope;
};

inline NewtonAnalysis newton_analysis(const Poly& residual, const OBound& bound, Target target) {
  NewtonAnalysis out;
  for (const auto& [k, c] : residual.terms()) {
    for (const auto& [v, x] : k.exps)
      if (!(v == bound.growth) && !(v == bound.bounded))
        throw Error(ErrorCode::Unclassifiable, "residual " + residual.to_string() + " has symbolic coefficient " + v.name());
    Exponent m = k.exponent(bound.bounded);
    if (!is_integer(m) || m < 0)
      throw Error(ErrorCode::Unclassifiable, "residual " + residual.to_string() + " has exponent " + m.get_str() + " of " +
                                                 bound.bounded.name());
    NewtonPoint p{k.exponent(bound.growth), m.get_num().get_si(), c};
    (p.m == 0 ? out.free_points : out.bounded_points).push_back(p);
  }
  for (const auto& p : out.bounded_points) {
    Exponent s = p.e / p.m;
    if (!out.vanish_slope || s > *out.vanish_slope) out.vanish_slope = s;
  }

  std::vector<NewtonPoint> all = out.free_points;
  all.insert(all.end(), out.bounded_points.begin(), out.bounded_points.end());
  bool virtual_origin = false;
  if (target == Target::Limit &&
      std::none_of(all.begin(), all.end(), [](const auto& p) { return p.m == 0 && p.e == 0; })) {
    all.push_back({Exponent(0), 0, Rational(0)});
    virtual_origin = true;
  }
  std::vector<Exponent> slopes;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].m == all[j].m) continue;
      Exponent s = (all[i].e - all[j].e) / Exponent(all[i].m - all[j].m);
      if (s > bound.alpha && std::find(slopes.begin(), slopes.end(), s) == slopes.end()) slopes.push_back(s);
    }
  std::sort(slopes.begin(), slopes.end());
  for (const auto& s : slopes) {
    std::optional<Exponent> g;
    for (const auto& p : all) {
      Exponent h = p.e - s * p.m;
      if (!g || h > *g) g = h;
    }
    NewtonEdge edge{s, *g, {}, false};
    for (const auto& p : all) {
      if (p.e - s * p.m != *g) continue;
      if (p.m == 0 && p.e == 0 && target == Target::Limit) edge.through_limit = true;
      if (!(virtual_origin && p.m == 0 && p.e == 0)) edge.points.push_back(p);
    }
    std::size_t attaining = edge.points.size() + (virtual_origin && edge.through_limit ? 1 : 0);
    if (attaining >= 2 && *g >= 0) out.edges.push_back(std::move(edge));
  }
  return out;
}

enum class BalanceKind { Trivial, Balance, Bound, Contradiction, Unbounded };

inline std::string to_string(BalanceKind k) {
  switch (k) {
    case BalanceKind::Trivial: return "trivial";
    case BalanceKind::Balance: return "balance";
    case BalanceKind::Bound: return "bound";
    case BalanceKind::Contradiction: return "contradiction";
    case BalanceKind::Unbounded: return "unbounded";
  }
  return "unknown";
}

/// w = growth^growth_exp * vanishing^vanishing_exp.
struct PowerProduct {
  Var growth;
  Exponent growth_exp;
  Var vanishing;
  Exponent vanishing_exp;

  Poly monomial() const { return Poly::monomial(Rational(1), {{growth, growth_exp}, {vanishing, vanishing_exp}}); }
};

struct BalanceResult {
  BalanceKind kind = BalanceKind::Trivial;
  std::optional<PowerProduct> power_product;
  std::optional<Poly> limit_poly;  // in kRootSymbol, possibly with the limit symbol
  std::optional<Rational> witness;
  std::optional<OBound> bound;
};

namespace detail {

/// Rewrites an edge in w = growth^p * bounded^q with slope = p/q.
inline BalanceResult edge_to_balance(const NewtonEdge& edge, const OBound& b, Target target) {
  BalanceResult r;
  r.kind = BalanceKind::Balance;
  mpz_class p = edge.slope.get_num();
  mpz_class q = edge.slope.get_den();
  r.power_product = PowerProduct{b.growth, Exponent(p), b.bounded, Exponent(q)};
  Poly lim;
  for (const auto& pt : edge.points) {
    Exponent power = Exponent(pt.m) / Exponent(q);
    lim += Poly::monomial(pt.coeff, {{kRootSymbol, power}});
  }
  if (target == Target::Limit && edge.through_limit) lim -= Poly::variable(kLimitSymbol);
  r.limit_poly = lim;
  return r;
}

inline const NewtonEdge* limit_edge(const NewtonAnalysis& a) {
  for (const auto& e : a.edges)
    if (e.through_limit && e.height == 0) return &e;
  return nullptr;
}

inline const NewtonEdge* constant_edge(const NewtonAnalysis& a) {
  for (const auto& e : a.edges)
    if (e.height == 0 &&
        std::any_of(e.points.begin(), e.points.end(), [](const auto& p) { return p.m == 0 && p.e == 0; }))
      return &e;
  return nullptr;
}

inline Var other_variable(const Poly& body, const Var& vanishing) {
  std::optional<Var> growth;
  for (const auto& v : body.variables()) {
    if (v == vanishing) continue;
    if (growth && !(*growth == v)) throw Error(ErrorCode::NotBivariate, body.to_string() + " has more than two variables");
    growth = v;
  }
  return growth.value_or(vanishing == kX ? kY : kX);
}

}  // namespace detail

/// Edge of the Newton polygon through the constant P_k(0) of an assertion body,
/// with the growth variable -> +inf and `vanishing` -> 0.
inline BalanceResult dominant_balance(const Assertion& assertion, const Var& growth, const Var& vanishing) {
  OBound b{vanishing, growth, Exponent(0)};
  OSimplified s = o_simplify_detailed(assertion.body, b);
  if (!s.unbounded.is_zero())
    throw Error(ErrorCode::NoBalance, "unbounded terms " + s.unbounded.to_string() + " without " + vanishing.name());
  NewtonAnalysis a = newton_analysis(s.kept, b, assertion.target);
  if (a.bounded_points.empty()) {
    Rational c = s.kept.constant_term();
    if (assertion.target == Target::Zero && c != 0) {
      BalanceResult r;
      r.kind = BalanceKind::Contradiction;
      r.witness = c;
      return r;
    }
    throw Error(ErrorCode::NoBalance, "no " + vanishing.name() + "-dependent terms in " + assertion.body.to_string());
  }
  const NewtonEdge* edge = assertion.target == Target::Limit ? detail::limit_edge(a) : detail::constant_edge(a);
  if (edge == nullptr) throw Error(ErrorCode::NoBalance, "no edge through the constant term of " + assertion.body.to_string());
  return detail::edge_to_balance(*edge, b, assertion.target);
}

inline BalanceResult dominant_balance(const Assertion& assertion, const Var& vanishing) {
  return dominant_balance(assertion, detail::other_variable(assertion.body, vanishing), vanishing);
}

/// Classifies an o-simplified body: trivial, constant contradiction, bound
/// tightening from bounded-only residuals, or a balance in a power product.
inline BalanceResult classify_residual(const Poly& simplified, Target target, const OBound& bound) {
  BalanceResult r;
  if (simplified.is_zero()) {
    if (target == Target::Limit) {
      r.kind = BalanceKind::Balance;
      r.limit_poly = -Poly::variable(kLimitSymbol);
    }
    return r;
  }
  NewtonAnalysis a = newton_analysis(simplified, bound, target);
  bool unbounded = std::any_of(a.free_points.begin(), a.free_points.end(), [](const auto& p) { return p.e > 0; });
  if (a.bounded_points.empty()) {
    if (unbounded) {
      r.kind = BalanceKind::Unbounded;
      return r;
    }
    Rational c = simplified.constant_term();
    if (target == Target::Zero) {
      r.kind = BalanceKind::Contradiction;
      r.witness = c;
    } else {
      r.kind = BalanceKind::Balance;
      r.limit_poly = Poly(c) - Poly::variable(kLimitSymbol);
    }
    return r;
  }
  if (target == Target::Zero && a.free_points.empty()) {
    r.kind = BalanceKind::Bound;
    r.bound = OBound{bound.bounded, bound.growth, std::max(bound.alpha, *a.vanish_slope)};
    return r;
  }
  const NewtonEdge* edge = nullptr;
  if (!unbounded) edge = target == Target::Limit ? detail::limit_edge(a) : detail::constant_edge(a);
  if (edge == nullptr && !a.edges.empty()) edge = &a.edges.front();
  if (edge == nullptr) {
    if (unbounded) {
      r.kind = BalanceKind::Unbounded;
      return r;
    }
    throw Error(ErrorCode::Unclassifiable, simplified.to_string() + " -> " + to_string(target));
  }
  return detail::edge_to_balance(*edge, bound, target);
}

/// Solves a limit polynomial L(r, C) = 0 for C and reparametrizes the power
/// product w = growth^a * z^b through growth = sign*t, z = s*t^(-a/b), i.e. r = sign^a * s^b.
inline Poly second_stage_value_map(const Poly& limit_poly, const PowerProduct& w, int sign,
                                   const Var& param = Var("s"), const Var& root = kRootSymbol) {
  auto parts = decompose(limit_poly, kLimitSymbol);
  Poly linear, rest;
  for (const auto& [e, c] : parts) {
    if (e == 1) {
      linear = c;
    } else if (e == 0) {
      rest = c;
    } else {
      throw Error(ErrorCode::NotLinearInC, limit_poly.to_string());
    }
  }
  if (!linear.is_constant() || linear.is_zero()) throw Error(ErrorCode::NotLinearInC, limit_poly.to_string());
  Rational b = linear.constant_term();
  if (!is_integer(w.growth_exp) || !is_integer(w.vanishing_exp))
    throw Error(ErrorCode::InvalidArgument, "power product exponents must be integers");
  long a = w.growth_exp.get_num().get_si();
  Rational sign_factor = (sign < 0 && a % 2 != 0) ? Rational(-1) : Rational(1);
  Poly r_of_s = Poly::monomial(sign_factor, {{param, w.vanishing_exp}});
  Poly value = substitute(rest, root, r_of_s);
  return Poly(Rational(-1) / b) * value;
}

}  // namespace peretz
