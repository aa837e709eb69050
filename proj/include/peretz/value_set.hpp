#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "peretz/error.hpp"
#include "peretz/poly.hpp"
#include "peretz/roots.hpp"

namespace peretz {

/// Interval with optional (absent = infinite) bounds. `exact` is false when an
/// endpoint is a rational enclosure of an irrational critical value.
struct ValueInterval {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
  bool lower_closed = false;
  bool upper_closed = false;
  bool exact = true;

  bool contains(const Rational& v) const {
    if (lower && (v < *lower || (v == *lower && !lower_closed))) return false;
    if (upper && (v > *upper || (v == *upper && !upper_closed))) return false;
    return true;
  }

  friend bool operator==(const ValueInterval&, const ValueInterval&) = default;
};

struct ValueSet {
  std::vector<ValueInterval> intervals;
  std::vector<Rational> points;

  bool contains(const Rational& v) const {
    return std::any_of(intervals.begin(), intervals.end(), [&](const auto& i) { return i.contains(v); }) ||
           std::find(points.begin(), points.end(), v) != points.end();
  }

  bool empty() const { return intervals.empty() && points.empty(); }

  bool exact() const {
    return std::all_of(intervals.begin(), intervals.end(), [](const auto& i) { return i.exact; });
  }

  /// Sorted, pairwise disjoint intervals; points lie outside every interval.
  void normalize();

  std::string to_string() const;

  friend bool operator==(const ValueSet&, const ValueSet&) = default;
};

namespace detail {

/// lower < upper, with absent bounds at -inf/+inf.
inline bool lower_less(const ValueInterval& a, const ValueInterval& b) {
  if (!a.lower || !b.lower) return !a.lower && b.lower;
  if (*a.lower != *b.lower) return *a.lower < *b.lower;
  return a.lower_closed && !b.lower_closed;
}

/// b starts before a ends, or touches it with at least one closed side.
inline bool overlaps_or_touches(const ValueInterval& a, const ValueInterval& b) {
  if (!a.upper || !b.lower) return true;
  if (*b.lower < *a.upper) return true;
  return *b.lower == *a.upper && (a.upper_closed || b.lower_closed);
}

inline void extend_upper(ValueInterval& a, const ValueInterval& b) {
  if (!a.upper) return;
  if (!b.upper) {
    a.upper.reset();
    a.upper_closed = false;
  } else if (*b.upper > *a.upper) {
    a.upper = b.upper;
    a.upper_closed = b.upper_closed;
  } else if (*b.upper == *a.upper) {
    a.upper_closed = a.upper_closed || b.upper_closed;
  }
}

}  // namespace detail

inline void ValueSet::normalize() {
  std::vector<ValueInterval> sorted = intervals;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  // Points on an open endpoint close it.
  for (auto& iv : sorted) {
    if (iv.lower && !iv.lower_closed && std::binary_search(points.begin(), points.end(), *iv.lower)) iv.lower_closed = true;
    if (iv.upper && !iv.upper_closed && std::binary_search(points.begin(), points.end(), *iv.upper)) iv.upper_closed = true;
  }
  std::sort(sorted.begin(), sorted.end(), detail::lower_less);
  std::vector<ValueInterval> merged;
  for (const auto& iv : sorted) {
    if (!merged.empty() && detail::overlaps_or_touches(merged.back(), iv)) {
      detail::extend_upper(merged.back(), iv);
      merged.back().exact = merged.back().exact && iv.exact;
    } else {
      merged.push_back(iv);
    }
  }
  intervals = std::move(merged);
  std::vector<Rational> kept;
  for (const auto& p : points)
    if (std::none_of(intervals.begin(), intervals.end(), [&](const auto& i) { return i.contains(p); })) kept.push_back(p);
  points = std::move(kept);
}

inline std::string ValueSet::to_string() const {
  std::string out;
  auto sep = [&] {
    if (!out.empty()) out += " U ";
  };
  for (const auto& iv : intervals) {
    sep();
    out += iv.lower ? (iv.lower_closed ? "[" : "(") + iv.lower->get_str() : "(-inf";
    out += ", ";
    out += iv.upper ? iv.upper->get_str() + (iv.upper_closed ? "]" : ")") : "+inf)";
  }
  for (const auto& p : points) {
    sep();
    out += "{" + p.get_str() + "}";
  }
  return out.empty() ? "{}" : out;
}

namespace detail {

struct RationalRange {
  Rational lo;
  Rational hi;
};

inline RationalRange range_mul(const RationalRange& a, const RationalRange& b) {
  Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

/// Interval Horner enclosure of f over [lo, hi].
inline RationalRange enclose(const UPoly& f, const Rational& lo, const Rational& hi) {
  RationalRange acc{f.lead(), f.lead()};
  for (long i = f.degree() - 1; i >= 0; --i) {
    acc = range_mul(acc, {lo, hi});
    Rational c = f.coeff(static_cast<std::size_t>(i));
    acc.lo += c;
    acc.hi += c;
  }
  return acc;
}

}  // namespace detail

/// f(R) for a univariate polynomial f in var.
inline ValueSet image_of_reals(const Poly& f, const Var& var) {
  ValueSet out;
  UPoly u = UPoly::from_poly(f, var);
  if (u.degree() <= 0) {
    out.points.push_back(u.coeff(0));
    return out;
  }
  if (u.degree() % 2 == 1) {
    out.intervals.push_back({std::nullopt, std::nullopt, false, false, true});
    return out;
  }
  // Even degree: the extreme critical value bounds the image on one side.
  const bool up = u.lead() > 0;
  RootReport crit = real_roots(derivative(f, var), var);
  std::optional<Rational> best;
  bool exact = true;
  for (const auto& r : crit.rational_roots) {
    Rational v = u(r.value);
    if (!best || (up ? v < *best : v > *best)) best = v;
  }
  std::optional<Rational> enclosed;
  for (const auto& iv : crit.irrational_root_intervals) {
    auto range = detail::enclose(u, iv.lower, iv.upper);
    Rational v = up ? range.lo : range.hi;
    if (!enclosed || (up ? v < *enclosed : v > *enclosed)) enclosed = v;
  }
  if (enclosed && (!best || (up ? *enclosed < *best : *enclosed > *best))) {
    best = enclosed;
    exact = false;
  }
  if (up) {
    out.intervals.push_back({best, std::nullopt, true, false, exact});
  } else {
    out.intervals.push_back({std::nullopt, best, false, true, exact});
  }
  return out;
}

/// Union of the images of R under each univariate value polynomial.
inline ValueSet value_set(const std::vector<Poly>& value_polys) {
  ValueSet out;
  for (const auto& f : value_polys) {
    auto vars = f.variables();
    if (vars.size() > 1) throw Error(ErrorCode::NotUnivariate, f.to_string() + " has several variables");
    Var v = vars.empty() ? Var("s") : *vars.begin();
    ValueSet part = image_of_reals(f, v);
    out.intervals.insert(out.intervals.end(), part.intervals.begin(), part.intervals.end());
    out.points.insert(out.points.end(), part.points.begin(), part.points.end());
  }
  out.normalize();
  return out;
}

}  // namespace peretz
