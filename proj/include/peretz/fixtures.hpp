#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peretz/assertions.hpp"
#include "peretz/branch.hpp"
#include "peretz/error.hpp"
#include "peretz/parse.hpp"
#include "peretz/poly.hpp"

namespace peretz {

enum class FixtureKind { Poly, PolyList, Assertions, Identity };

/// Built-in constant. `polys` holds the single polynomial, the list, the
/// assertion bodies by level, or the identity rhs, depending on `kind`.
struct Fixture {
  std::string name;
  FixtureKind kind = FixtureKind::Poly;
  std::string description;
  std::vector<Poly> polys;
  std::optional<AssertionList> assertions;
  std::optional<AsymptoticIdentity> identity;

  const Poly& poly() const { return polys.at(0); }
};

namespace detail {

struct FixtureSource {
  std::string_view name;
  FixtureKind kind;
  std::string_view description;
  std::vector<std::string_view> texts;
};

// Exact texts, expanded independently of this library.
inline const std::vector<FixtureSource>& fixture_sources() {
  static const std::vector<FixtureSource> sources = {
      {"pinchuk-p", FixtureKind::Poly, "Pinchuk's P = sum P_i(y) x^i, 12 terms, bidegree (6, 4)",
       {
          "y + x^2 - x + x^6*y^4 - 7*x^3*y^2 - 4*x^3*y - 4*x^5*y^3 - 3*x*y + 3*x^2*y^2 + 3*x^4*y^3 + 5*x^2*y + 6*x^4*y^2"
       }},
      {"coefficients-x", FixtureKind::PolyList, "P_0..P_6, coefficients of x^i in pinchuk-p",
       {
          "y",
          "-1 - 3*y",
          "1 + 3*y^2 + 5*y",
          "-7*y^2 - 4*y",
          "3*y^3 + 6*y^2",
          "-4*y^3",
          "y^4"
       }},
      {"coefficients-y", FixtureKind::PolyList, "coefficients of y^j in pinchuk-p, j = 0..4",
       {
          "x^2 - x",
          "1 - 4*x^3 - 3*x + 5*x^2",
          "-7*x^3 + 3*x^2 + 6*x^4",
          "-4*x^5 + 3*x^4",
          "x^6"
       }},
      {"assertions-x", FixtureKind::Assertions, "assertions of pinchuk-p decomposed in x, levels 0..6",
       {
          "x^2 - x + x^6*y^4 - 7*x^3*y^2 - 4*x^3*y - 4*x^5*y^3 - 3*x*y + 3*x^2*y^2 + 3*x^4*y^3 + 5*x^2*y + 6*x^4*y^2",
          "-1 + x + x^5*y^4 - 7*x^2*y^2 - 4*x^2*y - 4*x^4*y^3 + 3*x*y^2 + 3*x^3*y^3 + 5*x*y + 6*x^3*y^2",
          "1 + x^4*y^4 - 7*x*y^2 - 4*x*y - 4*x^3*y^3 + 3*x^2*y^3 + 6*x^2*y^2",
          "x^3*y^4 - 4*x^2*y^3 + 3*x*y^3 + 6*x*y^2",
          "x^2*y^4 - 4*x*y^3",
          "x*y^4",
          "0"
       }},
      {"assertions-y", FixtureKind::Assertions, "assertions of pinchuk-p decomposed in y, levels 0..4",
       {
          "y + x^6*y^4 - 7*x^3*y^2 - 4*x^3*y - 4*x^5*y^3 - 3*x*y + 3*x^2*y^2 + 3*x^4*y^3 + 5*x^2*y + 6*x^4*y^2",
          "1 + x^6*y^3 - 7*x^3*y - 4*x^5*y^2 + 3*x^2*y + 3*x^4*y^2 + 6*x^4*y",
          "x^6*y^2 - 4*x^5*y + 3*x^4*y",
          "x^6*y",
          "0"
       }},
      {"subst-y-finite", FixtureKind::Assertions, "assertions-x after y -> x^-1 + z, levels 0..6",
       {
          "x^6*z^4 + 2*x^3*z^2 + 3*x*z + 3*x^2*z^2 + 3*x^4*z^3",
          "3*x^(-1) + 6*z + x^5*z^4 + 2*x^2*z^2 + 3*x*z^2 + 3*x^3*z^3",
          "-5*z - 4*x^(-1) + x^4*z^4 + 2*x*z^2 + 3*x^2*z^3",
          "3*x^(-1) + 3*x^(-2) + 4*z + 9*z^2 + x^3*z^4 + 3*x*z^3 + 9*x^(-1)*z",
          "-6*z^2 - 3*x^(-2) + x^2*z^4 - 8*x^(-1)*z",
          "x^(-3) + 4*z^3 + x*z^4 + 4*x^(-2)*z + 6*x^(-1)*z^2",
          "0"
       }},
      {"subst-x-finite", FixtureKind::Assertions, "assertions-y after x -> -y^(-1/2) + z with y > 0, levels 0..3",
       {
          "11 - 12*z + 4*y^(-1/2) + 8*y + 14*y^(1/2) + y^4*z^6 - 47*y^2*z^3 - 44*y*z - 34*y^(1/2)*z - 32*y^(5/2)*z^3 - 24*y^(3/2)*z - 24*y^(3/2)*z^3 - 6*y^(7/2)*z^5 - 4*y*z^3 - 4*y^3*z^5 + 6*y^2*z^4 + 12*y^(1/2)*z^2 + 18*y^3*z^4 + 20*y^(5/2)*z^4 + 36*y^2*z^2 + 41*y*z^2 + 61*y^(3/2)*z^2",
          "8 - 41*z + 6*y^(-1) + 11*y^(-1/2) + 36*z^2 + y^3*z^6 - 47*y*z^3 - 32*y^(3/2)*z^3 - 24*y^(1/2)*z - 24*y^(-1/2)*z - 24*y^(1/2)*z^3 - 6*y^(5/2)*z^5 - 4*y^2*z^5 + 6*y*z^4 + 18*y^2*z^4 + 20*y^(3/2)*z^4 + 36*y*z^2 + 61*y^(1/2)*z^2",
          "-40*z^3 + 4*y^(-1) + 4*y^(-3/2) + 33*z^2 + y^2*z^6 - 32*y^(1/2)*z^3 - 20*y^(-1)*z - 18*y^(-1/2)*z - 6*y^(3/2)*z^5 - 4*y*z^5 + 18*y*z^4 + 20*y^(1/2)*z^4 + 40*y^(-1/2)*z^2",
          "y^(-2) + 15*z^4 + y*z^6 - 20*y^(-1/2)*z^3 - 6*y^(-3/2)*z - 6*y^(1/2)*z^5 + 15*y^(-1)*z^2"
       }},
      {"identity-plus", FixtureKind::Identity, "P(1/x^2, y*x^3 + x^2)",
       {
          "x^2 + y^4 + 2*y^2 + x^3*y + 3*x*y + 3*x*y^3 + 3*x^2*y^2"
       }},
      {"identity-minus", FixtureKind::Identity, "P(-1/x^2, y*x^3 - x^2)",
       {
          "y^4 - x^2 - 2*y^2 + x^3*y - 3*x*y + 3*x*y^3 + 3*x^2*y^2"
       }},
      {"identity-extended", FixtureKind::Identity, "P(1/x^2, y*x^4 + a*x^3 + x^2)",
       {
          "a^4 + x^2 + 2*a^2 + a*x^3 + x^4*y + x^4*y^4 + 2*x^2*y^2 + 3*a*x + 3*a^3*x + 3*x^2*y + 3*a^2*x^2 + 3*x^4*y^2 + 3*x^4*y^3 + 4*a*x*y + 4*a*x^3*y^3 + 4*a^3*x*y + 6*a*x^3*y + 6*a^2*x^2*y^2 + 9*a*x^3*y^2 + 9*a^2*x^2*y"
       }},
      {"residual-y-finite", FixtureKind::Poly, "P(x, x^-1 + s*x^(-3/2) + z) - P(x, x^-1 + s*x^(-3/2))",
       {
          "z + x^6*z^4 + 2*x^3*z^2 + 3*x*z + 3*x^2*z^2 + 3*x^4*z^3 + 4*s*x^(3/2)*z + 4*s*x^(9/2)*z^3 + 4*s^3*x^(3/2)*z + 6*s*x^(1/2)*z + 6*s^2*x^3*z^2 + 9*s*x^(5/2)*z^2 + 9*s^2*x*z"
       }},
      {"base-expansion-plus", FixtureKind::Poly, "P(x, x^-1 + s*x^(-3/2)) for x -> +inf",
       {
          "s^4 + x^(-1) + 2*s^2 + s*x^(-3/2) + 3*s*x^(-1/2) + 3*s^2*x^(-1) + 3*s^3*x^(-1/2)"
       }},
      {"base-expansion-minus", FixtureKind::Poly, "P(-x, -x^-1 + s*x^(-3/2)) with x = |x| -> +inf",
       {
          "s^4 - x^(-1) - 2*s^2 + s*x^(-3/2) - 3*s*x^(-1/2) + 3*s^2*x^(-1) + 3*s^3*x^(-1/2)"
       }},
  };
  return sources;
}

inline AsymptoticIdentity fixture_identity(std::string_view name) {
  AsymptoticIdentity id;
  id.k = 2;
  id.N = 3;
  if (name == "identity-plus") {
    id.lower_coeffs = {Poly(), Poly(), Poly(1)};
  } else if (name == "identity-minus") {
    id.sign = -1;
    id.lower_coeffs = {Poly(), Poly(), Poly(-1)};
  } else {
    id.N = 4;
    id.lower_coeffs = {Poly(), Poly(), Poly(1), Poly::variable("a")};
  }
  return id;
}

}  // namespace detail

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& s : detail::fixture_sources()) out.emplace_back(s.name);
  return out;
}

inline Fixture load_builtin(std::string_view name) {
  const auto& sources = detail::fixture_sources();
  auto it = std::find_if(sources.begin(), sources.end(), [&](const auto& s) { return s.name == name; });
  if (it == sources.end()) {
    std::string keys;
    for (const auto& s : sources) keys += (keys.empty() ? "" : ", ") + std::string(s.name);
    throw Error(ErrorCode::UnknownFixture, "unknown fixture '" + std::string(name) + "'; available: " + keys);
  }
  Fixture f{std::string(it->name), it->kind, std::string(it->description), {}, std::nullopt, std::nullopt};
  for (auto text : it->texts) f.polys.push_back(parse(text));
  if (f.kind == FixtureKind::Assertions) {
    bool in_x = name == "assertions-x" || name == "subst-y-finite";
    AssertionList list{in_x ? kX : kY, in_x ? kY : kX, {}};
    for (std::size_t k = 0; k < f.polys.size(); ++k)
      list.assertions.push_back({static_cast<unsigned>(k), f.polys[k], k == 0 ? Target::Limit : Target::Zero});
    f.assertions = std::move(list);
  } else if (f.kind == FixtureKind::Identity) {
    AsymptoticIdentity id = detail::fixture_identity(name);
    id.rhs = f.polys.at(0);
    f.identity = std::move(id);
  }
  return f;
}

}  // namespace peretz
