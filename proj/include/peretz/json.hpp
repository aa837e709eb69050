#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "peretz/assertions.hpp"
#include "peretz/balance.hpp"
#include "peretz/branch.hpp"
#include "peretz/pipeline.hpp"
#include "peretz/roots.hpp"
#include "peretz/value_set.hpp"

// Rationals and polynomials serialize as canonical strings; infinite bounds as "-inf"/"+inf".
namespace peretz::json {

using Json = nlohmann::ordered_json;

inline Json rational(const Rational& q) { return q.get_str(); }
inline Json poly(const Poly& p) { return p.to_string(); }

template <class T, class F>
Json array(const std::vector<T>& items, F&& f) {
  Json out = Json::array();
  for (const auto& item : items) out.push_back(f(item));
  return out;
}

inline Json decomposition(const std::vector<std::pair<Exponent, Poly>>& parts) {
  return array(parts, [](const auto& part) { return Json{{"exponent", rational(part.first)}, {"coefficient", poly(part.second)}}; });
}

inline Json assertion(const Assertion& a) {
  return Json{{"level", a.level}, {"body", poly(a.body)}, {"target", to_string(a.target)}};
}

inline Json assertions(const AssertionList& list) { return array(list.assertions, assertion); }

inline Json bound(const OBound& b) {
  return Json{{"var", b.bounded.name()}, {"growth", b.growth.name()}, {"alpha", rational(b.alpha)}, {"text", b.to_string()}};
}

inline Json root_report(const RootReport& r) {
  return Json{{"rational_roots", array(r.rational_roots,
                                       [](const auto& x) { return Json{{"value", rational(x.value)}, {"multiplicity", x.multiplicity}}; })},
              {"irrational_root_intervals",
               array(r.irrational_root_intervals,
                     [](const auto& iv) { return Json{{"lower", rational(iv.lower)}, {"upper", rational(iv.upper)}, {"count", iv.count}}; })},
              {"squarefree_part", poly(r.squarefree_part)}};
}

inline Json balance(const BalanceResult& b) {
  Json out{{"kind", to_string(b.kind)}};
  if (b.power_product) {
    const auto& w = *b.power_product;
    out["power_product"] = Json{{w.growth.name(), rational(w.growth_exp)}, {w.vanishing.name(), rational(w.vanishing_exp)}};
    out["w"] = poly(w.monomial());
  } else {
    out["power_product"] = nullptr;
  }
  out["limit_poly"] = b.limit_poly ? poly(*b.limit_poly) : Json(nullptr);
  out["witness"] = b.witness ? rational(*b.witness) : Json(nullptr);
  out["bound"] = b.bound ? bound(*b.bound) : Json(nullptr);
  return out;
}

inline Json expansion(const std::vector<ExpansionTerm>& terms) {
  return array(terms, [](const auto& t) { return Json{{"coeff", poly(t.coeff)}, {"exponent", rational(t.exponent)}}; });
}

inline Json branch(const BranchState& b) {
  Json out{{"direction", b.direction},
           {"expansion", expansion(b.expansion)},
           {"bound", bound(b.bound)},
           {"stage", to_string(b.stage)},
           {"depth", b.depth}};
  out["value"] = b.value ? poly(*b.value) : Json(nullptr);
  if (b.stalled_interval) {
    out["interval"] = Json{{"lower", rational(b.stalled_interval->lower)}, {"upper", rational(b.stalled_interval->upper)}};
  } else {
    out["interval"] = nullptr;
  }
  out["note"] = b.note;
  return out;
}

inline Json identity(const AsymptoticIdentity& id) {
  Json sub{{id.growth.name(), poly(id.growth_replacement())}, {id.finite.name(), poly(id.finite_replacement())}};
  return Json{{"sign", id.sign},
              {"k", id.k},
              {"N", id.N},
              {"substitution", sub},
              {"rhs", id.rhs ? poly(*id.rhs) : Json(nullptr)},
              {"verified", id.verified}};
}

inline Json values(const ValueSet& v) {
  return Json{{"intervals", array(v.intervals,
                                  [](const auto& iv) {
                                    return Json{{"lower", iv.lower ? rational(*iv.lower) : Json("-inf")},
                                                {"upper", iv.upper ? rational(*iv.upper) : Json("+inf")},
                                                {"lower_closed", iv.lower_closed},
                                                {"upper_closed", iv.upper_closed},
                                                {"exact", iv.exact}};
                                  })},
              {"points", array(v.points, rational)}};
}

inline Json rejection(const Rejection& r) {
  return Json{{"direction", r.direction},
              {"level", r.level},
              {"witness", r.witness ? rational(*r.witness) : Json(nullptr)},
              {"reason", r.reason},
              {"expansion", expansion(r.expansion)}};
}

inline Json report(const PipelineReport& r) {
  return Json{{"input", poly(r.input)},
              {"mode", to_string(r.mode)},
              {"normalization", r.normalization},
              {"failure", r.failure ? Json(std::string(to_string(*r.failure))) : Json(nullptr)},
              {"assertions", assertions(r.assertions)},
              {"branches", array(r.branches, branch)},
              {"identities", array(r.identities, identity)},
              {"values", values(r.values)},
              {"rejections", array(r.rejections, rejection)}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace peretz::json
