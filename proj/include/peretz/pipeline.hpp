#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "peretz/assertions.hpp"
#include "peretz/balance.hpp"
#include "peretz/branch.hpp"
#include "peretz/roots.hpp"
#include "peretz/value_set.hpp"

namespace peretz {

/// A direction abandoned at `level`; witness is set when the residual is a nonzero constant.
struct Rejection {
  int direction = 1;
  unsigned level = 0;
  std::optional<Rational> witness;
  std::string reason;
  std::vector<ExpansionTerm> expansion;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct PipelineOptions {
  unsigned max_stages = 8;
};

struct PipelineReport {
  Poly input;
  Mode mode = Mode::YFinite;
  bool normalization = false;
  std::optional<ErrorCode> failure;
  AssertionList assertions;
  std::vector<BranchState> branches;
  std::vector<AsymptoticIdentity> identities;
  ValueSet values;
  std::vector<Rejection> rejections;
};

namespace detail {

inline const Var kEdgeSymbol{"c"};

/// Pending refinement in shifted coordinates: finite - limit = sum terms + z, z = o(t^-alpha).
struct WorkItem {
  int direction = 1;
  std::vector<ExpansionTerm> terms;
  Exponent alpha;
  unsigned depth = 0;
};

class PipelineRun {
 public:
  PipelineRun(const Poly& p, Mode mode, const PipelineOptions& opts) : p_(p), mode_(mode), opts_(opts) {}

  void run(PipelineReport& report) {
    const Var g = growth_var(mode_);
    const Var f = finite_var(mode_);
    std::vector<Poly> coeffs = coefficient_list(p_, g);
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) {
      // p does not involve the growth variable: every finite value of f is a limit.
      for (int sigma : {1, -1}) {
        BranchState b = make_branch(sigma, Rational(0), {{Poly::variable(kParam), Exponent(0)}}, Exponent(0), 0);
        b.value = substitute(coeffs[0], f, Poly::variable(kParam));
        b.stage = Stage::Valued;
        branches_.push_back(b);
      }
    } else if (coeffs[n].is_constant()) {
      for (int sigma : {1, -1}) rejections_.push_back({sigma, static_cast<unsigned>(n), std::nullopt, "leading_coefficient_constant", {}});
    } else {
      RootReport limits = real_roots(coeffs[n], f);
      if (limits.distinct_real_roots() == 0)
        for (int sigma : {1, -1}) rejections_.push_back({sigma, static_cast<unsigned>(n), std::nullopt, "no_real_limit", {}});
      for (int sigma : {1, -1}) {
        for (const auto& r : limits.rational_roots) refine_limit(sigma, r.value);
        for (const auto& iv : limits.irrational_root_intervals) {
          BranchState b = make_branch(sigma, Rational(0), {}, Exponent(0), 0);
          b.stage = Stage::Stalled;
          b.stalled_interval = iv;
          b.note = "irrational_limit";
          branches_.push_back(b);
        }
      }
    }
    finish(report);
  }

 private:
  Poly p_;
  Mode mode_;
  PipelineOptions opts_;
  Rational limit_;
  std::vector<BranchState> branches_;
  std::vector<Rejection> rejections_;

  BranchState make_branch(int sigma, const Rational& limit, std::vector<ExpansionTerm> terms, const Exponent& alpha,
                          unsigned depth) const {
    BranchState b;
    b.mode = mode_;
    b.direction = sigma;
    if (limit != 0) b.expansion.push_back({Poly(limit), Exponent(0)});
    for (auto& t : terms) b.expansion.push_back(std::move(t));
    b.bound = OBound{kErrorVar, growth_var(mode_), alpha};
    b.depth = depth;
    return b;
  }

  std::vector<ExpansionTerm> full_expansion(const std::vector<ExpansionTerm>& terms) const {
    std::vector<ExpansionTerm> out;
    if (limit_ != 0) out.push_back({Poly(limit_), Exponent(0)});
    out.insert(out.end(), terms.begin(), terms.end());
    return out;
  }

  void reject(const WorkItem& item, unsigned level, std::optional<Rational> witness, std::string reason) {
    rejections_.push_back({item.direction, level, std::move(witness), std::move(reason), full_expansion(item.terms)});
  }

  /// Spawns one child per distinct nonzero real root of each edge polynomial.
  bool spawn(const WorkItem& item, const std::vector<NewtonEdge>& edges, std::deque<WorkItem>& queue) {
    bool any = false;
    for (const auto& edge : edges) {
      Poly e = edge.edge_poly(kEdgeSymbol);
      if (e.is_constant()) continue;
      RootReport roots = real_roots(e, kEdgeSymbol);
      for (const auto& r : roots.rational_roots) {
        if (r.value == 0) continue;
        any = true;
        WorkItem child{item.direction, item.terms, edge.slope, item.depth + 1};
        child.terms.push_back({Poly(r.value), -edge.slope});
        if (child.depth > opts_.max_stages) {
          BranchState b = make_branch(item.direction, limit_, child.terms, child.alpha, child.depth);
          b.stage = Stage::Stalled;
          b.note = "StalledDeep";
          branches_.push_back(b);
        } else {
          queue.push_back(std::move(child));
        }
      }
      for (const auto& iv : roots.irrational_root_intervals) {
        any = true;
        BranchState b = make_branch(item.direction, limit_, item.terms, edge.slope, item.depth + 1);
        b.stage = Stage::Stalled;
        b.stalled_interval = iv;
        b.note = "irrational_root";
        branches_.push_back(b);
      }
    }
    return any;
  }

  void refine_limit(int sigma, const Rational& limit) {
    const Var g = growth_var(mode_);
    const Var f = finite_var(mode_);
    limit_ = limit;
    Poly q = substitute(p_, {{g, Rational(sigma) * Poly::variable(g)}, {f, Poly(limit) + Poly::variable(f)}});
    AssertionList list = build_assertions(q, g, f);
    std::deque<WorkItem> queue{WorkItem{sigma, {}, Exponent(0), 0}};
    while (!queue.empty()) {
      WorkItem item = std::move(queue.front());
      queue.pop_front();
      process(item, list, queue);
    }
  }

  void process(const WorkItem& item, const AssertionList& list, std::deque<WorkItem>& queue) {
    const Var g = growth_var(mode_);
    const Var f = finite_var(mode_);
    Poly expr = Poly::variable(kErrorVar);
    for (const auto& t : item.terms) expr += t.coeff * Poly::variable(g, t.exponent);
    AssertionList bodies = apply_substitution(list, f, expr);
    OBound bound{kErrorVar, g, item.alpha};
    for (std::size_t k = bodies.size(); k-- > 1;) {
      Poly r = o_simplify(bodies[k].body, bound);
      if (r.is_zero()) continue;
      NewtonAnalysis a = newton_analysis(r, bound, Target::Zero);
      bool spawned = spawn(item, a.edges, queue);
      if (a.free_points.empty()) {
        bound.alpha = std::max(bound.alpha, *a.vanish_slope);
        continue;
      }
      if (!spawned) {
        bool unbounded = std::any_of(a.free_points.begin(), a.free_points.end(), [](const auto& p) { return p.e > 0; });
        if (r.is_constant()) {
          reject(item, static_cast<unsigned>(k), r.constant_term(), "constant");
        } else {
          reject(item, static_cast<unsigned>(k), std::nullopt, unbounded ? "unbounded" : "no_real_root");
        }
      }
      return;
    }
    Poly r = o_simplify(bodies[0].body, bound);
    NewtonAnalysis a = newton_analysis(r, bound, Target::Limit);
    std::vector<NewtonEdge> rising;
    for (const auto& e : a.edges)
      if (e.height > 0) rising.push_back(e);
    bool spawned = spawn(item, rising, queue);
    const NewtonEdge* edge = detail::limit_edge(a);
    bool unbounded = std::any_of(a.free_points.begin(), a.free_points.end(), [](const auto& p) { return p.e > 0; });
    if (a.bounded_points.empty() && !unbounded) {
      // Only a constant survives; any remainder below t^-alpha keeps the value.
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), bound.alpha.get_num_mpz_t(), bound.alpha.get_den_mpz_t());
      valued(item, -Exponent(fl + 1), Poly(r.constant_term()));
      return;
    }
    if (edge != nullptr) {
      Poly value;
      for (const auto& p : edge->points)
        value += Poly::monomial(p.coeff, {{kParam, Exponent(p.m)}});
      valued(item, -edge->slope, value);
      return;
    }
    if (!spawned) reject(item, 0, std::nullopt, "unbounded");
  }

  void valued(const WorkItem& item, const Exponent& exponent, const Poly& value) {
    std::vector<ExpansionTerm> terms = item.terms;
    terms.push_back({Poly::variable(kParam), exponent});
    BranchState b = make_branch(item.direction, limit_, terms, -exponent, item.depth);
    b.stage = Stage::Valued;
    b.value = value;
    branches_.push_back(b);
  }

  static bool branch_less(const BranchState& a, const BranchState& b) {
    if (a.direction != b.direction) return a.direction > b.direction;
    std::size_t n = std::min(a.expansion.size(), b.expansion.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = a.expansion[i];
      const auto& y = b.expansion[i];
      if (x.exponent != y.exponent) return x.exponent > y.exponent;
      bool xc = x.coeff.is_constant(), yc = y.coeff.is_constant();
      if (xc != yc) return xc;
      if (xc && x.coeff.constant_term() != y.coeff.constant_term()) return x.coeff.constant_term() < y.coeff.constant_term();
      if (!xc && x.coeff.to_string() != y.coeff.to_string()) return x.coeff.to_string() < y.coeff.to_string();
    }
    return a.expansion.size() < b.expansion.size();
  }

  void finish(PipelineReport& report) {
    std::stable_sort(branches_.begin(), branches_.end(), branch_less);
    std::vector<BranchState> unique;
    for (auto& b : branches_) {
      bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto& u) {
        return u.direction == b.direction && u.expansion == b.expansion && u.stage == b.stage;
      });
      if (!dup) unique.push_back(std::move(b));
    }
    std::vector<Poly> values;
    std::vector<AsymptoticIdentity> plus;
    for (auto& b : unique) {
      if (b.stage != Stage::Valued) continue;
      AsymptoticIdentity id = build_identity(b);
      auto [ok, rhs] = verify_identity(p_, id);
      id.rhs = rhs;
      id.verified = ok;
      if (!ok) {
        b.stage = Stage::Stalled;
        b.note = "identity_unverified";
        report.identities.push_back(id);
        continue;
      }
      bool duplicate = id.sign < 0 && std::any_of(plus.begin(), plus.end(), [&](const auto& pid) { return same_curve_family(pid, id); });
      if (id.sign > 0) plus.push_back(id);
      values.push_back(asymptotic_values(id));
      if (duplicate) {
        b.note = "same_curve_as_positive_direction";
        continue;
      }
      report.identities.push_back(id);
    }
    std::vector<Rejection> rej;
    for (auto& r : rejections_)
      if (std::find(rej.begin(), rej.end(), r) == rej.end()) rej.push_back(std::move(r));
    report.branches = std::move(unique);
    report.rejections = std::move(rej);
    report.values = value_set(values);
  }
};

}  // namespace detail

/// Finite asymptotic values of p along curves where the growth variable of `mode`
/// tends to +-inf while the other stays finite.
inline PipelineReport run_pipeline(const Poly& p, Mode mode, const PipelineOptions& opts = {}) {
  PipelineReport report;
  report.input = p;
  report.mode = mode;
  report.normalization = normalization_check(p);
  report.assertions = build_assertions(p, growth_var(mode), finite_var(mode));
  if (!report.normalization) {
    report.failure = ErrorCode::NormalizationFailed;
    return report;
  }
  detail::PipelineRun(p, mode, opts).run(report);
  return report;
}

}  // namespace peretz
