#include <gtest/gtest.h>

#include <cmath>

#include "peretz/assertions.hpp"
#include "peretz/balance.hpp"
#include "peretz/branch.hpp"
#include "peretz/fixtures.hpp"
#include "peretz/parse.hpp"
#include "peretz/pipeline.hpp"
#include "peretz/roots.hpp"
#include "peretz/value_set.hpp"

using namespace peretz;

namespace {

Poly P() { return load_builtin("pinchuk-p").poly(); }
Rational q(long n, long d = 1) { return make_rational(n, d); }
const Var kZ{"z"};
const Var kS{"s"};

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Assertions, BodiesInX) {
  AssertionList list = build_assertions(P(), kX);
  const Fixture fixture = load_builtin("assertions-x");
  const auto& expected = *fixture.assertions;
  ASSERT_EQ(list.size(), 7u);
  for (unsigned k = 0; k < 7; ++k) {
    EXPECT_EQ(list[k].level, k);
    EXPECT_EQ(list[k].body, expected[k].body) << "level " << k;
    EXPECT_EQ(list[k].target, k == 0 ? Target::Limit : Target::Zero);
  }
  EXPECT_EQ(first_active_level(list), 2u);
}

TEST(Assertions, BodiesInY) {
  AssertionList list = build_assertions(P(), kY);
  const Fixture fixture = load_builtin("assertions-y");
  const auto& expected = *fixture.assertions;
  ASSERT_EQ(list.size(), 5u);
  for (unsigned k = 0; k < 5; ++k) EXPECT_EQ(list[k].body, expected[k].body) << "level " << k;
  EXPECT_EQ(first_active_level(list), 1u);
  EXPECT_EQ(list.decomposition_var, kY);
  EXPECT_EQ(list.coefficient_var, kX);
}

TEST(Assertions, TopLevelIsLeadingConstant) {
  AssertionList list = build_assertions(parse("x^2*y + 3*x + y - 2"), kX);
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[2].body, Poly(0));
  EXPECT_EQ(list[1].body, parse("x*y + 3"));
  EXPECT_EQ(list[0].body, parse("x^2*y + 3*x - 2"));
}

TEST(Normalization, Pinchuk) {
  Degrees d = bivariate_degrees(P());
  EXPECT_EQ(d.in_x, 6);
  EXPECT_EQ(d.in_y, 4);
  EXPECT_EQ(d.total, 10);
  EXPECT_TRUE(normalization_check(P()));
}

TEST(Normalization, Failures) {
  EXPECT_FALSE(normalization_check(parse("x^2 + y^2")));
  EXPECT_TRUE(normalization_check(parse("x*y - 1")));
  EXPECT_TRUE(normalization_check(parse("5")));
  EXPECT_EQ(code_of([] { bivariate_degrees(parse("x*y*w")); }), ErrorCode::NotBivariate);
}

TEST(Balance, LevelTwoInX) {
  AssertionList list = build_assertions(P(), kX);
  BalanceResult b = dominant_balance(list[2], kX, kY);
  ASSERT_EQ(b.kind, BalanceKind::Balance);
  ASSERT_TRUE(b.power_product && b.limit_poly);
  EXPECT_EQ(b.power_product->monomial(), parse("x*y"));
  EXPECT_EQ(*b.limit_poly, pow(parse("r - 1"), 4));
  RootReport roots = real_roots(*b.limit_poly, kRootSymbol);
  ASSERT_EQ(roots.rational_roots.size(), 1u);
  EXPECT_EQ(roots.rational_roots[0].value, 1);
  EXPECT_EQ(roots.rational_roots[0].multiplicity, 4u);
  EXPECT_TRUE(roots.irrational_root_intervals.empty());
}

TEST(Balance, LevelOneInY) {
  AssertionList list = build_assertions(P(), kY);
  BalanceResult b = dominant_balance(list[1], kX);
  ASSERT_EQ(b.kind, BalanceKind::Balance);
  EXPECT_EQ(b.power_product->monomial(), parse("y*x^2"));
  EXPECT_EQ(*b.limit_poly, pow(parse("r + 1"), 3));
  RootReport roots = real_roots(*b.limit_poly, kRootSymbol);
  ASSERT_EQ(roots.rational_roots.size(), 1u);
  EXPECT_EQ(roots.rational_roots[0].value, -1);
  EXPECT_EQ(roots.rational_roots[0].multiplicity, 3u);
}

TEST(Balance, ContradictionAndErrors) {
  BalanceResult b = dominant_balance(Assertion{1, Poly(3), Target::Zero}, kX, kY);
  EXPECT_EQ(b.kind, BalanceKind::Contradiction);
  EXPECT_EQ(*b.witness, 3);
  EXPECT_EQ(code_of([] { dominant_balance(Assertion{1, parse("x + y"), Target::Zero}, kX, kY); }), ErrorCode::NoBalance);
  EXPECT_EQ(code_of([] { dominant_balance(Assertion{1, Poly(0), Target::Zero}, kX, kY); }), ErrorCode::NoBalance);
}

TEST(OSimplify, SubstitutedYFinite) {
  AssertionList sub = apply_substitution(build_assertions(P(), kX), kY, parse("x^-1 + z"));
  const Fixture fixture = load_builtin("subst-y-finite");
  const auto& expected = *fixture.assertions;
  ASSERT_EQ(sub.size(), 7u);
  for (unsigned k = 0; k < 7; ++k) EXPECT_EQ(sub[k].body, expected[k].body) << "level " << k;

  OBound b{kZ, kX, q(1)};
  EXPECT_EQ(b.to_string(), "z = o(x^-1)");
  EXPECT_EQ(o_simplify(sub[0].body, b), parse("x^6*z^4 + 2*x^3*z^2 + 3*x^4*z^3"));
  EXPECT_EQ(o_simplify(sub[1].body, b), parse("x^5*z^4"));
  for (unsigned k = 2; k < 7; ++k) EXPECT_TRUE(o_simplify(sub[k].body, b).is_zero()) << "level " << k;
}

TEST(OSimplify, KnownBoundsTighten) {
  OBound weak{kZ, kX, q(0)};
  OBound strong{kZ, kX, q(1)};
  OBound other{kZ, kY, q(5)};
  Poly body = parse("x*z + z + x^-1");
  EXPECT_EQ(o_simplify(body, weak), parse("x*z"));
  std::vector<OBound> known{strong, other};
  EXPECT_TRUE(o_simplify(body, weak, known).is_zero());
}

TEST(OSimplify, DetailedReportsUnbounded) {
  OSimplified s = o_simplify_detailed(parse("x^2 + x*z + 3"), OBound{kZ, kX, q(1)});
  EXPECT_EQ(s.kept, parse("x^2 + 3"));
  EXPECT_EQ(s.unbounded, parse("x^2"));
}

TEST(Classify, BoundTightening) {
  BalanceResult r = classify_residual(parse("x^5*z^4"), Target::Zero, OBound{kZ, kX, q(1)});
  ASSERT_EQ(r.kind, BalanceKind::Bound);
  EXPECT_EQ(r.bound->alpha, q(5, 4));
  EXPECT_EQ(r.bound->to_string(), "z = o(x^(-5/4))");
}

TEST(Classify, SecondStageLimitPolynomial) {
  Poly level0 = parse("x^6*z^4 + 2*x^3*z^2 + 3*x^4*z^3");
  BalanceResult r = classify_residual(level0, Target::Limit, OBound{kZ, kX, q(5, 4)});
  ASSERT_EQ(r.kind, BalanceKind::Balance);
  EXPECT_EQ(*r.limit_poly, parse("r^2 + 2*r - C"));
  EXPECT_EQ(r.power_product->growth_exp, 3);
  EXPECT_EQ(r.power_product->vanishing_exp, 2);
  EXPECT_EQ(r.power_product->monomial(), parse("x^3*z^2"));
}

TEST(Classify, TrivialContradictionUnbounded) {
  OBound b{kZ, kX, q(1)};
  EXPECT_EQ(classify_residual(Poly(), Target::Zero, b).kind, BalanceKind::Trivial);
  BalanceResult c = classify_residual(Poly(8), Target::Zero, b);
  EXPECT_EQ(c.kind, BalanceKind::Contradiction);
  EXPECT_EQ(*c.witness, 8);
  EXPECT_EQ(classify_residual(parse("x + 2"), Target::Zero, b).kind, BalanceKind::Unbounded);
  BalanceResult lim = classify_residual(Poly(5), Target::Limit, b);
  EXPECT_EQ(*lim.limit_poly, parse("5 - C"));
  EXPECT_EQ(code_of([&] { classify_residual(parse("a*x*z"), Target::Zero, b); }), ErrorCode::Unclassifiable);
  EXPECT_EQ(code_of([&] { classify_residual(parse("x*z^(1/2)"), Target::Zero, b); }), ErrorCode::Unclassifiable);
}

TEST(SecondStage, ValueMaps) {
  PowerProduct w{kX, q(3), kZ, q(2)};
  Poly lim = parse("r^2 + 2*r - C");
  EXPECT_EQ(second_stage_value_map(lim, w, +1), parse("s^4 + 2*s^2"));
  EXPECT_EQ(second_stage_value_map(lim, w, -1), parse("s^4 - 2*s^2"));
  EXPECT_EQ(code_of([&] { second_stage_value_map(parse("r - C^2"), w, 1); }), ErrorCode::NotLinearInC);
  EXPECT_EQ(code_of([&] { second_stage_value_map(parse("r - C*r"), w, 1); }), ErrorCode::NotLinearInC);
}

TEST(Residual, VanishesUnderSharpBound) {
  const Poly residual = load_builtin("residual-y-finite").poly();
  Poly direct = substitute(P(), kY, parse("x^-1 + s*x^(-3/2) + z")) - substitute(P(), kY, parse("x^-1 + s*x^(-3/2)"));
  EXPECT_EQ(direct, residual);
  EXPECT_EQ(residual.size(), 13u);
  OBound sharp{kZ, kX, q(3, 2)};
  EXPECT_TRUE(o_simplify(residual, sharp).is_zero());
  EXPECT_FALSE(o_simplify(residual, OBound{kZ, kX, q(5, 4)}).is_zero());
}

TEST(BaseExpansion, BothDirections) {
  Poly plus = substitute(P(), kY, parse("x^-1 + s*x^(-3/2)"));
  EXPECT_EQ(plus, load_builtin("base-expansion-plus").poly());
  EXPECT_EQ(plus, parse("s^4 + 2*s^2 + (3*s^3 + 3*s)*x^(-1/2) + (3*s^2 + 1)*x^-1 + s*x^(-3/2)"));
  Poly minus = substitute(P(), {{kX, parse("-x")}, {kY, parse("-x^-1 + s*x^(-3/2)")}});
  EXPECT_EQ(minus, load_builtin("base-expansion-minus").poly());
  EXPECT_EQ(minus, parse("s^4 - 2*s^2 + (3*s^3 - 3*s)*x^(-1/2) + (3*s^2 - 1)*x^-1 + s*x^(-3/2)"));
}

TEST(Identity, FixturesVerify) {
  for (const char* name : {"identity-plus", "identity-minus", "identity-extended"}) {
    Fixture f = load_builtin(name);
    auto [ok, composite] = verify_identity(P(), *f.identity);
    EXPECT_TRUE(ok) << name;
    EXPECT_EQ(composite, f.poly()) << name;
  }
  EXPECT_EQ(asymptotic_values(*load_builtin("identity-plus").identity), parse("y^4 + 2*y^2"));
  EXPECT_EQ(asymptotic_values(*load_builtin("identity-minus").identity), parse("y^4 - 2*y^2"));
  EXPECT_EQ(asymptotic_values(*load_builtin("identity-extended").identity), parse("a^4 + 2*a^2"));
}

TEST(Identity, WrongRhsFails) {
  AsymptoticIdentity id = *load_builtin("identity-plus").identity;
  id.rhs = *id.rhs + parse("x");
  EXPECT_FALSE(verify_identity(P(), id).first);
  id.rhs.reset();
  id.k = 1;
  EXPECT_FALSE(verify_identity(P(), id).first);
}

TEST(Identity, BuiltFromBranch) {
  BranchState b;
  b.expansion = {{Poly(1), q(-1)}, {Poly::variable(kParam), q(-3, 2)}};
  AsymptoticIdentity id = build_identity(b);
  EXPECT_EQ(id.k, 2);
  EXPECT_EQ(id.N, 3);
  EXPECT_EQ(id.growth_replacement(), parse("x^-2"));
  EXPECT_EQ(id.finite_replacement(), parse("y*x^3 + x^2"));
  b.direction = -1;
  b.expansion[0].coeff = Poly(-1);
  AsymptoticIdentity minus = build_identity(b);
  EXPECT_EQ(minus.growth_replacement(), parse("-x^-2"));
  EXPECT_EQ(minus.finite_replacement(), parse("y*x^3 - x^2"));
  EXPECT_TRUE(verify_identity(P(), minus).first);
  EXPECT_FALSE(same_curve_family(id, minus));
}

TEST(Identity, ExtendedBranch) {
  BranchState b;
  b.expansion = {{Poly(1), q(-1)}, {Poly::variable(kParam), q(-3, 2)}};
  BranchState e = extend_branch(b, Var("a"), q(-2));
  AsymptoticIdentity id = build_identity(e);
  EXPECT_EQ(id.N, 4);
  EXPECT_EQ(id.finite_replacement(), parse("y*x^4 + a*x^3 + x^2"));
  id.rhs = load_builtin("identity-extended").poly();
  EXPECT_TRUE(verify_identity(P(), id).first);
  EXPECT_EQ(code_of([&] { extend_branch(b, Var("a"), q(-1)); }), ErrorCode::InvalidArgument);
}

TEST(Identity, Errors) {
  BranchState b;
  EXPECT_EQ(code_of([&] { build_identity(b); }), ErrorCode::InvalidArgument);
  b.expansion = {{Poly::variable(kParam), q(1, 2)}};
  EXPECT_EQ(code_of([&] { build_identity(b); }), ErrorCode::ExponentDenominatorMismatch);
  b.expansion = {{Poly(1), q(-3)}, {Poly::variable(kParam), q(-1)}};
  EXPECT_EQ(code_of([&] { build_identity(b); }), ErrorCode::ExponentDenominatorMismatch);
  b.expansion = {{Poly(2), q(-1)}};
  EXPECT_EQ(code_of([&] { build_identity(b); }), ErrorCode::InvalidArgument);
}

TEST(Identity, OddKFamilies) {
  BranchState b;
  b.expansion = {{Poly::variable(kParam), q(-1)}};
  AsymptoticIdentity plus = build_identity(b);
  b.direction = -1;
  AsymptoticIdentity minus = build_identity(b);
  EXPECT_EQ(plus.k, 1);
  EXPECT_TRUE(same_curve_family(plus, minus));
}

TEST(ValueSet, PinchukUnion) {
  ValueSet v = value_set({parse("s^4 + 2*s^2"), parse("s^4 - 2*s^2")});
  ASSERT_EQ(v.intervals.size(), 1u);
  EXPECT_EQ(*v.intervals[0].lower, -1);
  EXPECT_TRUE(v.intervals[0].lower_closed);
  EXPECT_FALSE(v.intervals[0].upper.has_value());
  EXPECT_TRUE(v.exact());
  EXPECT_EQ(v.to_string(), "[-1, +inf)");
  EXPECT_TRUE(v.contains(q(-1)));
  EXPECT_FALSE(v.contains(q(-1001, 1000)));
}

TEST(ValueSet, SinglePieces) {
  EXPECT_EQ(image_of_reals(parse("s^4 + 2*s^2"), kS).to_string(), "[0, +inf)");
  EXPECT_EQ(image_of_reals(parse("s^3 - s"), kS).to_string(), "(-inf, +inf)");
  EXPECT_EQ(image_of_reals(parse("3 - s^2"), kS).to_string(), "(-inf, 3]");
  ValueSet point = value_set({Poly(q(7, 2))});
  EXPECT_TRUE(point.intervals.empty());
  ASSERT_EQ(point.points.size(), 1u);
  EXPECT_EQ(point.points[0], q(7, 2));
  EXPECT_TRUE(value_set({}).empty());
  EXPECT_EQ(code_of([] { value_set({parse("s + a")}); }), ErrorCode::NotUnivariate);
}

TEST(ValueSet, PointsAbsorbed) {
  ValueSet v = value_set({parse("s^2"), Poly(3), Poly(-2)});
  EXPECT_EQ(v.to_string(), "[0, +inf) U {-2}");
}

TEST(ValueSet, IrrationalCriticalValueIsEnclosed) {
  // f' = 4s^3 - 2s + 1 has a single irrational real root near -0.885.
  Poly f = parse("s^4 - s^2 + s");
  ValueSet v = image_of_reals(f, kS);
  ASSERT_EQ(v.intervals.size(), 1u);
  EXPECT_FALSE(v.exact());
  double lo = to_double(*v.intervals[0].lower);
  double best = 1e9;
  for (int i = -200000; i <= 200000; ++i) {
    double s = i * 1e-5;
    best = std::min(best, s * s * s * s - s * s + s);
  }
  EXPECT_LE(lo, best);
  EXPECT_GT(lo, best - 1e-4);
}

TEST(Pipeline, YFinite) {
  PipelineReport r = run_pipeline(P(), Mode::YFinite);
  EXPECT_TRUE(r.normalization);
  EXPECT_FALSE(r.failure.has_value());
  ASSERT_EQ(r.branches.size(), 2u);
  EXPECT_EQ(r.branches[0].direction, 1);
  EXPECT_EQ(r.branches[1].direction, -1);
  for (const auto& b : r.branches) {
    EXPECT_EQ(b.stage, Stage::Valued);
    ASSERT_EQ(b.expansion.size(), 2u);
    EXPECT_EQ(b.expansion[0].exponent, -1);
    EXPECT_EQ(b.expansion[0].coeff, Poly(b.direction));
    EXPECT_EQ(b.expansion[1].exponent, q(-3, 2));
    EXPECT_EQ(b.expansion[1].coeff, Poly::variable(kParam));
  }
  EXPECT_EQ(*r.branches[0].value, parse("s^4 + 2*s^2"));
  EXPECT_EQ(*r.branches[1].value, parse("s^4 - 2*s^2"));
  ASSERT_EQ(r.identities.size(), 2u);
  for (const auto& id : r.identities) {
    EXPECT_TRUE(id.verified);
    EXPECT_EQ(id.k, 2);
    EXPECT_EQ(id.N, 3);
  }
  EXPECT_EQ(*r.identities[0].rhs, load_builtin("identity-plus").poly());
  EXPECT_EQ(*r.identities[1].rhs, load_builtin("identity-minus").poly());
  EXPECT_EQ(r.values.to_string(), "[-1, +inf)");
}

TEST(Pipeline, XFiniteFindsNegativeDirectionBranches) {
  PipelineReport r = run_pipeline(P(), Mode::XFinite);
  EXPECT_TRUE(r.normalization);
  ASSERT_FALSE(r.branches.empty());
  for (const auto& b : r.branches) {
    EXPECT_EQ(b.direction, -1);
    EXPECT_EQ(b.stage, Stage::Valued);
  }
  for (const auto& id : r.identities) EXPECT_TRUE(id.verified);
  EXPECT_EQ(r.values.to_string(), "(-inf, +inf)");
  bool rejected_plus = std::any_of(r.rejections.begin(), r.rejections.end(), [](const Rejection& x) { return x.direction == 1; });
  EXPECT_TRUE(rejected_plus);
}

TEST(Pipeline, XFiniteIdentityIsPolynomial) {
  // x = u + s*u^2, y = -1/u^2 is the curve found for y -> -inf.
  Poly comp = substitute(P(), {{kX, parse("x + y*x^2")}, {kY, parse("-x^-2")}});
  EXPECT_TRUE(comp.is_polynomial());
  EXPECT_EQ(substitute(comp, kX, Poly()), parse("2*y + 1"));
}

TEST(Pipeline, NormalizationFailure) {
  for (Mode m : {Mode::YFinite, Mode::XFinite}) {
    PipelineReport r = run_pipeline(parse("x^2 + y^2"), m);
    EXPECT_FALSE(r.normalization);
    ASSERT_TRUE(r.failure.has_value());
    EXPECT_EQ(*r.failure, ErrorCode::NormalizationFailed);
    EXPECT_TRUE(r.branches.empty());
    EXPECT_TRUE(r.identities.empty());
  }
}

TEST(Pipeline, SmallInputs) {
  EXPECT_EQ(run_pipeline(parse("x*y + 1"), Mode::YFinite).values.to_string(), "(-inf, +inf)");
  EXPECT_EQ(run_pipeline(parse("(x*y - 1)*(x*y - 2)"), Mode::YFinite).values.to_string(), "[-1/4, +inf)");
  PipelineReport none = run_pipeline(parse("x*y^2 + x + y"), Mode::YFinite);
  EXPECT_TRUE(none.branches.empty());
  EXPECT_TRUE(none.values.empty());
  EXPECT_FALSE(none.rejections.empty());
  EXPECT_EQ(run_pipeline(parse("x*y^2 + x + y"), Mode::XFinite).values.to_string(), "(-inf, +inf)");
}

TEST(Pipeline, Deterministic) {
  PipelineReport a = run_pipeline(P(), Mode::XFinite);
  PipelineReport b = run_pipeline(P(), Mode::XFinite);
  ASSERT_EQ(a.branches.size(), b.branches.size());
  for (std::size_t i = 0; i < a.branches.size(); ++i) EXPECT_EQ(a.branches[i].expansion, b.branches[i].expansion);
  EXPECT_EQ(a.rejections, b.rejections);
  EXPECT_EQ(a.values, b.values);
}
