#include <gtest/gtest.h>

#include "peretz/parse.hpp"
#include "peretz/roots.hpp"

using namespace peretz;

namespace {

const Var kR{"r"};
Rational q(long n, long d = 1) { return make_rational(n, d); }

}  // namespace

TEST(RealRoots, QuarticWithOneFourfoldRoot) {
  RootReport r = real_roots(parse("r^4 - 4*r^3 + 6*r^2 - 4*r + 1"), kR);
  ASSERT_EQ(r.rational_roots.size(), 1u);
  EXPECT_EQ(r.rational_roots[0].value, 1);
  EXPECT_EQ(r.rational_roots[0].multiplicity, 4u);
  EXPECT_TRUE(r.irrational_root_intervals.empty());
  EXPECT_EQ(r.squarefree_part, parse("r - 1"));
  EXPECT_EQ(r.distinct_real_roots(), 1u);
}

TEST(RealRoots, CubeOfShift) {
  RootReport r = real_roots(parse("(r + 1)^3"), kR);
  ASSERT_EQ(r.rational_roots.size(), 1u);
  EXPECT_EQ(r.rational_roots[0].value, -1);
  EXPECT_EQ(r.rational_roots[0].multiplicity, 3u);
}

TEST(RealRoots, IrrationalRootsAreIsolated) {
  RootReport r = real_roots(parse("r^2 - 2"), kR);
  EXPECT_TRUE(r.rational_roots.empty());
  ASSERT_EQ(r.irrational_root_intervals.size(), 2u);
  const auto& neg = r.irrational_root_intervals[0];
  const auto& pos = r.irrational_root_intervals[1];
  EXPECT_LT(neg.upper, pos.lower);
  EXPECT_LE(pos.lower * pos.lower, 2);
  EXPECT_GE(pos.upper * pos.upper, 2);
  EXPECT_LE(pos.upper - pos.lower, q(1, 1000000));
}

TEST(RealRoots, MixedRationalAndIrrational) {
  RootReport r = real_roots(parse("(2*r - 1)^2*(r^2 - 3)*r^3"), kR);
  ASSERT_EQ(r.rational_roots.size(), 2u);
  EXPECT_EQ(r.rational_roots[0].value, 0);
  EXPECT_EQ(r.rational_roots[0].multiplicity, 3u);
  EXPECT_EQ(r.rational_roots[1].value, q(1, 2));
  EXPECT_EQ(r.rational_roots[1].multiplicity, 2u);
  EXPECT_EQ(r.irrational_root_intervals.size(), 2u);
  for (const auto& iv : r.irrational_root_intervals) {
    EXPECT_FALSE(iv.lower <= q(1, 2) && q(1, 2) <= iv.upper);
    EXPECT_FALSE(iv.lower <= 0 && 0 <= iv.upper);
  }
}

TEST(RealRoots, NoRealRoots) {
  RootReport r = real_roots(parse("r^2 + 1"), kR);
  EXPECT_EQ(r.distinct_real_roots(), 0u);
  EXPECT_EQ(real_roots(Poly(5), kR).distinct_real_roots(), 0u);
}

TEST(RealRoots, WidthIsHonored) {
  RootReport r = real_roots(parse("r^3 - r - 1"), kR, q(1, 1 << 30));
  ASSERT_EQ(r.irrational_root_intervals.size(), 1u);
  EXPECT_LE(r.irrational_root_intervals[0].upper - r.irrational_root_intervals[0].lower, q(1, 1 << 30));
}

TEST(RealRoots, Errors) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Syntax;
  };
  EXPECT_EQ(code([] { real_roots(parse("r + s"), kR); }), ErrorCode::NotUnivariate);
  EXPECT_EQ(code([] { real_roots(parse("r^(1/2) - 1"), kR); }), ErrorCode::NotUnivariate);
  EXPECT_EQ(code([] { real_roots(Poly(), kR); }), ErrorCode::InvalidArgument);
}

TEST(RealRoots, LaurentInputsDropPoleAtZero) {
  RootReport r = real_roots(parse("r - r^-1"), kR);
  ASSERT_EQ(r.rational_roots.size(), 2u);
  EXPECT_EQ(r.rational_roots[0].value, -1);
  EXPECT_EQ(r.rational_roots[1].value, 1);
}
