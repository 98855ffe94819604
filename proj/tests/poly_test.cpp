#include <gtest/gtest.h>

#include <random>

#include "laurentlab/poly.hpp"
#include "laurentlab/text.hpp"
#include "test_util.hpp"

namespace laurentlab {
namespace {

using testing::make_table;
using testing::P;

TEST(Poly, AddIsTermUnion) {
  VarTable t = make_table();
  EXPECT_EQ(P("f0*f5", t) + P("f2*f3", t), P("f2*f3 + f0*f5", t));
  EXPECT_EQ((P("f0*f5", t) + P("f2*f3", t)).size(), 2u);
}

// Expected value expanded term by term, independent of operator*.
TEST(Poly, MulMatchesHandExpansion) {
  VarTable t = make_table();
  LaurentPoly got = P("f0*f5 + f2*f3", t) * P("f1*f6 + f3*f4", t);
  std::vector<Term> want;
  auto mono = [&](std::vector<std::pair<int, int>> f) {
    std::vector<Monomial::Factor> out;
    for (auto [v, e] : f) out.push_back({static_cast<Var>(v), e});
    return Monomial(out);
  };
  want.push_back({mono({{0, 1}, {1, 1}, {5, 1}, {6, 1}}), 1});
  want.push_back({mono({{0, 1}, {3, 1}, {4, 1}, {5, 1}}), 1});
  want.push_back({mono({{1, 1}, {2, 1}, {3, 1}, {6, 1}}), 1});
  want.push_back({mono({{2, 1}, {3, 2}, {4, 1}}), 1});
  EXPECT_EQ(got, LaurentPoly::from_terms(want));
  EXPECT_LE(got.size(), 4u);
}

TEST(Poly, AddNegIsZero) {
  VarTable t = make_table();
  LaurentPoly p = P("3*a*f0^-2*f1 - f4 + 7", t);
  EXPECT_TRUE((p + (-p)).is_zero());
}

TEST(Poly, ExactDivRecoversFactor) {
  VarTable t = make_table();
  LaurentPoly num = P("(f0*f5 + f2*f3)*(f1*f6 + f3*f4)", t);
  auto r = exact_div(num, P("f1*f6 + f3*f4", t));
  ASSERT_TRUE(std::holds_alternative<LaurentPoly>(r));
  EXPECT_EQ(std::get<LaurentPoly>(r), P("f0*f5 + f2*f3", t));
}

TEST(Poly, ExactDivByMonomial) {
  VarTable t = make_table();
  auto r = exact_div(P("f0*f4*f5 + f1*f2*f6 + f2*f3*f4", t), P("f0*f1", t));
  ASSERT_TRUE(std::holds_alternative<LaurentPoly>(r));
  EXPECT_EQ(std::get<LaurentPoly>(r), P("f4*f5*f1^-1 + f2*f6*f0^-1 + f2*f3*f4*f0^-1*f1^-1", t));
}

TEST(Poly, ExactDivFailureCarriesWitness) {
  VarTable t = make_table();
  auto r = exact_div(P("f0 + f1", t), P("f0 + f2", t));
  ASSERT_TRUE(std::holds_alternative<NotDivisible>(r));
  EXPECT_NE(std::get<NotDivisible>(r).witness.coeff, 0);
}

TEST(Poly, ExactDivByZeroThrows) {
  VarTable t = make_table();
  EXPECT_THROW(exact_div(P("f0", t), LaurentPoly{}), AlgebraError);
}

TEST(Poly, DivisionByParameterIsNotAUnitDivision) {
  VarTable t = make_table();
  EXPECT_FALSE(divides(P("a", t), P("f0", t)));
  EXPECT_TRUE(divides(P("a", t), P("a*f0 + a^2", t)));
  EXPECT_FALSE(divides(P("2", t), P("f0 + 2", t)));
}

TEST(Poly, Units) {
  VarTable t = make_table();
  EXPECT_TRUE(P("f0^2*f3^-1", t).is_unit());
  EXPECT_TRUE(P("-f1", t).is_unit());
  EXPECT_FALSE(P("f0 + f1", t).is_unit());
  EXPECT_FALSE(P("2*f0", t).is_unit());
  EXPECT_FALSE(P("a*f0", t).is_unit());
  EXPECT_FALSE(LaurentPoly{}.is_unit());
}

TEST(Poly, PowMatchesRepeatedProduct) {
  VarTable t = make_table();
  LaurentPoly p = P("f0 - 2*f1^-1 + a", t);
  LaurentPoly acc(1);
  for (unsigned k = 0; k <= 5; ++k) {
    EXPECT_EQ(p.pow(k), acc);
    acc *= p;
  }
}

TEST(Text, CanonicalPrintingGroupsParameterCoefficients) {
  VarTable t;
  t.add_variable("f[0,1]");
  t.add_variable("f[2,0]");
  t.add_param("a");
  LaurentPoly p = parse_poly("2*a*f[2,0]^3*f[0,1]^-1 + 1", t);
  EXPECT_EQ(to_string(p, t), "1 + (2*a)*f[0,1]^-1*f[2,0]^3");
  EXPECT_EQ(parse_poly(to_string(p, t), t), p);
}

TEST(Text, MixedCoefficientGroups) {
  VarTable t = make_table();
  LaurentPoly p = P("a*f0 - b*f0 + 3*f1^-2 - 1", t);
  std::string s = to_string(p, t);
  EXPECT_EQ(s, "(a - b)*f0 - 1 + 3*f1^-2");
  EXPECT_EQ(P(s, t), p);
}

TEST(Text, ParseErrors) {
  VarTable t = make_table();
  EXPECT_THROW(P("f0 +", t), ParseError);
  EXPECT_THROW(P("zz", t), ParseError);
  EXPECT_THROW(P("(f0 + f1)^-1", t), ParseError);
  EXPECT_THROW(P("f0/(f0 + f1)", t), ParseError);
  EXPECT_THROW(P("f0 )", t), ParseError);
}

// Random polynomials for the algebraic law checks below.
LaurentPoly random_poly(std::mt19937_64& rng, int nvars, int terms, int lo, int hi, bool params = true) {
  std::uniform_int_distribution<int> coef(-5, 5), ex(lo, hi), var(0, nvars - 1), nt(1, terms), pe(0, 2);
  std::vector<Term> ts;
  int n = nt(rng);
  for (int i = 0; i < n; ++i) {
    std::vector<Monomial::Factor> f;
    for (int v = 0; v < nvars; ++v) f.push_back({static_cast<Var>(v), ex(rng)});
    if (params) f.push_back({param_var(0), pe(rng)});
    int c = coef(rng);
    ts.push_back({Monomial(f), c == 0 ? 1 : c});
  }
  return LaurentPoly::from_terms(ts);
}

TEST(PolyProperty, RingAxiomsAndPrintRoundTrip) {
  std::mt19937_64 rng(20240611);
  VarTable t = make_table(4);
  for (int i = 0; i < 300; ++i) {
    LaurentPoly a = random_poly(rng, 4, 4, -2, 2), b = random_poly(rng, 4, 4, -2, 2), c = random_poly(rng, 4, 3, -1, 2);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ(a + b, b + a);
    ASSERT_TRUE((a + (-a)).is_zero());
    ASSERT_EQ(parse_poly(to_string(a * b, t), t), a * b);
  }
}

TEST(PolyProperty, ExactDivRoundTrip) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    LaurentPoly p = random_poly(rng, 3, 5, -2, 3), q = random_poly(rng, 3, 4, -2, 3);
    auto r = exact_div(p * q, q);
    ASSERT_TRUE(std::holds_alternative<LaurentPoly>(r));
    ASSERT_EQ(std::get<LaurentPoly>(r), p);
  }
}

}  // namespace
}  // namespace laurentlab
