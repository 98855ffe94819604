#include <gtest/gtest.h>

#include <random>

#include "laurentlab/dynamics.hpp"
#include "test_util.hpp"

namespace laurentlab {
namespace {

using testing::fixture;

TEST(ExponentOrbit, SmallSteps) {
  EXPECT_EQ(exponent_orbit(0), (ExponentState{1, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  // f7 = P / f0
  EXPECT_EQ(exponent_orbit(7), (ExponentState{-1, 0, 0, 0, 0, 0, 0, 1, 0, 0}));
  // f8 = Q / (f0 f1)
  EXPECT_EQ(exponent_orbit(8), (ExponentState{-1, -1, 0, 0, 0, 0, 0, 0, 1, 0}));
  // f9 = P R / (f0 f1 f2)
  EXPECT_EQ(exponent_orbit(9), (ExponentState{-1, -1, -1, 0, 0, 0, 0, 1, 0, 1}));
}

// One step of the exponent action agrees with substituting the images of the
// ten symbols into a random monomial.
TEST(ExponentOrbitProperty, MatchesSymbolicSubstitution) {
  VarTable t;
  std::vector<Var> s;
  for (int i = 0; i < 10; ++i) s.push_back(t.add_variable("s" + std::to_string(i)));
  std::vector<Monomial> img(10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      if (long e = kExponentMatrix[i][j]) img[i] = img[i] * Monomial::var(s[j], e);
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> d(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    ExponentState e;
    for (auto& x : e) x = d(rng);
    Monomial lhs, rhs;
    for (std::size_t i = 0; i < 10; ++i) lhs = lhs * img[i].pow(e[i]);
    ExponentState f = exponent_step(e);
    for (std::size_t k = 0; k < 10; ++k) rhs = rhs * Monomial::var(s[k], f[k]);
    ASSERT_EQ(lhs, rhs) << trial;
  }
}

TEST(MonomialFormula, Passes) {
  // Exponents up to n = 9 are still 0 or 1, too early for superlinear growth.
  OracleReport r = verify_monomial_formula(9);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.first_failure);
  EXPECT_EQ(r.checked, 3u);
  EXPECT_EQ(r.to_json()["data"]["superlinear"], false);
  OracleReport big = verify_monomial_formula(20);
  EXPECT_TRUE(big.pass) << big.detail;
  EXPECT_EQ(big.checked, 14u);
  EXPECT_EQ(big.to_json()["verdict"], "pass");
  EXPECT_THROW(verify_monomial_formula(6), std::invalid_argument);
}

TEST(Superlinearity, BandAtTwenty) {
  GrowthCheck g = superlinearity(20);
  EXPECT_TRUE(g.superlinear);
  EXPECT_TRUE(g.in_band) << g.ratio;
  EXPECT_EQ(g.at_half, 1);
  EXPECT_EQ(g.at_n, 6);
  EXPECT_EQ(g.at_double, 26);
  EXPECT_FALSE(superlinearity(20, 4.5, 5).in_band);
}

TEST(LynessReduction, HoldsAndNegativeControlFails) {
  OracleReport ok = lyness_reduction_check(12);
  EXPECT_TRUE(ok.pass) << ok.detail;
  EXPECT_EQ(ok.checked, 6u);
  OracleReport bad = lyness_reduction_check(12, true);
  EXPECT_FALSE(bad.pass);
  ASSERT_TRUE(bad.first_failure);
  EXPECT_EQ(*bad.first_failure, 7);
}

TEST(NumericRecursion, LynessValues) {
  EquationDef ly = fixture("lyness_r1");
  Domain H = Domain::half_space(LatticeSpec(1, {}), {1}, 0);
  auto v = numeric_recursion(ly, H, {{2}, {3}, {4}, {5}, {6}}, [](const LatticePoint&) { return mpq_class(1); }, {});
  ASSERT_TRUE(v);
  EXPECT_EQ(v->at({2}), 2);
  EXPECT_EQ(v->at({3}), 3);
  EXPECT_EQ(v->at({4}), 2);
  EXPECT_EQ(v->at({5}), 1);
  EXPECT_EQ(v->at({6}), 1);
  // f0 = 1, f1 = -1 gives f2 = 0, so f4 divides by zero.
  auto sing = numeric_recursion(ly, H, {{4}}, [](const LatticePoint& p) { return mpq_class(p[0] == 0 ? 1 : -1); }, {});
  EXPECT_FALSE(sing);
}

struct Case {
  std::string fixture;
  std::vector<LatticePoint> window;
  Domain H;
};

TEST(NumericConsistency, Fixtures) {
  LatticeSpec z1(1, {}), z2(2, {});
  Domain quad = Domain::intersection({Domain::half_space(z2, {1, 0}, 0), Domain::half_space(z2, {0, 1}, 0)});
  Domain line = Domain::half_space(z1, {1}, 0);
  std::vector<Case> cases{{"dkdv", Box{{0, 0}, {5, 5}}.points(z2), quad},
                          {"lyness_r1", {{2}, {5}, {9}, {12}}, line},
                          {"hirota_ab", {{7}, {10}, {14}, {16}}, line}};
  for (const auto& c : cases)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Evolution ev(fixture(c.fixture), c.H);
      OracleReport r = numeric_consistency(ev, c.window, seed);
      EXPECT_TRUE(r.pass) << c.fixture << " seed " << seed << ": " << r.detail;
      EXPECT_EQ(r.checked, c.window.size());
    }
}

}  // namespace
}  // namespace laurentlab
