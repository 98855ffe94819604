#include <gtest/gtest.h>

#include <random>

#include "laurentlab/lattice.hpp"

namespace laurentlab {
namespace {

LatticeSpec Z2() { return LatticeSpec(2, {}); }

std::vector<LatticePoint> kdv_shifts() { return {{-2, 0}, {0, -1}, {-1, 0}, {-1, -1}, {-2, -1}}; }
std::vector<LatticePoint> mkdv_shifts() { return {{-1, 0, 0}, {0, -1, 1}, {0, -1, 0}, {-1, 0, 1}, {-1, -1, 1}}; }

// Parity lattice {(t, n1, n2) : t + n1 + n2 even} with basis (2,0,0), (1,1,0), (1,0,1).
LatticeFrame toda_frame() { return LatticeFrame({{2, 0, 0}, {1, 1, 0}, {1, 0, 1}}); }
std::vector<LatticePoint> toda_shifts() {
  LatticeSpec spec(3, {});
  LatticeFrame fr = toda_frame();
  return {fr.from_ambient(spec, {-1, 1, 0}), fr.from_ambient(spec, {-1, -1, 0}), fr.from_ambient(spec, {-1, 0, 1}),
          fr.from_ambient(spec, {-1, 0, -1}), fr.from_ambient(spec, {-2, 0, 0})};
}

TEST(Lattice, TorsionArithmetic) {
  LatticeSpec spec(2, {2});
  EXPECT_EQ(spec.add({0, 0, 1}, {0, 0, 1}), LatticePoint({0, 0, 0}));
  EXPECT_EQ(Z2().sub({3, 3}, {2, 1}), LatticePoint({1, 2}));
  EXPECT_EQ(spec.scale(2, {1, 0, 1}), LatticePoint({2, 0, 0}));
  EXPECT_EQ(spec.neg({1, 2, 1}), LatticePoint({-1, -2, 1}));
  EXPECT_EQ(spec.point({0, 0, -3}), LatticePoint({0, 0, 1}));
  EXPECT_THROW(spec.add({0, 0, 2}, {0, 0, 0}), LatticeError);
  EXPECT_THROW(spec.add({0, 0}, {0, 0}), LatticeError);
  EXPECT_THROW(LatticeSpec(1, {1}), LatticeError);
}

TEST(Lattice, RealEmbedding) {
  LatticeSpec spec(2, {2});
  EXPECT_EQ(spec.real_embedding({1, 2, 1}), (std::vector<mpq_class>{1, 2}));
  EXPECT_EQ(spec.real_embedding({0, 0, 1}), (std::vector<mpq_class>{0, 0}));
  EXPECT_EQ(Z2().real_embedding({-2, -1}), (std::vector<mpq_class>{-2, -1}));
}

TEST(Independence, KdvIsIndependent) {
  auto v = check_znn_independence(Z2(), kdv_shifts());
  ASSERT_TRUE(std::holds_alternative<Independent>(v));
  const auto& w = std::get<Independent>(v).w;
  for (const auto& s : kdv_shifts()) EXPECT_LE(w[0] * s[0] + w[1] * s[1], -1);
  EXPECT_EQ(w, (std::vector<mpq_class>{1, 1}));
}

TEST(Independence, OppositeShiftsAreDependent) {
  auto v = check_znn_independence(LatticeSpec(2, {}), {{1, 0}, {-1, 0}});
  ASSERT_TRUE(std::holds_alternative<Dependent>(v));
  EXPECT_EQ(std::get<Dependent>(v).witness, (std::vector<long>{1, 1}));
}

TEST(Independence, TorsionOnlyDependencyIsLifted) {
  // Free parts cancel but the torsion parts add up to 1 mod 2.
  LatticeSpec spec(1, {2});
  auto v = check_znn_independence(spec, {{1, 1}, {-1, 0}});
  ASSERT_TRUE(std::holds_alternative<Dependent>(v));
  const auto& a = std::get<Dependent>(v).witness;
  EXPECT_TRUE(combine(spec, {{1, 1}, {-1, 0}}, a).is_zero());
}

TEST(Independence, TodaTimeCoordinateSeparates) {
  LatticeSpec spec(3, {});
  auto v = check_znn_independence(spec, toda_shifts());
  ASSERT_TRUE(std::holds_alternative<Independent>(v));
  const auto& w = std::get<Independent>(v).w;
  for (const auto& s : toda_shifts()) {
    mpq_class x = 0;
    for (int i = 0; i < 3; ++i) x += w[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
    EXPECT_LE(x, -1);
  }
}

TEST(Monoid, KdvMembership) {
  ShiftSystem sys(Z2(), kdv_shifts(), 4);
  auto cert = sys.in_monoid({-3, -2});
  ASSERT_TRUE(cert);
  EXPECT_TRUE(sys.check_certificate({-3, -2}, *cert));
  auto zero = sys.in_monoid({0, 0});
  ASSERT_TRUE(zero);
  EXPECT_EQ(zero->a, std::vector<long>(5, 0));
  EXPECT_FALSE(sys.in_monoid({1, 0}));
  EXPECT_FALSE(sys.in_monoid({-1, 1}));
}

TEST(Order, KdvIsComponentwise) {
  ShiftSystem sys(Z2(), kdv_shifts(), 4);
  EXPECT_TRUE(sys.leq({0, 0}, {3, 3}));
  EXPECT_TRUE(sys.leq({2, 5}, {2, 5}));
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) EXPECT_EQ(sys.leq({a, b}, {0, 0}), a <= 0 && b <= 0);
}

TEST(Order, TodaLightCone) {
  LatticeSpec spec(3, {});
  LatticeFrame fr = toda_frame();
  ShiftSystem sys(spec, toda_shifts(), 4);
  auto pt = [&](long t, long n1, long n2) { return fr.from_ambient(spec, {t, n1, n2}); };
  EXPECT_TRUE(sys.leq(pt(-3, 1, 0), pt(0, 0, 0)));
  EXPECT_FALSE(sys.leq(pt(-2, 2, 2), pt(0, 0, 0)));
  EXPECT_THROW(pt(-1, 2, 0), LatticeError);
  for (long t = -4; t <= 1; ++t)
    for (long n1 = -4; n1 <= 4; ++n1)
      for (long n2 = -4; n2 <= 4; ++n2) {
        if ((t + n1 + n2) % 2 != 0) continue;
        bool formula = t <= 0 && std::abs(n1) + std::abs(n2) <= -t;
        EXPECT_EQ(sys.leq(pt(t, n1, n2), pt(0, 0, 0)), formula) << t << " " << n1 << " " << n2;
      }
}

TEST(Order, MkdvIgnoresTorsion) {
  LatticeSpec spec(2, {2});
  ShiftSystem sys(spec, mkdv_shifts(), 4);
  for (long l = -2; l <= 1; ++l)
    for (long m = -2; m <= 1; ++m)
      for (long n = 0; n < 2; ++n) {
        // A nonzero element of the monoid has l + m < 0, so (0,0,1) is not below 0.
        bool expected = l <= 0 && m <= 0 && !(l == 0 && m == 0 && n == 1);
        EXPECT_EQ(sys.leq({l, m, n}, {0, 0, 0}), expected);
      }
}

TEST(MinimumShift, Examples) {
  EXPECT_TRUE(ShiftSystem(Z2(), kdv_shifts(), 4).check_minimum_shift());
  EXPECT_TRUE(ShiftSystem(LatticeSpec(2, {2}), mkdv_shifts(), 4).check_minimum_shift());
  EXPECT_FALSE(ShiftSystem(Z2(), {{-1, 0}, {0, -1}}, 1).check_minimum_shift());
  EXPECT_FALSE(ShiftSystem(Z2(), {{-1, 0}, {0, -1}}, 0).check_minimum_shift());
  EXPECT_FALSE(ShiftSystem(Z2(), kdv_shifts(), 0).check_minimum_shift());
}

TEST(Generates, Examples) {
  EXPECT_TRUE(check_generates(Z2(), kdv_shifts()));
  EXPECT_FALSE(check_generates(Z2(), {{2, 0}, {0, 2}}));
  EXPECT_TRUE(check_generates(LatticeSpec(2, {2}), mkdv_shifts()));
  EXPECT_FALSE(check_generates(LatticeSpec(2, {2}), {{-1, 0, 0}, {0, -1, 0}}));
  EXPECT_TRUE(check_generates(LatticeSpec(3, {}), toda_shifts()));
}

TEST(ShiftSystemTest, RejectsBadInput) {
  EXPECT_THROW(ShiftSystem(Z2(), {{1, 0}, {-1, 0}}, 0), LatticeError);
  EXPECT_THROW(ShiftSystem(Z2(), {{-1, 0}, {-1, 0}}, 0), LatticeError);
  EXPECT_THROW(ShiftSystem(Z2(), {{-1, 0}}, 3), LatticeError);
  ShiftSystem sys(Z2(), kdv_shifts(), 4);
  EXPECT_THROW(sys.with_functional({1, 0}), LatticeError);
}

TEST(IntegerExpansionTest, ReproducesPoint) {
  auto a = integer_expansion(Z2(), kdv_shifts(), {5, -7});
  ASSERT_TRUE(a);
  EXPECT_EQ(combine(Z2(), kdv_shifts(), *a), LatticePoint({5, -7}));
  EXPECT_FALSE(integer_expansion(Z2(), {{2, 0}, {0, 2}}, {1, 0}));
}

// Naive oracle: enumerate every a >= 0 with sum a <= bound.
bool naive_member(const LatticeSpec& spec, const std::vector<LatticePoint>& shifts, const LatticePoint& d, int bound) {
  std::vector<long> a(shifts.size(), 0);
  std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int left) -> bool {
    if (i == shifts.size()) return combine(spec, shifts, a) == d;
    for (int k = 0; k <= left; ++k) {
      a[i] = k;
      if (rec(i + 1, left - k)) return true;
    }
    a[i] = 0;
    return false;
  };
  return rec(0, bound);
}

TEST(MonoidProperty, AgreesWithNaiveEnumeration) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> c(-3, 1), n(2, 4), pt(-5, 2), tor(0, 1);
  int cases = 0;
  while (cases < 60) {
    bool torsion = cases % 3 == 0;
    LatticeSpec spec = torsion ? LatticeSpec(2, {2}) : LatticeSpec(2, {});
    std::vector<LatticePoint> shifts;
    long count = n(rng);
    for (long i = 0; i < count; ++i) {
      std::vector<long> v{c(rng), c(rng)};
      if (torsion) v.push_back(tor(rng));
      shifts.push_back(spec.point(v));
    }
    std::sort(shifts.begin(), shifts.end());
    shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
    if (!std::holds_alternative<Independent>(check_znn_independence(spec, shifts))) continue;
    ShiftSystem sys(spec, shifts, 0);
    ++cases;
    for (int k = 0; k < 12; ++k) {
      std::vector<long> d{pt(rng), pt(rng)};
      if (torsion) d.push_back(tor(rng));
      LatticePoint p = spec.point(d);
      mpq_class b = -sys.pairing(p);
      int bound = b < 0 ? -1 : static_cast<int>(mpz_class(b.get_num() / b.get_den()).get_si());
      auto cert = sys.in_monoid(p);
      bool naive = bound >= 0 && naive_member(spec, shifts, p, bound);
      ASSERT_EQ(cert.has_value(), naive);
      if (cert) {
        ASSERT_TRUE(sys.check_certificate(p, *cert));
      }
    }
  }
}

TEST(OrderProperty, PartialOrderAxiomsAndTranslationInvariance) {
  LatticeSpec spec(2, {2});
  ShiftSystem sys(spec, mkdv_shifts(), 4);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> x(-3, 3), t(0, 1);
  auto rnd = [&] { return spec.point({x(rng), x(rng), t(rng)}); };
  for (int i = 0; i < 200; ++i) {
    LatticePoint a = rnd(), b = rnd(), c = rnd(), v = rnd();
    ASSERT_TRUE(sys.leq(a, a));
    if (sys.leq(a, b) && sys.leq(b, a)) {
      ASSERT_EQ(a, b);
    }
    if (sys.leq(a, b) && sys.leq(b, c)) {
      ASSERT_TRUE(sys.leq(a, c));
    }
    ASSERT_EQ(sys.leq(a, b), sys.leq(spec.add(a, v), spec.add(b, v)));
  }
}

TEST(OrderProperty, FunctionalChoiceIsUnobservable) {
  ShiftSystem sys(Z2(), kdv_shifts(), 4);
  ShiftSystem other = sys.with_functional({mpq_class(3, 2), 2});
  for (long a = -6; a <= 2; ++a)
    for (long b = -6; b <= 2; ++b) ASSERT_EQ(sys.leq({a, b}, {0, 0}), other.leq({a, b}, {0, 0}));
}

}  // namespace
}  // namespace laurentlab
