#include <gtest/gtest.h>

#include <random>

#include "laurentlab/domain.hpp"

namespace laurentlab {
namespace {

LatticeSpec Z2() { return LatticeSpec(2, {}); }
LatticeSpec Z1() { return LatticeSpec(1, {}); }

ShiftSystem kdv() { return ShiftSystem(Z2(), {{-2, 0}, {0, -1}, {-1, 0}, {-1, -1}, {-2, -1}}, 4); }
// f_n = (a f_{n-2} f_{n-5} + b f_{n-3} f_{n-4}) / f_{n-7}
ShiftSystem hirota1d() { return ShiftSystem(Z1(), {{-2}, {-5}, {-3}, {-4}, {-7}}, 4); }
ShiftSystem lyness() { return ShiftSystem(Z1(), {{-1}, {-2}}, 1); }

Domain quadrant() {
  return Domain::intersection({Domain::half_space(Z2(), {1, 0}, 0), Domain::half_space(Z2(), {0, 1}, 0)});
}

// Quadrant with (0,0) and (1,0) removed.
Domain staircase() {
  ShiftSystem sys = kdv();
  return mutate(sys, mutate(sys, quadrant(), {0, 0}), {1, 0});
}

Domain zero_and_from_two() {
  return Domain::custom(Z1(), "{0} u {n>=2}", [](const LatticePoint& p) { return p[0] == 0 || p[0] >= 2; }, false);
}

TEST(Contains, Examples) {
  EXPECT_TRUE(quadrant().contains({0, 0}));
  EXPECT_FALSE(quadrant().contains({-1, 3}));
  EXPECT_FALSE(zero_and_from_two().contains({1}));
  Domain cone = Domain::future_cones(kdv(), {{0, 0}});
  EXPECT_TRUE(cone.contains({2, 3}));
  EXPECT_FALSE(cone.contains({-1, 3}));
  EXPECT_THROW(quadrant().contains({1}), LatticeError);
}

TEST(Contains, FutureConeOfZeroIsTheHirotaDomain) {
  Domain cone = Domain::future_cones(hirota1d(), {{0}});
  for (long n = -5; n <= 30; ++n) EXPECT_EQ(cone.contains({n}), zero_and_from_two().contains({n})) << n;
}

TEST(Contains, TranslateAndLift) {
  Domain t = Domain::translate(quadrant(), {-6, -3});
  EXPECT_TRUE(t.contains({-3, -3}));
  EXPECT_FALSE(t.contains({-7, 0}));
  LatticeMap phi = LatticeMap::from_matrix(Z2(), Z1(), {{2, 3}});
  Domain lifted = Domain::lift(phi, Domain::half_space(Z1(), {1}, 0));
  EXPECT_TRUE(lifted.contains({3, -2}));
  EXPECT_FALSE(lifted.contains({-2, 1}));
  LatticeSpec torsion(2, {2});
  LatticeMap forget = LatticeMap::from_matrix(torsion, Z2(), {{1, 0}, {0, 1}}, {{0, 0}});
  Domain sheets = Domain::lift(forget, quadrant());
  EXPECT_TRUE(sheets.contains({1, 2, 0}));
  EXPECT_TRUE(sheets.contains({1, 2, 1}));
  EXPECT_FALSE(sheets.contains({-1, 2, 1}));
}

TEST(InitialBoundary, HirotaDomain) {
  ShiftSystem sys = hirota1d();
  Domain H = zero_and_from_two();
  std::vector<long> boundary;
  for (long n = -3; n <= 20; ++n)
    if (initial_boundary_contains(sys, H, {n})) boundary.push_back(n);
  EXPECT_EQ(boundary, (std::vector<long>{0, 2, 3, 4, 5, 6, 8}));
  // Points where the recursion actually runs: {7} and everything from 9 on.
  for (long n = 0; n <= 40; ++n) {
    bool interior = H.contains({n}) && !initial_boundary_contains(sys, H, {n});
    EXPECT_EQ(interior, n == 7 || n >= 9) << n;
    EXPECT_EQ(initial_boundary_contains(sys, H, {n}), initial_boundary_contains_any(sys, H, {n})) << n;
  }
  EXPECT_FALSE(initial_boundary_contains(sys, H, {1}));
}

TEST(InitialBoundary, KdvQuadrant) {
  ShiftSystem sys = kdv();
  EXPECT_TRUE(initial_boundary_contains(sys, quadrant(), {0, 0}));
  EXPECT_TRUE(initial_boundary_contains(sys, quadrant(), {1, 5}));
  EXPECT_TRUE(initial_boundary_contains(sys, quadrant(), {5, 0}));
  EXPECT_FALSE(initial_boundary_contains(sys, quadrant(), {2, 1}));
  EXPECT_FALSE(initial_boundary_contains(sys, quadrant(), {-1, 0}));
}

TEST(PastConeTest, Examples) {
  ShiftSystem sys = kdv();
  PastCone pc = past_cone(sys, quadrant(), {1, 1});
  std::set<LatticePoint> got(pc.points.begin(), pc.points.end());
  EXPECT_EQ(got, (std::set<LatticePoint>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(pc.points.back(), LatticePoint({1, 1}));
  EXPECT_EQ(past_cone(sys, quadrant(), {0, 0}).size(), 1u);
  EXPECT_THROW(past_cone(sys, quadrant(), {-1, 0}), DomainError);
}

TEST(PastConeTest, TopologicalOrder) {
  ShiftSystem sys = kdv();
  PastCone pc = past_cone(sys, quadrant(), {4, 3});
  for (std::size_t i = 0; i < pc.size(); ++i)
    for (const auto& v : sys.shifts()) {
      LatticePoint q = sys.spec().add(pc.points[i], v);
      auto it = std::find(pc.points.begin(), pc.points.end(), q);
      if (it != pc.points.end()) {
        EXPECT_LT(static_cast<std::size_t>(it - pc.points.begin()), i);
      }
    }
}

TEST(DTest, FigureOneStaircase) {
  ShiftSystem sys = kdv();
  Domain H = staircase();
  EXPECT_EQ(d(sys, H, {3, 3}), 14u);
  EXPECT_TRUE(minimal_in(sys, H, {0, 1}));
  EXPECT_FALSE(minimal_in(sys, H, {3, 3}));
  Domain H2 = mutate(sys, H, {0, 1});
  EXPECT_EQ(d(sys, H2, {3, 3}), 13u);
  EXPECT_EQ(d(sys, H, {0, 1}), 1u);
}

TEST(DTest, FigureOneBoundaryUpdate) {
  ShiftSystem sys = kdv();
  Domain H = staircase();
  LatticePoint h0{0, 1};
  Domain H2 = mutate(sys, H, h0);
  LatticePoint extra = sys.spec().sub(h0, sys.minimum());
  EXPECT_EQ(extra, LatticePoint({2, 2}));
  for (const auto& p : Box{{-2, -2}, {7, 7}}.points(Z2())) {
    bool expected = (initial_boundary_contains(sys, H, p) && p != h0) || p == extra;
    EXPECT_EQ(initial_boundary_contains(sys, H2, p), expected) << format_point(p);
  }
}

TEST(Mutate, RejectsNonMinimal) {
  ShiftSystem sys = kdv();
  try {
    mutate(sys, staircase(), {3, 3});
    FAIL();
  } catch (const NotMinimal& e) {
    EXPECT_TRUE(sys.leq(e.witness, {3, 3}));
    EXPECT_TRUE(staircase().contains(e.witness));
  }
  Domain single = Domain::future_cones(sys, {{2, 2}});
  EXPECT_TRUE(minimal_in(sys, single, {2, 2}));
}

TEST(Regularity, Examples) {
  ShiftSystem sys = kdv();
  EXPECT_EQ(validate_regular(sys, quadrant(), {}).kind, RegularityReport::Kind::StructurallyRegular);
  EXPECT_EQ(validate_regular(sys, staircase(), {}).kind, RegularityReport::Kind::StructurallyRegular);
  // {m >= 0} alone has infinite past cones along n.
  EXPECT_NE(validate_regular(sys, Domain::half_space(Z2(), {1, 0}, 0), {}).kind,
            RegularityReport::Kind::StructurallyRegular);
  EXPECT_EQ(validate_regular(sys, Domain::half_space(Z2(), {1, 1}, 0), {}).kind,
            RegularityReport::Kind::StructurallyRegular);

  auto window = Box{{-3}, {30}}.points(Z1());
  RegularityReport ok = validate_regular(hirota1d(), zero_and_from_two(), window);
  EXPECT_EQ(ok.kind, RegularityReport::Kind::SampledRegular);
  EXPECT_FALSE(ok.conclusive());
  RegularityReport bad = validate_regular(lyness(), zero_and_from_two(), window);
  ASSERT_EQ(bad.kind, RegularityReport::Kind::Violation);
  EXPECT_EQ(bad.witness->first, LatticePoint({0}));
  EXPECT_EQ(bad.witness->second, LatticePoint({1}));
}

TEST(Regularity, LiftedHalfLine) {
  ShiftSystem sys = kdv();
  LatticeMap phi = LatticeMap::from_matrix(Z2(), Z1(), {{2, 3}});
  Domain lifted = Domain::lift(phi, Domain::half_space(Z1(), {1}, 0));
  EXPECT_EQ(validate_regular(sys, lifted, {}).kind, RegularityReport::Kind::StructurallyRegular);
  Domain sampled = Domain::custom(Z2(), "2m+3n>=0", [](const LatticePoint& p) { return 2 * p[0] + 3 * p[1] >= 0; }, true);
  EXPECT_EQ(validate_regular(sys, sampled, Box{{-6, -6}, {6, 6}}.points(Z2())).kind,
            RegularityReport::Kind::SampledRegular);
}

TEST(TranslationEmbedding, Examples) {
  ShiftSystem sys = kdv();
  EXPECT_EQ(translation_embedding(sys, {{-3, -3}}, quadrant()), 3);
  EXPECT_EQ(translation_embedding(sys, {{0, 0}, {4, 1}}, quadrant()), 0);
  ShiftSystem seven(Z1(), {{-1}, {-6}, {-3}, {-4}, {-7}}, 4);
  EXPECT_EQ(translation_embedding(seven, {{-20}}, Domain::half_space(Z1(), {1}, 0)), 3);
}

TEST(WindowTest, MaxDOnQuadrant) {
  ShiftSystem sys = kdv();
  auto pts = window_points(sys, quadrant(), Box{{0, 0}, {12, 12}}, 6);
  for (const auto& p : pts) EXPECT_LE((p[0] + 1) * (p[1] + 1), 6);
  std::size_t expected = 0;
  for (long m = 0; m <= 12; ++m)
    for (long n = 0; n <= 12; ++n)
      if ((m + 1) * (n + 1) <= 6) ++expected;
  EXPECT_EQ(pts.size(), expected);
}

// Random mutation sequences on the quadrant, checked against brute force.
TEST(DomainProperty, MutationSequences) {
  ShiftSystem sys = kdv();
  std::mt19937_64 rng(77);
  Box box{{-3, -3}, {7, 7}};
  auto pts = box.points(Z2());
  for (int trial = 0; trial < 40; ++trial) {
    Domain H = quadrant();
    int steps = static_cast<int>(rng() % 5);
    for (int s = 0; s <= steps; ++s) {
      std::vector<LatticePoint> minimal;
      for (const auto& p : Box{{0, 0}, {4, 4}}.points(Z2()))
        if (H.contains(p) && minimal_in(sys, H, p)) minimal.push_back(p);
      ASSERT_FALSE(minimal.empty());
      LatticePoint h0 = minimal[rng() % minimal.size()];
      Domain H2 = mutate(sys, H, h0);
      LatticePoint extra = sys.spec().sub(h0, sys.minimum());
      for (const auto& p : pts) {
        bool expected = (initial_boundary_contains(sys, H, p) && p != h0) || p == extra;
        ASSERT_EQ(initial_boundary_contains(sys, H2, p), expected);
        // v_N form against the "some shift leaves H" form
        ASSERT_EQ(initial_boundary_contains(sys, H2, p), initial_boundary_contains_any(sys, H2, p));
      }
      H = H2;
    }
    // past cones against naive enumeration, and monotonicity of d
    for (int k = 0; k < 5; ++k) {
      LatticePoint h{static_cast<long>(rng() % 6), static_cast<long>(rng() % 6)};
      if (!H.contains(h)) continue;
      std::set<LatticePoint> naive;
      for (const auto& p : Box{{-1, -1}, {6, 6}}.points(Z2()))
        if (H.contains(p) && sys.leq(p, h)) naive.insert(p);
      PastCone pc = past_cone(sys, H, h);
      ASSERT_EQ(std::set<LatticePoint>(pc.points.begin(), pc.points.end()), naive);
      for (const auto& p : pc.points)
        if (p != h) {
          ASSERT_LT(d(sys, H, p), pc.size());
        }
    }
  }
}

// Condition (2) on random structural domains: members' successors stay inside.
TEST(DomainProperty, StructuralDomainsAreUpwardClosed) {
  ShiftSystem sys = kdv();
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> c(-3, 3), wv(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    Domain H = Domain::half_space(Z2(), {wv(rng), wv(rng)}, c(rng));
    if (trial % 2) H = Domain::translate(H, {c(rng), c(rng)});
    ASSERT_EQ(validate_regular(sys, H, {}).kind, RegularityReport::Kind::StructurallyRegular);
    for (const auto& p : Box{{-4, -4}, {4, 4}}.points(Z2())) {
      if (!H.contains(p)) continue;
      for (const auto& v : sys.shifts()) ASSERT_TRUE(H.contains(sys.spec().sub(p, v)));
    }
  }
}

}  // namespace
}  // namespace laurentlab
