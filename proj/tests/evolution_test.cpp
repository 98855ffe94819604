#include <gtest/gtest.h>

#include <random>

#include "laurentlab/evolution.hpp"
#include "test_util.hpp"

namespace laurentlab {
namespace {

using testing::fixture;

Domain nonneg_line() { return Domain::half_space(LatticeSpec(1, {}), {1}, 0); }
Domain quadrant() {
  LatticeSpec z2(2, {});
  return Domain::intersection({Domain::half_space(z2, {1, 0}, 0), Domain::half_space(z2, {0, 1}, 0)});
}

TEST(Config, TomlSubset) {
  json j = parse_config(R"(# comment
name = "x"   # trailing
n = -12
flag = true
list = [1, 2,
        3,]
tbl = { a = [[1, 2], [3]], "quoted key" = "v\"q" }
[run]
seed = 7
[run.inner]
k = false
)");
  EXPECT_EQ(j["name"], "x");
  EXPECT_EQ(j["n"], -12);
  EXPECT_EQ(j["flag"], true);
  EXPECT_EQ(j["list"], json::array({1, 2, 3}));
  EXPECT_EQ(j["tbl"]["a"][0][1], 2);
  EXPECT_EQ(j["tbl"]["quoted key"], "v\"q");
  EXPECT_EQ(j["run"]["seed"], 7);
  EXPECT_EQ(j["run"]["inner"]["k"], false);
}

TEST(Config, ErrorsCarryLines) {
  try {
    parse_config("a = 1\nb = [1, 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_GE(e.line, 2u);
  }
  EXPECT_THROW(parse_config("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("a = \"open\n"), ConfigError);
  EXPECT_THROW(parse_config("a = 1 b\n"), ConfigError);
  EXPECT_EQ(parse_config(R"({"a": [1, 2]})")["a"][1], 2);
}

TEST(ParseEquation, Kdv) {
  EquationDef eq = fixture("dkdv");
  ASSERT_EQ(eq.N(), 5u);
  std::vector<LatticePoint> expected{{-2, 0}, {0, -1}, {-1, 0}, {-1, -1}, {-2, -1}};
  EXPECT_EQ(eq.shifts, expected);
  EXPECT_EQ(eq.min_index(), 4u);
  EXPECT_TRUE(eq.minimum_found);
  EXPECT_EQ(eq.Q, Monomial::var(EquationDef::y(4)));
  EXPECT_EQ(eq.rule_text(), "f[0,0] = (a)*f[-2,0]*f[0,-1]*f[-2,-1]^-1 + (b)*f[-1,0]*f[-1,-1]*f[-2,-1]^-1");
}

TEST(ParseEquation, LynessAndFrames) {
  EquationDef ly = fixture("lyness_r1");
  EXPECT_EQ(ly.N(), 2u);
  EquationDef toda = fixture("toda50");
  EXPECT_EQ(toda.N(), 5u);
  EXPECT_EQ(toda.point_text(toda.shifts[0]), "f[-1,1,0]");
  EXPECT_EQ(toda.point_text(toda.system().minimum()), "f[-2,0,0]");
  EXPECT_EQ(fixture("higher").point_text(fixture("higher").system().minimum()), "f[-4,0]");
}

TEST(ParseEquation, Errors) {
  auto doc = [](const std::string& rule) {
    return "lattice = { rank = 2, torsion = [] }\nparams = [\"a\"]\nrule = \"" + rule + "\"\n";
  };
  EXPECT_THROW(parse_equation(doc("f[0,0] = /f[0,0]")), ParseError);
  EXPECT_THROW(parse_equation(doc("f[0,0] = f[0,0] + f[-1,0]")), ParseError);
  EXPECT_THROW(parse_equation(doc("f[-1,0] = f[0,-1] + 1")), ParseError);
  EXPECT_THROW(parse_equation(doc("f[0,0] = g[-1,0]")), ParseError);
  EXPECT_THROW(parse_equation(doc("f[0,0] = c*f[-1,0]")), ParseError);
  EXPECT_THROW(parse_equation(doc("f[0,0] = f[-1]")), ParseError);
  EXPECT_THROW(parse_equation(doc("f[0,0] = (f[-1,0] + 1)/(f[0,-1] + 1)")), ParseError);
  EXPECT_THROW(parse_equation("lattice = { rank = 3, torsion = [], basis = [[2,0,0],[1,1,0],[1,0,1]] }\n"
                              "rule = \"f[0,0,0] = f[-1,0,0] + 1\"\n"),
               ParseError);
  EXPECT_THROW(parse_equation("rule = \"f[0] = f[-1]\"\n"), ConfigError);
}

TEST(ParseEquation, TextRoundTrip) {
  for (const char* name : {"dkdv", "dmkdv", "toda50", "higher", "hirota7", "lyness_r2"}) {
    EquationDef eq = fixture(name);
    EquationDef back = parse_equation(equation_to_text(eq));
    EXPECT_EQ(back.shifts, eq.shifts) << name;
    EXPECT_EQ(back.phi, eq.phi) << name;
    EXPECT_EQ(equation_to_text(back), equation_to_text(eq)) << name;
  }
}

TEST(Validate, FixturesPass) {
  for (const char* name : {"dkdv", "dmkdv", "toda50", "higher", "hirota7", "hirota_ab", "lyness_r1", "lyness_r2"}) {
    AssumptionReport rep = validate_equation(fixture(name));
    for (const auto& i : rep.items)
      EXPECT_EQ(i.status, AssumptionItem::Status::Pass) << name << ": " << i.name << " " << i.detail;
  }
}

TEST(Validate, Failures) {
  AssumptionReport r3 = validate_equation(fixture("lyness_r3"));
  EXPECT_EQ(r3.item("rule-irreducible").status, AssumptionItem::Status::Fail);

  auto eq = parse_equation("lattice = { rank = 2, torsion = [] }\nrule = \"f[0,0] = (f[-1,0] + 1) / f[0,-1]\"\n");
  AssumptionReport nomin = validate_equation(eq);
  EXPECT_EQ(nomin.item("minimum-shift").status, AssumptionItem::Status::Fail);
  EXPECT_FALSE(nomin.passed());

  auto dep = parse_equation("lattice = { rank = 1, torsion = [] }\nrule = \"f[0] = f[1] + f[-1]\"\n");
  EXPECT_EQ(validate_equation(dep).item("independent").status, AssumptionItem::Status::Fail);
  EXPECT_THROW(dep.system(), EquationError);

  auto mono = parse_equation("lattice = { rank = 1, torsion = [] }\nrule = \"f[0] = f[-1]*f[-2]^-1\"\n");
  EXPECT_EQ(validate_equation(mono).item("rule-not-monomial").status, AssumptionItem::Status::Fail);

  auto sparse = parse_equation("lattice = { rank = 1, torsion = [] }\nrule = \"f[0] = (f[-1] + 1) / f[-2]\"\n");
  EXPECT_EQ(validate_equation(sparse).item("shifts-generate").status, AssumptionItem::Status::Pass);
  auto even = parse_equation("lattice = { rank = 1, torsion = [] }\nrule = \"f[0] = (f[-2] + 1) / f[-4]\"\n");
  EXPECT_EQ(validate_equation(even).item("shifts-generate").status, AssumptionItem::Status::Fail);
}

TEST(Backward, Kdv) {
  EquationDef eq = fixture("dkdv");
  BackwardResult b = solve_backward(eq);
  ASSERT_TRUE(b.ok()) << b.error;
  EXPECT_EQ(b.method, "inverse");
  EXPECT_EQ(to_string(*b.psi, eq.table),
            "(a)*f[-2,0]*f[0,-1]*f[0,0]^-1 + (b)*f[-1,0]*f[-1,-1]*f[0,0]^-1");
}

TEST(Backward, HigherIsLinear) {
  EquationDef eq = fixture("higher");
  BackwardResult b = solve_backward(eq);
  ASSERT_TRUE(b.ok()) << b.error;
  EXPECT_EQ(b.method, "linear");
  // Coefficient of f[0,0] is -F_{t-3} / F_{t-1}.
  Exponent low = 0;
  auto cs = coefficients_in(*b.psi, eq.z(), &low);
  ASSERT_EQ(low, 0);
  ASSERT_EQ(cs.size(), 2u);
  VarTable& t = eq.table;
  EXPECT_EQ(cs[1], parse_poly("-f[-3,1]^2*f[-3,-1]^2*f[-1,1]^-2*f[-1,-1]^-2", t));
}

TEST(Backward, UnsupportedAndUser) {
  auto quad = parse_equation("lattice = { rank = 1, torsion = [] }\nrule = \"f[0] = f[-1] + f[-2]^2\"\n");
  BackwardResult b = solve_backward(quad);
  EXPECT_FALSE(b.ok());
  EXPECT_NE(b.error.find("NoAutoSolve"), std::string::npos);

  std::string kdv = read_file(testing::fixture_path("dkdv"));
  auto good = parse_equation(kdv + "backward = \"(a*f[-2,0]*f[0,-1] + b*f[-1,0]*f[-1,-1]) / f[0,0]\"\n");
  BackwardResult g = solve_backward(good);
  EXPECT_TRUE(g.ok());
  EXPECT_EQ(g.method, "user");
  auto bad = parse_equation(kdv + "backward = \"(a*f[-2,0]*f[0,-1] - b*f[-1,0]*f[-1,-1]) / f[0,0]\"\n");
  EXPECT_NE(solve_backward(bad).error.find("RoundTripFailed"), std::string::npos);
  EXPECT_THROW(parse_equation(kdv + "backward = \"f[-2,-1]\"\n"), ParseError);
}

TEST(Iterate, SevenTermFixture) {
  Evolution ev(fixture("hirota7"), nonneg_line());
  auto f = [&](long n) { return std::get<LaurentPoly>(ev.at({n})); };
  EXPECT_EQ(f(7), ev.parse("(f[1]*f[6] + f[3]*f[4]) / f[0]"));
  EXPECT_EQ(f(8), ev.parse("(f[0]*f[4]*f[5] + f[1]*f[2]*f[6] + f[2]*f[3]*f[4]) / (f[0]*f[1])"));
  EXPECT_EQ(f(9), ev.parse("(f[0]*f[5] + f[2]*f[3])*(f[1]*f[6] + f[3]*f[4]) / (f[0]*f[1]*f[2])"));
  EXPECT_EQ(f(3), ev.parse("f[3]"));
  EXPECT_EQ(ev.support({7}), (std::set<LatticePoint>{{0}, {1}, {3}, {4}, {6}}));
  EXPECT_EQ(ev.support({2}), (std::set<LatticePoint>{{2}}));
  EXPECT_THROW(ev.at({-1}), DomainError);
}

TEST(Iterate, LynessPeriodFive) {
  Evolution ev(fixture("lyness_r1"), nonneg_line());
  for (long n = 0; n <= 10; ++n) EXPECT_EQ(std::get<LaurentPoly>(ev.at({n + 5})), std::get<LaurentPoly>(ev.at({n})));
  EXPECT_EQ(std::get<LaurentPoly>(ev.at({5})), ev.parse("f[0]"));
}

TEST(Iterate, NonLaurentWitness) {
  auto eq = parse_equation("lattice = { rank = 1, torsion = [] }\nrule = \"f[0] = (f[-1] + f[-2]) / f[-3]\"\n");
  Evolution ev(eq, nonneg_line());
  EXPECT_TRUE(is_laurent(ev.at({5})));
  IterateResult r = ev.at({8});
  ASSERT_FALSE(is_laurent(r));
  const NonLaurent& nl = std::get<NonLaurent>(r);
  EXPECT_EQ(nl.at, LatticePoint({6}));
  // Independent confirmation: the reduced fraction keeps a non-monomial denominator.
  RationalFunction q = RationalFunction(nl.numerator, nl.divisor).reduced();
  EXPECT_FALSE(q.den().is_monomial());
  EXPECT_FALSE(q.as_laurent());
}

TEST(Iterate, KdvSupportLemma) {
  EquationDef eq = fixture("dkdv");
  Evolution ev(eq, quadrant());
  for (long m = 0; m <= 4; ++m)
    for (long n = 0; n <= 3; ++n) {
      LatticePoint h{m, n};
      ASSERT_TRUE(is_laurent(ev.at(h)));
      for (const auto& b : ev.support(h)) {
        EXPECT_TRUE(ev.on_boundary(b));
        EXPECT_TRUE(eq.system().leq(b, h));
      }
    }
  auto s = ev.support({2, 1});
  for (const auto& b : s) EXPECT_TRUE(b[0] <= 2 && b[1] <= 1);
}

TEST(Iterate, OrderIndependence) {
  EquationDef eq = fixture("dkdv");
  std::vector<LatticePoint> pts;
  for (long m = 0; m <= 4; ++m)
    for (long n = 0; n <= 4; ++n) pts.push_back({m, n});
  Evolution a(eq, quadrant()), b(eq, quadrant());
  a.register_boundary(pts);
  b.register_boundary(pts);
  for (const auto& p : pts) a.at(p);
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) b.at(*it);
  for (const auto& p : pts) EXPECT_EQ(std::get<LaurentPoly>(a.at(p)), std::get<LaurentPoly>(b.at(p)));
}

// Direct rational recursion of the KdV rule against evaluation of the
// symbolic iterates at the same boundary data.
TEST(IterateProperty, KdvNumericConsistency) {
  EquationDef eq = fixture("dkdv");
  Evolution ev(eq, quadrant());
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  Var a = *ev.table().find("a"), b = *ev.table().find("b");
  int cases = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::map<LatticePoint, mpq_class> value;
    auto draw = [&] {
      long n = 0;
      while (n == 0) n = num(rng);
      mpq_class q(n, den(rng));
      q.canonicalize();
      return q;
    };
    mpq_class av = draw(), bv = draw();
    Assignment at{{a, av}, {b, bv}};
    bool singular = false;
    for (long m = 0; m <= 4 && !singular; ++m)
      for (long n = 0; n <= 4 && !singular; ++n) {
        LatticePoint h{m, n};
        if (ev.on_boundary(h)) {
          value[h] = draw();
          at[ev.variable(h)] = value[h];
          continue;
        }
        mpq_class d = value.at({m - 2, n - 1});
        mpq_class x = (av * value.at({m - 2, n}) * value.at({m, n - 1}) + bv * value.at({m - 1, n}) * value.at({m - 1, n - 1})) / d;
        if (x == 0) singular = true;
        value[h] = x;
      }
    if (singular) continue;
    for (const auto& [h, v] : value) {
      ASSERT_EQ(evaluate(std::get<LaurentPoly>(ev.at(h)), at), v) << format_point(h);
      ++cases;
    }
  }
  EXPECT_GE(cases, 500);
}

}  // namespace
}  // namespace laurentlab
