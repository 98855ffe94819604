#pragma once

// Oracles independent of the evolution engine: the exponent-matrix formula for
// the seven-term equation f_n = (f_{n-1} f_{n-6} + f_{n-3} f_{n-4}) / f_{n-7},
// its Lyness reduction, and a direct numeric recursion compared against
// evaluated symbolic iterates.

#include <array>
#include <random>

#include "laurentlab/evolution.hpp"

namespace laurentlab {

// (F0..F6, P, Q, R)
using ExponentState = std::array<long, 10>;

// Row i lists the exponents of the image of symbol i under one step. The q row
// carries the p exponent of q -> p r / f0.
inline constexpr long kExponentMatrix[10][10] = {
    {0, 1, 0, 0, 0, 0, 0, 0, 0, 0},   //
    {0, 0, 1, 0, 0, 0, 0, 0, 0, 0},   //
    {0, 0, 0, 1, 0, 0, 0, 0, 0, 0},   //
    {0, 0, 0, 0, 1, 0, 0, 0, 0, 0},   //
    {0, 0, 0, 0, 0, 1, 0, 0, 0, 0},   //
    {0, 0, 0, 0, 0, 0, 1, 0, 0, 0},   //
    {-1, 0, 0, 0, 0, 0, 0, 1, 0, 0},  //
    {-1, 0, 0, 0, 0, 0, 0, 0, 1, 0},  //
    {-1, 0, 0, 0, 0, 0, 0, 1, 0, 1},  //
    {0, 0, 0, 0, 0, 0, 0, 1, 0, 0},   //
};

// Substituting images into a monomial sends exponent vector e to A^T e.
inline ExponentState exponent_step(const ExponentState& e) {
  ExponentState out{};
  for (std::size_t k = 0; k < 10; ++k)
    for (std::size_t j = 0; j < 10; ++j) out[k] += kExponentMatrix[j][k] * e[j];
  return out;
}

inline ExponentState exponent_orbit(unsigned n) {
  ExponentState e{};
  e[0] = 1;
  for (unsigned i = 0; i < n; ++i) e = exponent_step(e);
  return e;
}

inline long max_abs_exponent(const ExponentState& e) {
  long m = 0;
  for (long x : e) m = std::max(m, x < 0 ? -x : x);
  return m;
}

struct OracleReport {
  std::string oracle;
  bool pass = false;
  std::size_t checked = 0;
  std::optional<long> first_failure;  // index or point number
  std::string detail;
  json data = json::object();

  json to_json() const {
    json j;
    j["oracle"] = oracle;
    j["verdict"] = pass ? "pass" : "fail";
    j["checked"] = checked;
    j["first_failure"] = first_failure ? json(*first_failure) : json(nullptr);
    j["detail"] = detail;
    j["data"] = data;
    return j;
  }
};

namespace detail {

inline EquationDef seven_term() {
  return parse_equation(
      "name = \"seven_term\"\n"
      "lattice = { rank = 1, torsion = [] }\n"
      "rule = \"f[0] = (f[-1]*f[-6] + f[-3]*f[-4]) / f[-7]\"\n");
}

inline Domain half_line() { return Domain::half_space(LatticeSpec(1, {}), {1}, 0); }

}  // namespace detail

// E(n) = max |exponent| of f_n. Superlinear: E(n) beats the line through the
// origin and (n/2, E(n/2)). Band: E(2n) / E(n) in [lo, hi].
struct GrowthCheck {
  long at_half = 0, at_n = 0, at_double = 0;
  double ratio = 0;
  bool superlinear = false;
  bool in_band = false;
};

inline GrowthCheck superlinearity(unsigned n, double lo = 3, double hi = 5) {
  GrowthCheck g;
  g.at_half = max_abs_exponent(exponent_orbit(n / 2));
  g.at_n = max_abs_exponent(exponent_orbit(n));
  g.at_double = max_abs_exponent(exponent_orbit(2 * n));
  g.ratio = g.at_n ? static_cast<double>(g.at_double) / static_cast<double>(g.at_n) : 0;
  g.superlinear = g.at_n * static_cast<long>(n / 2) > g.at_half * static_cast<long>(n);
  g.in_band = g.ratio >= lo && g.ratio <= hi;
  return g;
}

inline OracleReport verify_monomial_formula(unsigned n_max) {
  if (n_max < 7) throw std::invalid_argument("n_max must be at least 7");
  OracleReport rep;
  rep.oracle = "monomial_formula";
  Evolution ev(detail::seven_term(), detail::half_line());
  std::vector<LaurentPoly> s;
  for (long i = 0; i <= 6; ++i) s.push_back(LaurentPoly::var(ev.variable({i})));
  s.push_back(ev.parse("f[1]*f[6] + f[3]*f[4]"));
  s.push_back(ev.parse("f[0]*f[4]*f[5] + f[1]*f[2]*f[6] + f[2]*f[3]*f[4]"));
  s.push_back(ev.parse("f[0]*f[5] + f[2]*f[3]"));
  for (unsigned n = 7; n <= n_max; ++n) {
    ExponentState e = exponent_orbit(n);
    // f_n * prod(negative part) == prod(positive part)
    LaurentPoly lhs = std::get<LaurentPoly>(ev.at({static_cast<long>(n)}));
    LaurentPoly rhs(1);
    for (std::size_t k = 0; k < 10; ++k) {
      unsigned a = static_cast<unsigned>(e[k] < 0 ? -e[k] : e[k]);
      if (e[k] > 0) rhs = rhs * s[k].pow(a);
      if (e[k] < 0) lhs = lhs * s[k].pow(a);
    }
    ++rep.checked;
    if (!(lhs == rhs)) {
      rep.first_failure = n;
      rep.detail = "iterate differs from the exponent formula at n = " + std::to_string(n);
      return rep;
    }
  }
  GrowthCheck g = superlinearity(n_max);
  rep.data = {{"n_max", n_max},
              {"max_exponent", g.at_n},
              {"max_exponent_half", g.at_half},
              {"superlinear", g.superlinear}};
  rep.pass = g.superlinear;
  if (!rep.pass) rep.detail = "exponent growth is not superlinear";
  return rep;
}

// g_n = f_n f_{n-5} / (f_{n-2} f_{low}) with low = n-3, or n-4 for the
// negative control; checks g_n g_{n-2} = g_{n-1} + 1 after clearing
// denominators.
inline OracleReport lyness_reduction_check(unsigned n_max, bool perturbed = false) {
  if (n_max < 7) throw std::invalid_argument("n_max must be at least 7");
  OracleReport rep;
  rep.oracle = perturbed ? "lyness_reduction_perturbed" : "lyness_reduction";
  Evolution ev(detail::seven_term(), detail::half_line());
  auto f = [&](long n) { return std::get<LaurentPoly>(ev.at({n})); };
  auto g = [&](long n) {
    return std::make_pair(f(n) * f(n - 5), f(n - 2) * f(perturbed ? n - 4 : n - 3));
  };
  for (long n = 7; n <= static_cast<long>(n_max); ++n) {
    auto [a0, b0] = g(n);
    auto [a1, b1] = g(n - 1);
    auto [a2, b2] = g(n - 2);
    ++rep.checked;
    if (!(a0 * a2 * b1 == (a1 + b1) * b0 * b2)) {
      rep.first_failure = n;
      rep.detail = "relation fails at n = " + std::to_string(n);
      return rep;
    }
  }
  rep.pass = true;
  return rep;
}

// Evaluated symbolic iterates against the direct recursion on random nonzero
// rational boundary data; singular draws are redrawn.
inline OracleReport numeric_consistency(Evolution& ev, const std::vector<LatticePoint>& window, std::uint64_t seed,
                                        int max_retries = 20) {
  OracleReport rep;
  rep.oracle = "numeric_consistency";
  const EquationDef& eq = ev.equation();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-40, 40), den(1, 15);
  auto draw = [&] {
    long n = 0;
    while (n == 0) n = num(rng);
    mpq_class q(n, den(rng));
    q.canonicalize();
    return q;
  };
  ev.register_boundary(window);
  std::vector<LaurentPoly> sym;
  for (const auto& h : window) {
    IterateResult r = ev.at(h);
    if (!is_laurent(r)) throw std::invalid_argument("window contains a non-Laurent iterate at " + eq.point_text(h));
    sym.push_back(std::get<LaurentPoly>(r));
  }
  std::size_t singular = 0;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    std::map<LatticePoint, mpq_class> data;
    auto boundary = [&](const LatticePoint& p) {
      auto it = data.find(p);
      if (it == data.end()) it = data.emplace(p, draw()).first;
      return it->second;
    };
    std::map<std::string, mpq_class> params;
    for (const auto& p : eq.params) params[p] = draw();
    auto direct = numeric_recursion(eq, ev.domain(), window, boundary, params);
    if (!direct) {
      ++singular;
      continue;
    }
    Assignment at;
    for (const auto& [p, v] : data) at[ev.variable(p)] = v;
    for (const auto& [name, v] : params) at[*ev.table().find(name)] = v;
    for (std::size_t i = 0; i < window.size(); ++i) {
      ++rep.checked;
      if (evaluate(sym[i], at) != direct->at(window[i])) {
        rep.first_failure = static_cast<long>(i);
        rep.detail = "mismatch at " + eq.point_text(window[i]);
        rep.data = {{"singular_draws", singular}, {"seed", seed}};
        return rep;
      }
    }
    rep.pass = true;
    rep.data = {{"singular_draws", singular}, {"seed", seed}};
    return rep;
  }
  rep.detail = "retry budget exhausted";
  rep.data = {{"singular_draws", singular}, {"seed", seed}};
  return rep;
}

}  // namespace laurentlab
