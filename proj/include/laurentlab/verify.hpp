#pragma once

// Verification campaigns on finite windows: Laurent property, unit
// classification against the initial boundary, pairwise coprimeness and
// irreducibility, plus a cross-domain comparison. Work is spread over
// `jobs` threads; results are stored per index so the report does not
// depend on scheduling.

#include <atomic>
#include <chrono>
#include <exception>
#include <set>
#include <thread>

#include "laurentlab/evolution.hpp"
#include "laurentlab/irreducible.hpp"

namespace laurentlab {

inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < std::min<std::size_t>(jobs, n); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

enum class Verdict { Pass, Fail, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

struct LaurentSection {
  std::size_t checked = 0;
  std::vector<NonLaurent> failures;  // one per failing point, sorted by point
  Verdict verdict() const { return failures.empty() ? Verdict::Pass : Verdict::Fail; }
};

struct UnitsSection {
  std::size_t checked = 0;
  std::size_t boundary_units = 0;
  std::vector<LatticePoint> unit_off_boundary;
  std::vector<LatticePoint> nonunit_on_boundary;
  bool exact() const { return unit_off_boundary.empty() && nonunit_on_boundary.empty(); }
  Verdict verdict() const { return exact() ? Verdict::Pass : Verdict::Fail; }
};

struct CommonFactor {
  LatticePoint a, b;
  LaurentPoly gcd;
};

struct CoprimeSection {
  std::size_t pairs = 0;
  std::vector<CommonFactor> failures;
  Verdict verdict() const { return failures.empty() ? Verdict::Pass : Verdict::Fail; }
};

struct IrreducibleSection {
  std::vector<std::pair<LatticePoint, IrreducibilityVerdict>> points;
  std::size_t count(IrreducibilityVerdict::Kind k) const {
    std::size_t n = 0;
    for (const auto& [p, v] : points) n += v.kind == k;
    return n;
  }
  Verdict verdict() const {
    if (count(IrreducibilityVerdict::Kind::Reducible)) return Verdict::Fail;
    if (count(IrreducibilityVerdict::Kind::Unknown)) return Verdict::Unknown;
    return Verdict::Pass;
  }
};

struct VerifyOptions {
  std::set<std::string> properties{"laurent", "units", "coprime", "irreducible"};
  int trials = 20;
  int degree_cap = 12;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

struct VerificationReport {
  std::string equation;
  std::string domain;
  std::vector<LatticePoint> window;
  VerifyOptions options;
  std::optional<LaurentSection> laurent;
  std::optional<UnitsSection> units;
  std::optional<CoprimeSection> coprime;
  std::optional<IrreducibleSection> irreducible;
  std::vector<LatticePoint> out_of_scope;  // NonLaurent points, skipped by the other sections
  double seconds = 0;

  std::map<std::string, Verdict> verdicts() const {
    std::map<std::string, Verdict> out;
    if (laurent) out["laurent"] = laurent->verdict();
    if (units) out["units"] = units->verdict();
    if (coprime) out["coprime"] = coprime->verdict();
    if (irreducible) out["irreducible"] = irreducible->verdict();
    return out;
  }

  Verdict overall(bool allow_unknown = false) const {
    Verdict v = Verdict::Pass;
    for (const auto& [k, x] : verdicts()) {
      if (x == Verdict::Fail) return Verdict::Fail;
      if (x == Verdict::Unknown && !allow_unknown) v = Verdict::Unknown;
    }
    return v;
  }
};

// Evaluates every window point first, then runs the requested sections.
inline VerificationReport verify(Evolution& ev, std::vector<LatticePoint> window, const VerifyOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& p : opt.properties)
    if (p != "laurent" && p != "units" && p != "coprime" && p != "irreducible")
      throw std::invalid_argument("unknown property '" + p + "'");
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());

  VerificationReport rep;
  rep.equation = ev.equation().name;
  rep.domain = ev.domain().describe();
  rep.window = window;
  rep.options = opt;

  ev.register_boundary(window);
  // Sequential in past-cone order keeps each computation's inputs ready; the
  // per-point work after this is independent.
  std::vector<IterateResult> it(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) it[i] = ev.at(window[i]);

  std::vector<std::size_t> good;
  LaurentSection ls;
  ls.checked = window.size();
  std::map<LatticePoint, NonLaurent> origins;  // failures are inherited by later points
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (auto* nl = std::get_if<NonLaurent>(&it[i])) {
      rep.out_of_scope.push_back(window[i]);
      origins.emplace(nl->at, *nl);
    } else {
      good.push_back(i);
    }
  }
  for (auto& [p, nl] : origins) ls.failures.push_back(std::move(nl));
  if (opt.properties.count("laurent")) rep.laurent = ls;
  auto poly = [&](std::size_t i) -> const LaurentPoly& { return std::get<LaurentPoly>(it[i]); };

  if (opt.properties.count("units")) {
    UnitsSection us;
    for (std::size_t i : good) {
      bool unit = poly(i).is_unit(), bd = ev.on_boundary(window[i]);
      ++us.checked;
      if (unit && bd) ++us.boundary_units;
      if (unit && !bd) us.unit_off_boundary.push_back(window[i]);
      if (!unit && bd) us.nonunit_on_boundary.push_back(window[i]);
    }
    rep.units = us;
  }

  if (opt.properties.count("coprime")) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < good.size(); ++x)
      for (std::size_t y = x + 1; y < good.size(); ++y) pairs.push_back({good[x], good[y]});
    std::vector<std::optional<LaurentPoly>> g(pairs.size());
    parallel_for(pairs.size(), opt.jobs, [&](std::size_t k) {
      const LaurentPoly& a = poly(pairs[k].first);
      const LaurentPoly& b = poly(pairs[k].second);
      if (a.is_unit() || b.is_unit()) return;
      LaurentPoly c = gcd(a, b);
      if (!c.is_unit()) g[k] = std::move(c);
    });
    CoprimeSection cs;
    cs.pairs = pairs.size();
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (g[k]) cs.failures.push_back({window[pairs[k].first], window[pairs[k].second], *g[k]});
    rep.coprime = cs;
  }

  if (opt.properties.count("irreducible")) {
    IrreducibleSection is;
    is.points.resize(good.size());
    parallel_for(good.size(), opt.jobs, [&](std::size_t k) {
      IrreducibilityOptions io;
      io.trials = opt.trials;
      io.degree_cap = opt.degree_cap;
      io.seed = opt.seed + 7919 * k;
      is.points[k] = {window[good[k]], certify_irreducible(poly(good[k]), io)};
    });
    rep.irreducible = std::move(is);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Re-derives each certificate in the report from scratch.
inline std::vector<std::string> recheck(Evolution& ev, const VerificationReport& rep) {
  std::vector<std::string> problems;
  auto txt = [&](const LatticePoint& p) { return ev.equation().point_text(p); };
  if (rep.laurent)
    for (const auto& nl : rep.laurent->failures)
      if (!std::holds_alternative<NotDivisible>(exact_div(nl.numerator, nl.divisor)))
        problems.push_back("witness at " + txt(nl.at) + " divides");
  auto get = [&](const LatticePoint& p) { return std::get<LaurentPoly>(ev.at(p)); };
  if (rep.coprime)
    for (const auto& f : rep.coprime->failures)
      if (f.gcd.is_unit() || !divides(f.gcd, get(f.a)) || !divides(f.gcd, get(f.b)))
        problems.push_back("common factor of " + txt(f.a) + ", " + txt(f.b) + " does not check");
  if (rep.irreducible)
    for (const auto& [p, v] : rep.irreducible->points) {
      LaurentPoly f = get(p);
      bool proper = false;
      if (v.reducible() && !v.factor.is_unit()) {
        DivResult q = exact_div(f, v.factor);
        if (auto* c = std::get_if<LaurentPoly>(&q)) proper = !c->is_unit();
      }
      if (v.reducible() && !proper)
        problems.push_back("factor of " + txt(p) + " does not check");
      if (v.irreducible() && v.certificate && !recheck_certificate(f, *v.certificate))
        problems.push_back("certificate of " + txt(p) + " does not check");
    }
  return problems;
}

// Laurent certificate without expansion. Write Phi = M(y) C(y) with M a
// Laurent monomial and C a polynomial free of monomial factors. Every iterate
// is then a product of atoms: boundary variables (units) and the cofactors C
// evaluated at earlier iterates. An iterate whose non-boundary atoms all carry
// nonnegative exponents, and whose predecessors are certified, is Laurent.
// The test is sufficient only: a negative cofactor exponent gives Unknown.
struct FactoredAtom {
  LatticePoint at;
  bool boundary = false;
  LaurentPoly cofactor;  // in the placeholders y_i; empty for boundary atoms
};

struct FactoredLaurent {
  std::vector<FactoredAtom> atoms;
  std::map<LatticePoint, std::map<std::size_t, long>> exponents;
  std::vector<LatticePoint> certified, unknown;  // window points
  Verdict verdict() const { return unknown.empty() ? Verdict::Pass : Verdict::Unknown; }
};

inline FactoredLaurent certify_laurent_factored(const EquationDef& eq, const Domain& H,
                                                std::vector<LatticePoint> window) {
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());
  ShiftSystem sys = eq.system();
  auto [mono, cof] = strip_monomial(eq.phi);
  FactoredLaurent out;
  std::map<LatticePoint, bool> ok;
  for (const auto& h : window) {
    if (!H.contains(h)) throw PreconditionError("window point " + eq.point_text(h) + " is outside the domain");
    for (const auto& p : past_cone(sys, H, h).points) {
      if (ok.count(p)) continue;
      if (initial_boundary_contains(sys, H, p)) {
        out.atoms.push_back({p, true, {}});
        out.exponents[p] = {{out.atoms.size() - 1, 1}};
        ok[p] = true;
        continue;
      }
      bool good = true;
      std::map<std::size_t, long> e;
      for (std::size_t i = 0; i < eq.N(); ++i) {
        LatticePoint q = eq.spec.add(p, eq.shifts[i]);
        good = good && ok.at(q);
        long k = mono.degree(EquationDef::y(i));
        if (k == 0) continue;
        for (const auto& [a, x] : out.exponents.at(q)) e[a] += k * x;
      }
      if (!(cof == LaurentPoly(1))) {
        out.atoms.push_back({p, false, cof});
        e[out.atoms.size() - 1] += 1;
      }
      std::erase_if(e, [](const auto& kv) { return kv.second == 0; });
      for (const auto& [a, x] : e)
        if (x < 0 && !out.atoms[a].boundary) good = false;
      out.exponents[p] = std::move(e);
      ok[p] = good;
    }
    (ok.at(h) ? out.certified : out.unknown).push_back(h);
  }
  return out;
}

struct CrossDomainReport {
  VerificationReport first, second;
  std::map<std::string, std::pair<Verdict, Verdict>> verdicts;
  bool agree() const {
    for (const auto& [k, v] : verdicts)
      if (v.first != v.second) return false;
    return true;
  }
};

inline CrossDomainReport cross_domain_check(const EquationDef& eq, const Domain& H1, const Domain& H2,
                                            const std::vector<LatticePoint>& w1, const std::vector<LatticePoint>& w2,
                                            const VerifyOptions& opt = {}) {
  Evolution e1(eq, H1), e2(eq, H2);
  CrossDomainReport r{verify(e1, w1, opt), verify(e2, w2, opt), {}};
  auto a = r.first.verdicts(), b = r.second.verdicts();
  for (const auto& [k, v] : a) r.verdicts[k] = {v, b.at(k)};
  return r;
}

// Ambient coordinates, as in the equation files.
inline json point_json(const EquationDef& eq, const LatticePoint& p) { return eq.frame.to_ambient(p); }

inline json to_json(const Evolution& ev, const VerificationReport& r, bool with_timing = false) {
  const EquationDef& eq = ev.equation();
  auto pts = [&](const std::vector<LatticePoint>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(point_json(eq, p));
    return a;
  };
  json j;
  j["equation"] = r.equation;
  j["domain"] = r.domain;
  j["window"] = {{"size", r.window.size()}, {"points", pts(r.window)}};
  j["options"] = {{"properties", r.options.properties}, {"trials", r.options.trials},
                  {"degree_cap", r.options.degree_cap}, {"seed", r.options.seed}};
  j["out_of_scope"] = pts(r.out_of_scope);
  json verdicts = json::object();
  for (const auto& [k, v] : r.verdicts()) verdicts[k] = to_string(v);
  j["verdicts"] = verdicts;
  if (r.laurent) {
    json f = json::array();
    for (const auto& nl : r.laurent->failures)
      f.push_back({{"point", point_json(eq, nl.at)}, {"divisor", ev.format(nl.divisor)},
                   {"remainder_term", ev.format(LaurentPoly::monomial(nl.witness.mono, nl.witness.coeff))}});
    j["laurent"] = {{"checked", r.laurent->checked}, {"failures", f}};
  }
  if (r.units)
    j["units"] = {{"checked", r.units->checked},
                  {"boundary_units", r.units->boundary_units},
                  {"unit_off_boundary", pts(r.units->unit_off_boundary)},
                  {"nonunit_on_boundary", pts(r.units->nonunit_on_boundary)}};
  if (r.coprime) {
    json f = json::array();
    for (const auto& c : r.coprime->failures)
      f.push_back({{"a", point_json(eq, c.a)}, {"b", point_json(eq, c.b)}, {"gcd", ev.format(c.gcd)}});
    j["coprime"] = {{"pairs", r.coprime->pairs}, {"failures", f}};
  }
  if (r.irreducible) {
    json red = json::array(), unk = json::array();
    for (const auto& [p, v] : r.irreducible->points) {
      if (v.reducible()) red.push_back({{"point", point_json(eq, p)}, {"factor", ev.format(v.factor)}});
      if (v.unknown()) unk.push_back({{"point", point_json(eq, p)}, {"note", v.note}});
    }
    j["irreducible"] = {{"irreducible", r.irreducible->count(IrreducibilityVerdict::Kind::Irreducible)},
                        {"reducible", red},
                        {"unknown", unk}};
  }
  if (with_timing) j["seconds"] = r.seconds;
  return j;
}

inline std::string summary(const Evolution& ev, const VerificationReport& r) {
  std::ostringstream os;
  os << r.equation << " on " << r.domain << ", " << r.window.size() << " points\n";
  for (const auto& [k, v] : r.verdicts()) os << "  " << k << ": " << to_string(v) << "\n";
  const EquationDef& eq = ev.equation();
  if (r.laurent)
    for (const auto& nl : r.laurent->failures) os << "  non-Laurent at " << eq.point_text(nl.at) << "\n";
  if (r.units)
    for (const auto& p : r.units->unit_off_boundary) os << "  unit off the boundary: " << eq.point_text(p) << "\n";
  if (r.coprime)
    for (const auto& c : r.coprime->failures)
      os << "  gcd(" << eq.point_text(c.a) << ", " << eq.point_text(c.b) << ") = " << ev.format(c.gcd) << "\n";
  if (r.irreducible)
    for (const auto& [p, v] : r.irreducible->points)
      if (v.reducible()) os << "  " << eq.point_text(p) << " has factor " << ev.format(v.factor) << "\n";
  return os.str();
}

}  // namespace laurentlab
