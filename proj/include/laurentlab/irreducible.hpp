#pragma once

// One-sided irreducibility certification in Z[params][x^{±1}].
//
// A certificate is a pivot variable x plus an integer point for all other
// variables (parameters included) such that the specialized univariate
// polynomial keeps its x-degree and is irreducible over Q. If p = g*h with
// both factors of positive x-degree, the same point specializes to a
// nontrivial factorization, so the certificate is sound once the integer
// content and the x-content of p are units.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "laurentlab/gcd.hpp"
#include "laurentlab/univariate.hpp"

namespace laurentlab {

struct IrreducibilityCertificate {
  Var pivot = 0;
  std::vector<std::pair<Var, mpz_class>> point;  // every variable except the pivot
  uni::ZPoly image;                              // specialized polynomial, low to high degree
};

struct IrreducibilityVerdict {
  enum class Kind { Irreducible, Reducible, Unknown };

  Kind kind = Kind::Unknown;
  std::optional<IrreducibilityCertificate> certificate;  // Irreducible, unless p is a unit
  LaurentPoly factor;                                    // Reducible
  int trials = 0;
  std::string note;
  std::vector<uni::Factorization> hints;  // univariate factorizations seen while Unknown

  bool irreducible() const { return kind == Kind::Irreducible; }
  bool reducible() const { return kind == Kind::Reducible; }
  bool unknown() const { return kind == Kind::Unknown; }
};

inline const char* to_string(IrreducibilityVerdict::Kind k) {
  switch (k) {
    case IrreducibilityVerdict::Kind::Irreducible: return "irreducible";
    case IrreducibilityVerdict::Kind::Reducible: return "reducible";
    case IrreducibilityVerdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

struct IrreducibilityOptions {
  int trials = 20;
  int degree_cap = 12;
  std::uint64_t seed = 1;
};

// Image of a polynomial with nonnegative exponents in Z[x].
inline uni::ZPoly specialize_to_univariate(const LaurentPoly& p, Var x,
                                           const std::map<Var, mpz_class>& point) {
  uni::ZPoly out(static_cast<std::size_t>(p.degree(x)) + 1, 0);
  std::map<std::pair<Var, Exponent>, mpz_class> cache;
  for (const auto& t : p.terms()) {
    mpz_class c = t.coeff;
    Exponent ex = 0;
    for (const auto& [v, e] : t.mono.factors()) {
      if (v == x) {
        ex = e;
        continue;
      }
      if (e < 0) throw AlgebraError("specialization needs nonnegative exponents");
      auto key = std::make_pair(v, e);
      auto it = cache.find(key);
      if (it == cache.end()) {
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), point.at(v).get_mpz_t(), static_cast<unsigned long>(e));
        it = cache.emplace(key, pw).first;
      }
      c *= it->second;
    }
    out[static_cast<std::size_t>(ex)] += c;
  }
  uni::trim(out);
  return out;
}

inline LaurentPoly from_univariate(const uni::ZPoly& f, Var x) {
  std::vector<Term> ts;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] != 0) ts.push_back({Monomial::var(x, static_cast<Exponent>(k)), f[k]});
  return LaurentPoly::from_terms(std::move(ts));
}

namespace detail {

inline IrreducibilityVerdict reducible(LaurentPoly factor, std::string note) {
  IrreducibilityVerdict v;
  v.kind = IrreducibilityVerdict::Kind::Reducible;
  v.factor = normalize_associate(factor);
  v.note = std::move(note);
  return v;
}

// Integer constant: irreducible iff prime. Small cofactors are found by trial
// division; anything else is left Unknown.
inline IrreducibilityVerdict classify_integer(const mpz_class& c) {
  IrreducibilityVerdict v;
  mpz_class a = abs(c);
  if (a == 1) {
    v.kind = IrreducibilityVerdict::Kind::Irreducible;
    v.note = "unit";
    return v;
  }
  if (mpz_probab_prime_p(a.get_mpz_t(), 30) == 2) {
    v.kind = IrreducibilityVerdict::Kind::Irreducible;
    v.note = "prime integer";
    return v;
  }
  for (unsigned long d = 2; d < 1000000 && d * d <= a; ++d)
    if (mpz_divisible_ui_p(a.get_mpz_t(), d)) return reducible(LaurentPoly(static_cast<long>(d)), "integer factor");
  v.note = "integer without small factor";
  return v;
}

}  // namespace detail

inline IrreducibilityVerdict certify_irreducible(const LaurentPoly& p, const IrreducibilityOptions& opt = {}) {
  using Kind = IrreducibilityVerdict::Kind;
  if (p.is_zero()) throw AlgebraError("irreducibility of the zero polynomial");
  if (p.is_unit()) {
    IrreducibilityVerdict v;
    v.kind = Kind::Irreducible;
    v.note = "unit";
    return v;
  }
  LaurentPoly q = normalize_associate(p);
  if (q.is_constant()) return detail::classify_integer(q.leading().coeff);

  mpz_class ic = integer_content(q);
  if (ic != 1) return detail::reducible(LaurentPoly(ic), "integer content");

  std::vector<Var> vars = q.vars();
  bool has_laurent = !is_param(vars.front());
  if (has_laurent) {
    auto [content, prim] = content_and_primitive(q);
    if (content != LaurentPoly(1)) return detail::reducible(content, "content in the parameters");
  }

  // Candidate pivots: Laurent variables if any, otherwise parameters.
  std::vector<Var> pivots;
  for (Var v : vars)
    if (is_param(v) != has_laurent) pivots.push_back(v);
  for (Var x : pivots) {
    LaurentPoly cx = content_in_var(q, x);
    if (!cx.is_unit() && cx != LaurentPoly(1)) return detail::reducible(cx, "content in a pivot variable");
  }

  // A polynomial in one variable is factored exactly.
  if (vars.size() == 1) {
    Var x = vars.front();
    uni::ZPoly f = specialize_to_univariate(q, x, {});
    if (uni::degree(f) > opt.degree_cap) {
      IrreducibilityVerdict v;
      v.note = "degree " + std::to_string(uni::degree(f)) + " exceeds degree cap";
      return v;
    }
    uni::Factorization fz = uni::factor(f, opt.seed);
    if (fz.irreducible_over_q()) {
      IrreducibilityVerdict v;
      v.kind = Kind::Irreducible;
      v.certificate = IrreducibilityCertificate{x, {}, f};
      v.trials = 1;
      return v;
    }
    return detail::reducible(from_univariate(fz.factors.front().first, x), "univariate factorization");
  }

  std::sort(pivots.begin(), pivots.end(), [&](Var a, Var b) {
    Exponent da = q.degree(a), db = q.degree(b);
    return da != db ? da < db : a < b;
  });
  Var x = pivots.front();
  Exponent dx = q.degree(x);
  if (dx > opt.degree_cap) {
    IrreducibilityVerdict v;
    v.note = "pivot degree " + std::to_string(dx) + " exceeds degree cap " + std::to_string(opt.degree_cap);
    return v;
  }

  std::mt19937_64 rng(opt.seed);
  IrreducibilityVerdict unknown;
  unknown.kind = Kind::Unknown;
  for (int t = 0; t < opt.trials; ++t) {
    long box = 8L << std::min(t, 40);
    std::uniform_int_distribution<long> mag(1, box);
    std::bernoulli_distribution sign(0.5);
    std::map<Var, mpz_class> point;
    for (Var v : vars)
      if (v != x) point[v] = mpz_class(sign(rng) ? -mag(rng) : mag(rng));
    uni::ZPoly f = specialize_to_univariate(q, x, point);
    unknown.trials = t + 1;
    if (uni::degree(f) != dx) continue;
    uni::Factorization fz = uni::factor(f, opt.seed + static_cast<std::uint64_t>(t));
    if (fz.irreducible_over_q()) {
      IrreducibilityVerdict v;
      v.kind = Kind::Irreducible;
      v.trials = t + 1;
      v.certificate = IrreducibilityCertificate{x, {point.begin(), point.end()}, f};
      return v;
    }
    if (unknown.hints.size() < 3) unknown.hints.push_back(std::move(fz));
  }
  unknown.note = "every specialization factored";
  return unknown;
}

// Independent re-check of an Irreducible certificate against p.
inline bool recheck_certificate(const LaurentPoly& p, const IrreducibilityCertificate& cert) {
  LaurentPoly q = normalize_associate(p);
  std::map<Var, mpz_class> point(cert.point.begin(), cert.point.end());
  for (Var v : q.vars())
    if (v != cert.pivot && !point.count(v)) return false;
  uni::ZPoly f = specialize_to_univariate(q, cert.pivot, point);
  if (f != cert.image && f != uni::ZPoly{}) {
    uni::ZPoly neg = cert.image;
    for (auto& c : neg) c = -c;
    if (f != neg) return false;
  }
  if (uni::degree(f) != q.degree(cert.pivot)) return false;
  return uni::factor(f, 99).irreducible_over_q();
}

}  // namespace laurentlab
