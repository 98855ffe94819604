#pragma once

// Content, primitive part and GCD in Z[params][x^{±1}].
//
// GCDs are returned in normal form: Laurent monomial part removed and the
// leading coefficient (canonical term order) positive. The exact algorithm
// is a recursive primitive PRS, one variable at a time. Before running it we
// try a sound modular shortcut: if for every variable x a random
// specialization of the other variables keeps both x-leading coefficients
// nonzero mod p and the images are coprime mod p, the true GCD has degree 0
// in every variable and is therefore an integer.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <random>
#include <unordered_map>
#include <vector>

#include "laurentlab/poly.hpp"

namespace laurentlab {

// Positive-lead associate with the Laurent monomial part removed.
inline LaurentPoly normalize_associate(const LaurentPoly& p) {
  if (p.is_zero()) return p;
  LaurentPoly q = strip_monomial(p).second;
  if (q.leading().coeff < 0) q = -q;
  return q;
}

inline mpz_class integer_content(const LaurentPoly& p) {
  mpz_class g = 0;
  for (const auto& t : p.terms()) {
    g = ::gcd(g, t.coeff);
    if (g == 1) break;
  }
  return g;
}

namespace modular {

inline constexpr std::uint64_t kPrime = (1ull << 61) - 1;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(z & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kPrime) r -= kPrime;
  return r;
}
inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kPrime) r -= kPrime;
  return r;
}
inline std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, b);
    b = mulmod(b, b);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }
inline std::uint64_t reduce(const mpz_class& c) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(kPrime));
  return r.get_ui();
}

using Poly = std::vector<std::uint64_t>;  // low to high degree

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly rem(Poly a, const Poly& b) {
  std::uint64_t li = invmod(b.back());
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    std::uint64_t c = mulmod(a.back(), li);
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = submod(a[shift + j], mulmod(c, b[j]));
    trim(a);
  }
  return a;
}

inline std::size_t gcd_degree(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Evaluation point for all variables except one.
class Point {
 public:
  explicit Point(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t value(Var v) {
    auto it = values_.find(v);
    if (it != values_.end()) return it->second;
    std::uniform_int_distribution<std::uint64_t> d(2, kPrime - 2);
    return values_.emplace(v, d(rng_)).first->second;
  }

  std::uint64_t power(Var v, Exponent e) {
    std::uint64_t b = value(v);
    if (e < 0) b = invmod(b);
    return powmod(b, static_cast<std::uint64_t>(e < 0 ? -static_cast<std::int64_t>(e) : e));
  }

 private:
  std::mt19937_64 rng_;
  std::unordered_map<Var, std::uint64_t> values_;
};

// Image of p in (Z/p)[x] with every other variable specialized; x exponents
// shifted so the lowest power is x^0.
inline Poly specialize(const LaurentPoly& p, Var x, Point& pt) {
  Exponent lo = p.low_degree(x), hi = p.degree(x);
  Poly out(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& t : p.terms()) {
    std::uint64_t c = reduce(t.coeff);
    Exponent ex = 0;
    for (const auto& [v, e] : t.mono.factors()) {
      if (v == x)
        ex = e;
      else
        c = mulmod(c, pt.power(v, e));
    }
    auto k = static_cast<std::size_t>(ex - lo);
    out[k] = addmod(out[k], c);
  }
  return out;
}

}  // namespace modular

// True only when gcd(a, b) is certainly free of x (sound, may return false).
inline bool gcd_free_of_var_certified(const LaurentPoly& a, const LaurentPoly& b, Var x,
                                      std::uint64_t seed, int attempts = 2) {
  if (!a.contains_var(x) || !b.contains_var(x)) return true;
  // Specialization shifts x^lo to x^0, which hides a common power of a parameter.
  if (is_param(x) && a.low_degree(x) > 0 && b.low_degree(x) > 0) return false;
  for (int i = 0; i < attempts; ++i) {
    modular::Point pt(seed + 7919u * static_cast<std::uint64_t>(i) + x);
    modular::Poly pa = modular::specialize(a, x, pt);
    modular::Poly pb = modular::specialize(b, x, pt);
    if (pa.back() == 0 || pb.back() == 0) continue;  // leading coefficient vanished
    if (modular::gcd_degree(pa, pb) == 0) return true;
  }
  return false;
}

// Sound coprimality certificate up to an integer factor: returns true when
// gcd(a, b) is certainly an integer constant (Laurent monomials removed).
inline bool gcd_is_constant_certified(const LaurentPoly& a, const LaurentPoly& b, std::uint64_t seed = 0x5eed) {
  LaurentPoly sa = strip_monomial(a).second, sb = strip_monomial(b).second;
  std::vector<Var> va = sa.vars(), vb = sb.vars(), common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  for (Var x : common)
    if (!gcd_free_of_var_certified(sa, sb, x, seed)) return false;
  return true;
}

LaurentPoly gcd(const LaurentPoly& p, const LaurentPoly& q);

// Largest parameter monomial dividing every term.
inline Monomial min_param_monomial(const LaurentPoly& p) {
  std::vector<Monomial::Factor> f;
  for (Var v : p.vars())
    if (is_param(v) && p.low_degree(v) > 0) f.push_back({v, p.low_degree(v)});
  return Monomial(std::move(f));
}

namespace detail {

inline LaurentPoly gcd_of_list(const std::vector<LaurentPoly>& items) {
  // gcd(list) divides both the first item and any integer combination of the
  // rest, so a certified-constant gcd of those two settles the whole list.
  std::vector<const LaurentPoly*> nz;
  for (const auto& c : items)
    if (!c.is_zero()) nz.push_back(&c);
  if (nz.size() > 2) {
    std::vector<LaurentPoly> parts;
    for (std::size_t i = 1; i < nz.size(); ++i) parts.push_back(*nz[i] * LaurentPoly(static_cast<long>(2 * i + 1)));
    LaurentPoly comb = LaurentPoly::sum(std::move(parts));
    if (!comb.is_zero() && !nz[0]->is_monomial() && !comb.is_monomial() &&
        gcd_is_constant_certified(*nz[0], comb)) {
      mpz_class c = 0;
      for (const auto* x : nz) c = ::gcd(c, integer_content(*x));
      return LaurentPoly(c);
    }
  }
  LaurentPoly g;
  for (const auto& c : items) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? normalize_associate(c) : gcd(g, c);
    if (g.is_unit()) break;
  }
  return g;
}

inline LaurentPoly content_in(const LaurentPoly& p, Var x) {
  return gcd_of_list(coefficients_in(p, x));
}

// Coefficient list in x of a polynomial whose x-exponents start at 0.
using Dense = std::vector<LaurentPoly>;

inline Dense to_dense(const LaurentPoly& p, Var x) { return coefficients_in(p, x); }

inline LaurentPoly from_dense(const Dense& d, Var x) {
  std::vector<LaurentPoly> parts;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (!d[k].is_zero()) parts.push_back(d[k].mul_monomial(Monomial::var(x, static_cast<Exponent>(k))));
  return LaurentPoly::sum(std::move(parts));
}

inline void trim(Dense& d) {
  while (!d.empty() && d.back().is_zero()) d.pop_back();
}

inline Dense pseudo_rem(Dense a, const Dense& b) {
  const LaurentPoly& lb = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    LaurentPoly la = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto& c : a) c = c * lb;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= la * b[j];
    trim(a);
  }
  return a;
}

inline Dense primitive_dense(const Dense& d) {
  LaurentPoly c = gcd_of_list(d);
  Dense out;
  out.reserve(d.size());
  for (const auto& x : d) out.push_back(div_exact_or_throw(x, c));
  return out;
}

// GCD of two x-primitive polynomials by the primitive PRS.
inline LaurentPoly prs_gcd(const LaurentPoly& a, const LaurentPoly& b, Var x) {
  Dense A = to_dense(a, x), B = to_dense(b, x);
  if (A.size() < B.size()) std::swap(A, B);
  while (!B.empty()) {
    if (B.size() == 1) return LaurentPoly(1);
    Dense R = pseudo_rem(A, B);
    A = std::move(B);
    B = R.empty() ? R : primitive_dense(R);
  }
  return normalize_associate(from_dense(primitive_dense(A), x));
}

}  // namespace detail

// GCD in Z[params][x^{±1}]; gcd(p, 0) is the normal form of p.
inline LaurentPoly gcd(const LaurentPoly& p, const LaurentPoly& q) {
  if (p.is_zero() && q.is_zero()) throw AlgebraError("gcd(0, 0) is undefined");
  if (p.is_zero()) return normalize_associate(q);
  if (q.is_zero()) return normalize_associate(p);
  LaurentPoly a = normalize_associate(p), b = normalize_associate(q);
  if (a == b) return a;
  Monomial ma = min_param_monomial(a), mb = min_param_monomial(b);
  if (!ma.is_one() || !mb.is_one()) {
    std::vector<Monomial::Factor> common;
    for (const auto& [v, e] : ma.factors())
      if (Exponent k = std::min(e, mb.degree(v)); k > 0) common.push_back({v, k});
    LaurentPoly g = gcd(a.mul_monomial(ma.inverse()), b.mul_monomial(mb.inverse()));
    return g.mul_monomial(Monomial(std::move(common)));
  }
  if (a.is_constant() || b.is_constant()) return LaurentPoly(::gcd(integer_content(a), integer_content(b)));
  if (a.is_monomial() || b.is_monomial()) {
    // A monomial's divisors are integer and parameter monomials.
    const LaurentPoly& m = a.is_monomial() ? a : b;
    const LaurentPoly& o = a.is_monomial() ? b : a;
    mpz_class g = ::gcd(m.leading().coeff, integer_content(o));
    std::vector<Monomial::Factor> common;
    for (const auto& [v, e] : m.leading().mono.factors()) {
      Exponent lo = e;
      for (const auto& t : o.terms()) lo = std::min(lo, t.mono.degree(v));
      if (lo > 0) common.push_back({v, lo});
    }
    return LaurentPoly::monomial(Monomial(std::move(common)), g);
  }
  if (gcd_is_constant_certified(a, b)) return LaurentPoly(::gcd(integer_content(a), integer_content(b)));

  // Divisibility shortcut: the smaller may divide the larger.
  const LaurentPoly& small = a.size() <= b.size() ? a : b;
  const LaurentPoly& large = a.size() <= b.size() ? b : a;
  if (divides(small, large)) return small;

  std::vector<Var> va = a.vars(), vb = b.vars();
  Var x = va.front();
  if (!b.contains_var(x)) return gcd(detail::content_in(a, x), b);
  if (!a.contains_var(vb.front())) return gcd(a, detail::content_in(b, vb.front()));

  LaurentPoly ca = detail::content_in(a, x), cb = detail::content_in(b, x);
  LaurentPoly gc = gcd(ca, cb);
  LaurentPoly pa = div_exact_or_throw(a, ca), pb = div_exact_or_throw(b, cb);
  LaurentPoly gp = detail::prs_gcd(strip_monomial(pa).second, strip_monomial(pb).second, x);
  return normalize_associate(gc * gp);
}

// Content in Z[params] (positive leading coefficient) and primitive part.
inline std::pair<LaurentPoly, LaurentPoly> content_and_primitive(const LaurentPoly& p) {
  if (p.is_zero()) throw AlgebraError("content of the zero polynomial");
  std::vector<LaurentPoly> coeffs;
  const auto& ts = p.terms();
  std::size_t i = 0;
  while (i < ts.size()) {
    Monomial lm = ts[i].mono.laurent_part();
    std::vector<Term> group;
    while (i < ts.size() && ts[i].mono.laurent_part() == lm) {
      group.push_back({ts[i].mono.param_part(), ts[i].coeff});
      ++i;
    }
    coeffs.push_back(LaurentPoly::from_terms(std::move(group)));
  }
  LaurentPoly c = detail::gcd_of_list(coeffs);
  if (c.leading().coeff < 0) c = -c;
  return {c, div_exact_or_throw(p, c)};
}

inline bool is_primitive(const LaurentPoly& p) { return content_and_primitive(p).first == LaurentPoly(1); }

// Content of p as a polynomial in x (GCD of its x-coefficients), normalized.
inline LaurentPoly content_in_var(const LaurentPoly& p, Var x) { return detail::content_in(p, x); }

}  // namespace laurentlab
