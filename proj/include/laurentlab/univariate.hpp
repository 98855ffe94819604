#pragma once

// Dense univariate polynomials over Z and Z/pZ, and exact factorization of
// integer polynomials (square-free decomposition, Cantor-Zassenhaus modulo a
// prime larger than twice the Mignotte bound, then subset recombination).

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace laurentlab::uni {

// Coefficients from low to high degree; no trailing zeros; empty is zero.
using ZPoly = std::vector<mpz_class>;

inline void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline ZPoly derivative(const ZPoly& p) {
  ZPoly r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * static_cast<unsigned long>(i));
  trim(r);
  return r;
}

inline mpz_class content(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) g = gcd(g, c);
  return g;
}

// Primitive part with positive leading coefficient.
inline ZPoly primitive(const ZPoly& p) {
  if (p.empty()) return p;
  mpz_class g = content(p);
  if (p.back() < 0) g = -g;
  ZPoly r = p;
  for (auto& c : r) c /= g;
  return r;
}

// Exact division over Z; returns false if b does not divide a.
inline bool divide_exact(const ZPoly& a, const ZPoly& b, ZPoly& q) {
  if (b.empty()) throw std::invalid_argument("division by zero polynomial");
  if (a.empty()) {
    q.clear();
    return true;
  }
  if (a.size() < b.size()) return false;
  ZPoly r = a;
  q.assign(a.size() - b.size() + 1, 0);
  for (int i = degree(r); i >= degree(b); --i) {
    if (r[i] == 0) continue;
    if (!mpz_divisible_p(r[i].get_mpz_t(), b.back().get_mpz_t())) return false;
    mpz_class c = r[i] / b.back();
    q[i - degree(b)] = c;
    for (int j = 0; j <= degree(b); ++j) r[i - degree(b) + j] -= c * b[j];
  }
  for (const auto& c : r)
    if (c != 0) return false;
  trim(q);
  return true;
}

// Pseudo-remainder of a by b.
inline ZPoly pseudo_rem(ZPoly a, const ZPoly& b) {
  const mpz_class& lb = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    mpz_class la = a.back();
    int shift = degree(a) - degree(b);
    for (auto& c : a) c *= lb;
    for (int j = 0; j <= degree(b); ++j) a[shift + j] -= la * b[j];
    trim(a);
  }
  return a;
}

// GCD over Z (primitive PRS), normalized primitive with positive lead.
inline ZPoly gcd(ZPoly a, ZPoly b) {
  if (a.empty()) return primitive(b);
  if (b.empty()) return primitive(a);
  mpz_class cg = ::gcd(content(a), content(b));
  a = primitive(a);
  b = primitive(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    ZPoly r = pseudo_rem(a, b);
    a = std::move(b);
    b = r.empty() ? r : primitive(r);
  }
  ZPoly g = primitive(a);
  for (auto& c : g) c *= cg;
  return g;
}

// ---------------------------------------------------------------------------
// Arithmetic modulo a prime p.

class ModP {
 public:
  explicit ModP(mpz_class p) : p_(std::move(p)) {}
  const mpz_class& prime() const { return p_; }

  mpz_class reduce(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), p_.get_mpz_t());
    return r;
  }
  mpz_class inv(const mpz_class& x) const {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), p_.get_mpz_t()) == 0)
      throw std::domain_error("non-invertible element modulo p");
    return r;
  }

  ZPoly reduce(const ZPoly& a) const {
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = reduce(a[i]);
    trim(r);
    return r;
  }

  ZPoly mul(const ZPoly& a, const ZPoly& b) const { return reduce(uni::mul(a, b)); }
  ZPoly sub(const ZPoly& a, const ZPoly& b) const { return reduce(uni::sub(a, b)); }

  ZPoly monic(const ZPoly& a) const {
    if (a.empty()) return a;
    mpz_class li = inv(a.back());
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = reduce(a[i] * li);
    return r;
  }

  // a = q*b + r
  void divmod(const ZPoly& a, const ZPoly& b, ZPoly& q, ZPoly& r) const {
    if (b.empty()) throw std::invalid_argument("division by zero polynomial mod p");
    r = reduce(a);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
    mpz_class li = inv(b.back());
    while (!r.empty() && r.size() >= b.size()) {
      int shift = degree(r) - degree(b);
      mpz_class c = reduce(r.back() * li);
      q[shift] = c;
      for (int j = 0; j <= degree(b); ++j) r[shift + j] = reduce(r[shift + j] - c * b[j]);
      trim(r);
    }
    trim(q);
  }
  ZPoly rem(const ZPoly& a, const ZPoly& b) const {
    ZPoly q, r;
    divmod(a, b, q, r);
    return r;
  }

  ZPoly gcd(ZPoly a, ZPoly b) const {
    a = reduce(a);
    b = reduce(b);
    while (!b.empty()) {
      ZPoly r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }

  ZPoly powmod(ZPoly base, mpz_class e, const ZPoly& m) const {
    ZPoly result{1};
    result = rem(result, m);
    base = rem(base, m);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) result = rem(mul(result, base), m);
      e >>= 1;
      if (e > 0) base = rem(mul(base, base), m);
    }
    return result;
  }

 private:
  mpz_class p_;
};

// Distinct-degree then equal-degree factorization of a monic square-free
// polynomial modulo an odd prime.
inline std::vector<ZPoly> factor_mod_p(const ZPoly& f, const ModP& F, std::mt19937_64& rng) {
  std::vector<std::pair<ZPoly, int>> dd;  // (product of factors of degree d, d)
  ZPoly rest = F.monic(f);
  ZPoly xp{0, 1};
  ZPoly h = xp;
  for (int d = 1; 2 * d <= degree(rest); ++d) {
    h = F.powmod(h, F.prime(), rest);
    ZPoly g = F.gcd(rest, F.sub(h, xp));
    if (degree(g) > 0) {
      dd.push_back({g, d});
      ZPoly q, r;
      F.divmod(rest, g, q, r);
      rest = F.monic(q);
      h = F.rem(h, rest);
    }
  }
  if (degree(rest) > 0) dd.push_back({rest, degree(rest)});

  std::vector<ZPoly> out;
  std::uniform_int_distribution<unsigned long> dist;
  std::vector<ZPoly> stack;
  for (auto& [g, d] : dd) {
    stack.assign(1, g);
    while (!stack.empty()) {
      ZPoly u = std::move(stack.back());
      stack.pop_back();
      if (degree(u) == d) {
        out.push_back(F.monic(u));
        continue;
      }
      // Random splitting: gcd(u, a^((p^d-1)/2) - 1).
      mpz_class e;
      mpz_pow_ui(e.get_mpz_t(), F.prime().get_mpz_t(), static_cast<unsigned long>(d));
      e = (e - 1) / 2;
      while (true) {
        ZPoly a(static_cast<std::size_t>(degree(u)));
        for (auto& c : a) c = F.reduce(mpz_class(dist(rng)));
        trim(a);
        if (degree(a) < 1) continue;
        ZPoly b = F.sub(F.powmod(a, e, u), ZPoly{1});
        ZPoly g2 = F.gcd(u, b);
        if (degree(g2) > 0 && degree(g2) < degree(u)) {
          ZPoly q, r;
          F.divmod(u, g2, q, r);
          stack.push_back(g2);
          stack.push_back(F.monic(q));
          break;
        }
      }
    }
  }
  return out;
}

// Symmetric residue in (-p/2, p/2].
inline mpz_class symmetric(const mpz_class& x, const mpz_class& p) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
  if (2 * r > p) r -= p;
  return r;
}

// Factors of a primitive square-free polynomial of positive degree.
inline std::vector<ZPoly> factor_squarefree(const ZPoly& f, std::uint64_t seed = 1) {
  if (degree(f) <= 1) return {f};
  // Bound for the coefficients of lc(f) * (any factor).
  mpz_class maxc = 0;
  for (const auto& c : f) maxc = std::max(maxc, mpz_class(abs(c)));
  mpz_class bound = maxc * abs(f.back());
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), mpz_class(f.size()).get_mpz_t());
  bound *= (root + 1);
  bound <<= static_cast<mp_bitcnt_t>(degree(f));
  mpz_class p = 2 * bound + 1;
  ZPoly df = derivative(f);
  while (true) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (mpz_divisible_p(f.back().get_mpz_t(), p.get_mpz_t())) continue;
    ModP F(p);
    if (degree(F.gcd(f, df)) == 0) break;
  }
  ModP F(p);
  std::mt19937_64 rng(seed);
  std::vector<ZPoly> modular = factor_mod_p(f, F, rng);
  if (modular.size() == 1) return {f};

  std::vector<ZPoly> found;
  ZPoly g = f;
  std::vector<ZPoly> pool = std::move(modular);
  std::size_t s = 1;
  while (2 * s <= pool.size()) {
    bool progress = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
      ZPoly cand{symmetric(g.back(), p)};
      for (auto i : idx) cand = F.mul(cand, pool[i]);
      for (auto& c : cand) c = symmetric(c, p);
      trim(cand);
      ZPoly pp = primitive(cand);
      ZPoly q;
      if (degree(pp) > 0 && divide_exact(g, pp, q)) {
        found.push_back(pp);
        g = q;
        std::vector<ZPoly> rest;
        for (std::size_t i = 0, k = 0; i < pool.size(); ++i) {
          if (k < idx.size() && idx[k] == i)
            ++k;
          else
            rest.push_back(pool[i]);
        }
        pool = std::move(rest);
        progress = true;
        break;
      }
      // next combination
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == pool.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t i = k; i < s; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!progress) ++s;
  }
  if (degree(g) > 0) found.push_back(primitive(g));
  return found;
}

struct Factorization {
  mpz_class content;                        // signed so content * prod = input
  std::vector<std::pair<ZPoly, int>> factors;  // primitive, positive lead, with multiplicity

  bool irreducible_over_q() const { return factors.size() == 1 && factors[0].second == 1; }
};

// Complete factorization over Z of a nonzero polynomial.
inline Factorization factor(const ZPoly& input, std::uint64_t seed = 1) {
  if (input.empty()) throw std::invalid_argument("factorization of zero polynomial");
  Factorization out;
  ZPoly f = primitive(input);
  out.content = input.back() / f.back();
  if (degree(f) == 0) return out;

  // x-power factor first, then Yun's square-free decomposition.
  int xpow = 0;
  while (f[static_cast<std::size_t>(xpow)] == 0) ++xpow;
  if (xpow > 0) {
    out.factors.push_back({ZPoly{0, 1}, xpow});
    f.erase(f.begin(), f.begin() + xpow);
  }
  if (degree(f) == 0) return out;

  ZPoly a = f;
  ZPoly b = gcd(a, derivative(a));
  ZPoly c, d;
  divide_exact(a, b, c);
  int mult = 1;
  while (degree(c) > 0) {
    ZPoly y = gcd(b, c);
    ZPoly z;
    divide_exact(c, y, z);
    if (degree(z) > 0)
      for (auto& fac : factor_squarefree(primitive(z), seed + static_cast<std::uint64_t>(mult)))
        out.factors.push_back({fac, mult});
    ZPoly nb;
    divide_exact(b, y, nb);
    b = nb;
    c = y;
    ++mult;
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return x.first < y.first;
  });
  return out;
}

}  // namespace laurentlab::uni
