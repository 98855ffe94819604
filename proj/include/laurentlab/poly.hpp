#pragma once

// Sparse multivariate Laurent polynomials with integer coefficients.
//
// Parameters (the symbols of the coefficient ring Z[params]) are ordinary
// variables flagged by the high bit of their index; they never carry a
// negative exponent. Everything else is a Laurent variable. The canonical
// term order is lexicographic on variable index (smaller index is more
// significant), so Laurent variables always dominate parameters.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace laurentlab {

using Var = std::uint32_t;
using Exponent = std::int32_t;

inline constexpr Var kParamBit = 0x8000'0000u;

constexpr bool is_param(Var v) { return (v & kParamBit) != 0; }
constexpr Var param_var(std::uint32_t i) { return kParamBit | i; }

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sorted (var, exponent) list without zero exponents. Empty means 1.
class Monomial {
 public:
  using Factor = std::pair<Var, Exponent>;

  Monomial() = default;
  explicit Monomial(std::vector<Factor> factors) : f_(std::move(factors)) { normalize(); }

  static Monomial var(Var v, Exponent e = 1) {
    Monomial m;
    if (e != 0) m.f_.push_back({v, e});
    return m;
  }

  const std::vector<Factor>& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }
  std::size_t size() const { return f_.size(); }

  Exponent degree(Var v) const {
    auto it = std::lower_bound(f_.begin(), f_.end(), v,
                               [](const Factor& a, Var x) { return a.first < x; });
    return (it != f_.end() && it->first == v) ? it->second : 0;
  }

  bool has_param() const {
    return !f_.empty() && is_param(f_.back().first);
  }

  // Part of the monomial in Laurent (non-parameter) variables only.
  Monomial laurent_part() const {
    Monomial m;
    for (const auto& fa : f_)
      if (!is_param(fa.first)) m.f_.push_back(fa);
    return m;
  }
  Monomial param_part() const {
    Monomial m;
    for (const auto& fa : f_)
      if (is_param(fa.first)) m.f_.push_back(fa);
    return m;
  }

  Monomial inverse() const {
    Monomial m = *this;
    for (auto& fa : m.f_) fa.second = -fa.second;
    return m;
  }

  // True when every exponent of *this is <= the matching exponent of other.
  bool divides(const Monomial& other) const {
    auto j = other.f_.begin();
    for (const auto& fa : f_) {
      while (j != other.f_.end() && j->first < fa.first) ++j;
      Exponent e = (j != other.f_.end() && j->first == fa.first) ? j->second : 0;
      if (e < fa.second) return false;
    }
    return true;
  }

  bool all_nonnegative() const {
    return std::all_of(f_.begin(), f_.end(), [](const Factor& a) { return a.second >= 0; });
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.f_.reserve(a.f_.size() + b.f_.size());
    auto i = a.f_.begin(), j = b.f_.begin();
    while (i != a.f_.end() && j != b.f_.end()) {
      if (i->first < j->first) {
        r.f_.push_back(*i++);
      } else if (j->first < i->first) {
        r.f_.push_back(*j++);
      } else {
        Exponent e = i->second + j->second;
        if (e != 0) r.f_.push_back({i->first, e});
        ++i;
        ++j;
      }
    }
    r.f_.insert(r.f_.end(), i, a.f_.end());
    r.f_.insert(r.f_.end(), j, b.f_.end());
    return r;
  }
  friend Monomial operator/(const Monomial& a, const Monomial& b) { return a * b.inverse(); }

  Monomial pow(Exponent k) const {
    if (k == 0) return {};
    Monomial m = *this;
    for (auto& fa : m.f_) fa.second *= k;
    return m;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& [v, e] : f_) {
      h ^= std::hash<std::uint64_t>{}((std::uint64_t(v) << 32) ^ std::uint32_t(e)) + 0x9e3779b9 +
           (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  void normalize() {
    std::sort(f_.begin(), f_.end(), [](const Factor& a, const Factor& b) { return a.first < b.first; });
    std::vector<Factor> out;
    out.reserve(f_.size());
    for (const auto& fa : f_) {
      if (!out.empty() && out.back().first == fa.first)
        out.back().second += fa.second;
      else
        out.push_back(fa);
    }
    std::erase_if(out, [](const Factor& a) { return a.second == 0; });
    f_ = std::move(out);
  }

  std::vector<Factor> f_;
};

// Lexicographic comparison: positive when a > b.
inline int lex_compare(const Monomial& a, const Monomial& b) {
  const auto& x = a.factors();
  const auto& y = b.factors();
  auto i = x.begin(), j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (i->first == j->first) {
      if (i->second != j->second) return i->second > j->second ? 1 : -1;
      ++i;
      ++j;
    } else if (i->first < j->first) {
      return i->second > 0 ? 1 : -1;
    } else {
      return j->second > 0 ? -1 : 1;
    }
  }
  if (i != x.end()) return i->second > 0 ? 1 : -1;
  if (j != y.end()) return j->second > 0 ? -1 : 1;
  return 0;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial mono;
  mpz_class coeff;
  friend bool operator==(const Term& a, const Term& b) { return a.mono == b.mono && a.coeff == b.coeff; }
};

class LaurentPoly;

// Obstruction found by exact division: the first remainder term that the
// divisor's leading term cannot absorb.
struct NotDivisible {
  Term witness;
};

using DivResult = std::variant<LaurentPoly, NotDivisible>;

class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.push_back({Monomial{}, mpz_class(c)});
  }
  LaurentPoly(const mpz_class& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.push_back({Monomial{}, c});
  }

  static LaurentPoly var(Var v, Exponent e = 1) { return monomial(Monomial::var(v, e), 1); }
  static LaurentPoly monomial(Monomial m, mpz_class c) {
    LaurentPoly p;
    if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
  }
  static LaurentPoly from_terms(std::vector<Term> terms) {
    LaurentPoly p;
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }
  // Terms already strictly decreasing with nonzero coefficients.
  static LaurentPoly from_sorted_unique(std::vector<Term> terms) {
    LaurentPoly p;
    p.terms_ = std::move(terms);
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }

  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

  // Units of Z[params][x^{±1}]: ±(monomial in Laurent variables).
  bool is_unit() const {
    return terms_.size() == 1 && !terms_[0].mono.has_param() && abs(terms_[0].coeff) == 1;
  }

  Exponent degree(Var v) const {
    if (terms_.empty()) throw AlgebraError("degree of zero polynomial");
    Exponent d = terms_[0].mono.degree(v);
    for (const auto& t : terms_) d = std::max(d, t.mono.degree(v));
    return d;
  }
  Exponent low_degree(Var v) const {
    if (terms_.empty()) throw AlgebraError("degree of zero polynomial");
    Exponent d = terms_[0].mono.degree(v);
    for (const auto& t : terms_) d = std::min(d, t.mono.degree(v));
    return d;
  }

  // Sorted list of variables occurring in the polynomial.
  std::vector<Var> vars() const {
    std::vector<Var> out;
    for (const auto& t : terms_)
      for (const auto& fa : t.mono.factors()) out.push_back(fa.first);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool contains_var(Var v) const {
    for (const auto& t : terms_)
      if (t.mono.degree(v) != 0) return true;
    return false;
  }

  // Componentwise minimum exponent over Laurent variables (parameters excluded).
  Monomial min_laurent_monomial() const {
    std::map<Var, Exponent> lo;
    for (const auto& v : vars())
      if (!is_param(v)) lo[v] = 0;
    bool first = true;
    for (const auto& t : terms_) {
      for (auto& [v, e] : lo) {
        Exponent d = t.mono.degree(v);
        e = first ? d : std::min(e, d);
      }
      first = false;
    }
    std::vector<Monomial::Factor> f(lo.begin(), lo.end());
    return Monomial(std::move(f));
  }

  LaurentPoly mul_term(const Monomial& m, const mpz_class& c) const {
    if (c == 0) return {};
    LaurentPoly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
    return r;
  }
  LaurentPoly mul_monomial(const Monomial& m) const { return mul_term(m, 1); }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, false); }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, true); }
  LaurentPoly& operator+=(const LaurentPoly& b) { return *this = *this + b; }
  LaurentPoly& operator-=(const LaurentPoly& b) { return *this = *this - b; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const LaurentPoly& small = a.size() <= b.size() ? a : b;
    const LaurentPoly& large = a.size() <= b.size() ? b : a;
    // Multiplying by a monomial preserves the term order, so the product is a
    // merge of |small| sorted runs.
    std::vector<LaurentPoly> runs;
    runs.reserve(small.size());
    for (const auto& t : small.terms_) runs.push_back(large.mul_term(t.mono, t.coeff));
    return sum(std::move(runs));
  }
  LaurentPoly& operator*=(const LaurentPoly& b) { return *this = *this * b; }

  // Balanced pairwise merge of many polynomials.
  static LaurentPoly sum(std::vector<LaurentPoly> parts) {
    if (parts.empty()) return {};
    while (parts.size() > 1) {
      std::vector<LaurentPoly> next;
      next.reserve((parts.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
      if (parts.size() % 2) next.push_back(std::move(parts.back()));
      parts = std::move(next);
    }
    return std::move(parts.front());
  }

  LaurentPoly pow(unsigned k) const {
    LaurentPoly result(1), base = *this;
    while (k) {
      if (k & 1u) result *= base;
      k >>= 1u;
      if (k) base *= base;
    }
    return result;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  std::size_t hash() const {
    std::size_t h = terms_.size();
    for (const auto& t : terms_) {
      h ^= t.mono.hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
      h ^= std::hash<long>{}(mpz_get_si(t.coeff.get_mpz_t())) + (h << 3);
    }
    return h;
  }

 private:
  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool subtract) {
    LaurentPoly r;
    r.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() && j != b.terms_.end()) {
      int c = lex_compare(i->mono, j->mono);
      if (c > 0) {
        r.terms_.push_back(*i++);
      } else if (c < 0) {
        r.terms_.push_back(subtract ? Term{j->mono, -j->coeff} : *j);
        ++j;
      } else {
        mpz_class s = subtract ? mpz_class(i->coeff - j->coeff) : mpz_class(i->coeff + j->coeff);
        if (s != 0) r.terms_.push_back({i->mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    for (; i != a.terms_.end(); ++i) r.terms_.push_back(*i);
    for (; j != b.terms_.end(); ++j) r.terms_.push_back(subtract ? Term{j->mono, -j->coeff} : *j);
    return r;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return lex_compare(a.mono, b.mono) > 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().mono == t.mono)
        out.back().coeff += t.coeff;
      else
        out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;  // strictly decreasing in lex order
};

struct LaurentPolyHash {
  std::size_t operator()(const LaurentPoly& p) const { return p.hash(); }
};

// Splits p = m * q where m is the monomial of minimal Laurent exponents, so
// that q is an ordinary polynomial with no Laurent-monomial factor.
inline std::pair<Monomial, LaurentPoly> strip_monomial(const LaurentPoly& p) {
  if (p.is_zero()) return {Monomial{}, p};
  Monomial m = p.min_laurent_monomial();
  return {m, p.mul_monomial(m.inverse())};
}

namespace detail {

// Exact division of polynomials (nonnegative exponents) under lex order.
// Heap-based quotient accumulation; fails at the first remainder term that
// the divisor's leading term does not divide.
inline DivResult divide_polynomials(const LaurentPoly& p, const LaurentPoly& d) {
  const auto& dt = d.terms();
  const Term& lead = dt.front();
  std::vector<Term> quotient;
  if (p.is_zero()) return LaurentPoly{};

  struct Node {
    Monomial mono;
    std::size_t qi, dj;
  };
  auto cmp = [](const Node& a, const Node& b) { return lex_compare(a.mono, b.mono) < 0; };
  std::vector<Node> heap;

  const auto& pt = p.terms();
  std::size_t pi = 0;
  while (pi < pt.size() || !heap.empty()) {
    const Monomial* current = nullptr;
    if (pi < pt.size()) current = &pt[pi].mono;
    if (!heap.empty() && (current == nullptr || lex_compare(heap.front().mono, *current) > 0))
      current = &heap.front().mono;
    Monomial m = *current;

    mpz_class c = 0;
    if (pi < pt.size() && pt[pi].mono == m) c = pt[pi++].coeff;
    while (!heap.empty() && heap.front().mono == m) {
      std::pop_heap(heap.begin(), heap.end(), cmp);
      Node n = std::move(heap.back());
      heap.pop_back();
      c -= quotient[n.qi].coeff * dt[n.dj].coeff;
      if (n.dj + 1 < dt.size()) {
        heap.push_back({quotient[n.qi].mono * dt[n.dj + 1].mono, n.qi, n.dj + 1});
        std::push_heap(heap.begin(), heap.end(), cmp);
      }
    }
    if (c == 0) continue;
    if (!lead.mono.divides(m) || !mpz_divisible_p(c.get_mpz_t(), lead.coeff.get_mpz_t()))
      return NotDivisible{Term{m, c}};
    Term q{m / lead.mono, c / lead.coeff};
    quotient.push_back(std::move(q));
    if (dt.size() > 1) {
      heap.push_back({quotient.back().mono * dt[1].mono, quotient.size() - 1, 1});
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
  }
  return LaurentPoly::from_sorted_unique(std::move(quotient));
}

}  // namespace detail

// Exact division in Z[params][x^{±1}]. Division by a unit always succeeds.
inline DivResult exact_div(const LaurentPoly& p, const LaurentPoly& q) {
  if (q.is_zero()) throw AlgebraError("division by zero polynomial");
  if (p.is_zero()) return LaurentPoly{};
  if (q.is_monomial()) {
    const Term& d = q.leading();
    Monomial dl = d.mono.laurent_part(), dp = d.mono.param_part();
    std::vector<Term> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
      if (!dp.divides(t.mono.param_part()) || !mpz_divisible_p(t.coeff.get_mpz_t(), d.coeff.get_mpz_t()))
        return NotDivisible{t};
      out.push_back({t.mono / d.mono, t.coeff / d.coeff});
    }
    return LaurentPoly::from_sorted_unique(std::move(out));
  }
  auto [mp, pp] = strip_monomial(p);
  auto [mq, qq] = strip_monomial(q);
  DivResult r = detail::divide_polynomials(pp, qq);
  if (auto* quot = std::get_if<LaurentPoly>(&r)) return quot->mul_monomial(mp / mq);
  return r;
}

inline bool divides(const LaurentPoly& q, const LaurentPoly& p) {
  return std::holds_alternative<LaurentPoly>(exact_div(p, q));
}

// Throws when the division is not exact.
inline LaurentPoly div_exact_or_throw(const LaurentPoly& p, const LaurentPoly& q) {
  DivResult r = exact_div(p, q);
  if (auto* quot = std::get_if<LaurentPoly>(&r)) return std::move(*quot);
  throw AlgebraError("polynomial division is not exact");
}

// Coefficients of p viewed as a polynomial in x (after removing the x-part of
// the minimal monomial): result[k] multiplies x^(low + k).
inline std::vector<LaurentPoly> coefficients_in(const LaurentPoly& p, Var x, Exponent* low = nullptr) {
  Exponent lo = p.low_degree(x), hi = p.degree(x);
  if (low) *low = lo;
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& t : p.terms()) {
    Exponent e = t.mono.degree(x);
    buckets[static_cast<std::size_t>(e - lo)].push_back({t.mono * Monomial::var(x, -e), t.coeff});
  }
  std::vector<LaurentPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(LaurentPoly::from_terms(std::move(b)));
  return out;
}

// Substitutes polynomials for variables. Variables not in the map are kept.
// Negative exponents require the image to be a unit-coefficient monomial
// (otherwise the result is not a Laurent polynomial).
class Substitution {
 public:
  void set(Var v, LaurentPoly image) {
    images_[v] = std::move(image);
    powers_.erase(v);
  }

  LaurentPoly apply(const LaurentPoly& p) {
    std::vector<LaurentPoly> parts;
    parts.reserve(p.size());
    for (const auto& t : p.terms()) {
      LaurentPoly acc = LaurentPoly::monomial(Monomial{}, t.coeff);
      std::vector<Monomial::Factor> kept;
      for (const auto& [v, e] : t.mono.factors()) {
        auto it = images_.find(v);
        if (it == images_.end()) {
          kept.push_back({v, e});
          continue;
        }
        acc = acc * power(v, e);
      }
      parts.push_back(acc.mul_monomial(Monomial(std::move(kept))));
    }
    return LaurentPoly::sum(std::move(parts));
  }

 private:
  const LaurentPoly& power(Var v, Exponent e) {
    auto& cache = powers_[v];
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    const LaurentPoly& base = images_.at(v);
    LaurentPoly value;
    if (e >= 0) {
      value = base.pow(static_cast<unsigned>(e));
    } else {
      if (!base.is_unit())
        throw AlgebraError("negative power of a non-unit in substitution");
      const Term& t = base.leading();
      value = LaurentPoly::monomial(t.mono.pow(e), (e % 2 == 0) ? mpz_class(1) : t.coeff);
    }
    return cache.emplace(e, std::move(value)).first->second;
  }

  std::map<Var, LaurentPoly> images_;
  std::map<Var, std::map<Exponent, LaurentPoly>> powers_;
};

}  // namespace laurentlab
