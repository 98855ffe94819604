#pragma once

// Point evaluation, vanishing witnesses, monomial independence tests and a
// plain fraction type used for identities between rational functions.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "laurentlab/gcd.hpp"
#include "laurentlab/irreducible.hpp"
#include "laurentlab/matrix.hpp"
#include "laurentlab/univariate.hpp"

namespace laurentlab {

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Assignment = std::map<Var, mpq_class>;

struct EvalOptions {
  bool allow_zero = false;  // zero is still rejected under a negative exponent
};

inline mpq_class evaluate(const LaurentPoly& p, const Assignment& at, EvalOptions opt = {}) {
  mpq_class sum = 0;
  std::map<std::pair<Var, Exponent>, mpq_class> cache;
  for (const auto& t : p.terms()) {
    mpq_class v = t.coeff;
    for (const auto& [x, e] : t.mono.factors()) {
      auto it = at.find(x);
      if (it == at.end()) throw PreconditionError("no value assigned to variable " + std::to_string(x & ~kParamBit));
      const mpq_class& val = it->second;
      if (val == 0 && !is_param(x)) {
        if (e < 0) throw PreconditionError("zero assigned to a variable with negative exponent");
        if (!opt.allow_zero) throw PreconditionError("zero assigned to a Laurent variable");
      }
      auto key = std::make_pair(x, e);
      auto c = cache.find(key);
      if (c == cache.end()) {
        mpq_class pw = 1;
        mpq_class base = e < 0 ? mpq_class(1 / val) : val;
        for (Exponent k = 0; k < (e < 0 ? -e : e); ++k) pw *= base;
        c = cache.emplace(key, pw).first;
      }
      v *= c->second;
    }
    sum += v;
  }
  return sum;
}

// Separate maps for Laurent variables and parameters.
inline mpq_class evaluate(const LaurentPoly& p, const Assignment& vars, const Assignment& params,
                          EvalOptions opt = {}) {
  Assignment all = vars;
  for (const auto& [k, v] : params) all[k] = v;
  return evaluate(p, all, opt);
}

// Searches for an all-nonzero rational point where target vanishes and no
// polynomial in `avoid` does. Parameters are specialized as well. Each
// attempt fixes random values for all variables but one and looks for a
// nonzero rational root of the resulting univariate polynomial.
inline std::optional<Assignment> vanishing_witness(const LaurentPoly& target, const std::vector<LaurentPoly>& avoid,
                                                   int budget, std::uint64_t seed = 1) {
  if (target.is_zero()) throw PreconditionError("target is zero");
  if (target.is_unit()) throw PreconditionError("a unit has no vanishing witness");
  LaurentPoly q = normalize_associate(target);
  if (q.is_constant()) return std::nullopt;

  std::set<Var> all;
  for (Var v : target.vars()) all.insert(v);
  for (const auto& a : avoid)
    for (Var v : a.vars()) all.insert(v);
  std::vector<Var> pivots;
  for (Var v : q.vars())
    if (q.degree(v) > 0) pivots.push_back(v);

  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < budget; ++attempt) {
    Var x = pivots[static_cast<std::size_t>(attempt) % pivots.size()];
    long box = 3L + attempt;
    std::uniform_int_distribution<long> mag(1, box);
    std::bernoulli_distribution sign(0.5);
    std::map<Var, mpz_class> ints;
    for (Var v : all)
      if (v != x) ints[v] = sign(rng) ? -mag(rng) : mag(rng);
    uni::ZPoly f = specialize_to_univariate(q, x, ints);
    if (uni::degree(f) < 1) continue;
    uni::Factorization fz = uni::factor(f, seed + static_cast<std::uint64_t>(attempt));
    for (const auto& [g, mult] : fz.factors) {
      if (uni::degree(g) != 1 || g[0] == 0) continue;
      Assignment point;
      for (const auto& [v, c] : ints) point[v] = mpq_class(c);
      point[x] = mpq_class(-g[0], g[1]);
      point[x].canonicalize();
      if (evaluate(target, point) != 0) continue;
      bool ok = true;
      for (const auto& a : avoid)
        if (evaluate(a, point) == 0) {
          ok = false;
          break;
        }
      if (ok) return point;
    }
  }
  return std::nullopt;
}

// Pairwise distinct exponent vectors.
inline bool monomials_zdep_test(const std::vector<Monomial>& ms) {
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (ms[i] == ms[j]) return false;
  return true;
}

// Exponent vectors of the given monomials as matrix columns.
inline IntMatrix exponent_matrix(const std::vector<Monomial>& ms) {
  std::set<Var> vars;
  for (const auto& m : ms)
    for (const auto& [v, e] : m.factors()) vars.insert(v);
  std::vector<Var> order(vars.begin(), vars.end());
  IntMatrix a(order.size(), ms.size());
  for (std::size_t j = 0; j < ms.size(); ++j)
    for (std::size_t i = 0; i < order.size(); ++i) a(i, j) = ms[j].degree(order[i]);
  return a;
}

// Whether phi(g_1, ..., g_N) is a Laurent monomial, where the g_i are unit
// monomials with linearly independent exponent vectors.
inline bool compose_is_monomial_check(const LaurentPoly& phi, const std::vector<Var>& placeholders,
                                      const std::vector<LaurentPoly>& gs) {
  if (placeholders.size() != gs.size()) throw PreconditionError("placeholder count differs from image count");
  std::vector<Monomial> ms;
  for (const auto& g : gs) {
    if (!g.is_monomial()) throw PreconditionError("image is not a monomial");
    ms.push_back(g.leading().mono);
  }
  if (rank(exponent_matrix(ms)) != ms.size())
    throw PreconditionError("image monomials are algebraically dependent");
  Substitution s;
  for (std::size_t i = 0; i < gs.size(); ++i) s.set(placeholders[i], gs[i]);
  LaurentPoly r = s.apply(phi);
  return r.is_monomial();
}

// num/den with den != 0; no automatic cancellation.
class RationalFunction {
 public:
  RationalFunction(LaurentPoly num = {}, LaurentPoly den = LaurentPoly(1)) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw AlgebraError("zero denominator");
  }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return {a.num_ - b.num_, a.den_};
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.num_.is_zero()) throw AlgebraError("division by zero rational function");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }

  // Cancels the GCD of numerator and denominator.
  RationalFunction reduced() const {
    if (num_.is_zero()) return {LaurentPoly{}, LaurentPoly(1)};
    LaurentPoly g = gcd(num_, den_);
    return {div_exact_or_throw(num_, g), div_exact_or_throw(den_, g)};
  }

  // Laurent polynomial value when the denominator divides the numerator.
  std::optional<LaurentPoly> as_laurent() const {
    DivResult r = exact_div(num_, den_);
    if (auto* q = std::get_if<LaurentPoly>(&r)) return *q;
    return std::nullopt;
  }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

 private:
  LaurentPoly num_, den_;
};

}  // namespace laurentlab
