#pragma once

// Symbolic iterates f_h of an equation on a domain. Boundary points carry
// independent variables; other points are computed from their past cone in
// topological order as P(f_{h+v_i}) / Q(f_{h+v_i}) with an exact division,
// whose failure is recorded as a NonLaurent witness.

#include <map>
#include <mutex>
#include <set>
#include <unordered_map>
#include <variant>

#include "laurentlab/domain.hpp"
#include "laurentlab/equation.hpp"

namespace laurentlab {

struct NonLaurent {
  LatticePoint at;       // first point whose division failed
  LaurentPoly numerator;
  LaurentPoly divisor;
  Term witness;          // leading remainder term
};

using IterateResult = std::variant<LaurentPoly, NonLaurent>;

inline bool is_laurent(const IterateResult& r) { return std::holds_alternative<LaurentPoly>(r); }

class Evolution {
 public:
  Evolution(const EquationDef& eq, Domain H) : eq_(eq), sys_(eq.system()), H_(std::move(H)) {
    if (!(H_.spec() == eq_.spec)) throw DomainError("domain and equation live in different lattices");
    for (const auto& p : eq_.params) table_.add_param(p);
  }

  const EquationDef& equation() const { return eq_; }
  const ShiftSystem& system() const { return sys_; }
  const Domain& domain() const { return H_; }
  const VarTable& table() const { return table_; }

  bool on_boundary(const LatticePoint& h) const { return initial_boundary_contains(sys_, H_, h); }

  // Boundary variable for h, created on first use.
  Var variable(const LatticePoint& h) {
    std::lock_guard lock(mu_);
    return variable_locked(h);
  }

  std::optional<LatticePoint> point_of(Var v) const {
    std::lock_guard lock(mu_);
    auto it = points_.find(v);
    if (it == points_.end()) return std::nullopt;
    return it->second;
  }

  // Registers the boundary variables of the given past cones in sorted point
  // order, so that variable numbering does not depend on evaluation order.
  void register_boundary(const std::vector<LatticePoint>& window) {
    std::set<LatticePoint> boundary;
    for (const auto& h : window)
      for (const auto& p : past_cone(sys_, H_, h).points)
        if (on_boundary(p)) boundary.insert(p);
    std::lock_guard lock(mu_);
    for (const auto& p : boundary) variable_locked(p);
  }

  IterateResult at(const LatticePoint& h) {
    if (auto r = cached(h)) return *r;
    if (!H_.contains(h)) throw DomainError("point " + eq_.point_text(h) + " is not in the domain");
    PastCone pc = past_cone(sys_, H_, h);
    for (const auto& p : pc.points) {
      if (find(p)) continue;
      IterateResult r = compute(p);
      std::lock_guard lock(mu_);
      memo_.emplace(p, std::move(r));
    }
    return *cached(h);
  }

  // Boundary points whose variables occur in f_h.
  std::set<LatticePoint> support(const LatticePoint& h) {
    IterateResult r = at(h);
    const auto* p = std::get_if<LaurentPoly>(&r);
    if (!p) throw DomainError("iterate at " + eq_.point_text(h) + " is not a Laurent polynomial");
    std::set<LatticePoint> out;
    for (Var v : p->vars())
      if (!is_param(v)) out.insert(*point_of(v));
    return out;
  }

  // Expression in boundary variables f[...] and parameters.
  LaurentPoly parse(std::string_view text) {
    ExpressionParser parser(text, [&](const Symbol& s, std::size_t pos) -> Var {
      if (!s.index) {
        if (auto v = table_.find(s.ident); v && is_param(*v)) return *v;
        throw ParseError("unknown symbol '" + s.ident + "'", pos);
      }
      if (s.ident != eq_.fname) throw ParseError("unknown function '" + s.ident + "'", pos);
      LatticePoint p;
      try {
        p = eq_.frame.from_ambient(eq_.spec, *s.index);
      } catch (const LatticeError& e) {
        throw ParseError(s.text() + ": " + e.what(), pos);
      }
      if (!on_boundary(p)) throw ParseError(s.text() + " is not an initial boundary point", pos);
      return variable(p);
    });
    return parser.parse_all();
  }

  std::string format(const LaurentPoly& p) const {
    std::lock_guard lock(mu_);
    return to_string(p, table_);
  }

 private:
  std::optional<IterateResult> cached(const LatticePoint& h) const {
    if (const IterateResult* r = find(h)) return *r;
    return std::nullopt;
  }

  // Memo entries are never erased, so the pointer stays valid.
  const IterateResult* find(const LatticePoint& h) const {
    std::lock_guard lock(mu_);
    auto it = memo_.find(h);
    return it == memo_.end() ? nullptr : &it->second;
  }

  Var variable_locked(const LatticePoint& h) {
    auto it = vars_.find(h);
    if (it != vars_.end()) return it->second;
    Var v = table_.add_variable(eq_.point_text(h));
    vars_.emplace(h, v);
    points_.emplace(v, h);
    return v;
  }

  // All dependencies of p are already memoized.
  IterateResult compute(const LatticePoint& p) {
    if (on_boundary(p)) return LaurentPoly::var(variable(p));
    const LatticeSpec& spec = eq_.spec;
    Substitution sub;
    for (std::size_t i = 0; i < eq_.N(); ++i) {
      const IterateResult* dep = find(spec.add(p, eq_.shifts[i]));
      if (auto* bad = std::get_if<NonLaurent>(dep)) return *bad;
      sub.set(EquationDef::y(i), std::get<LaurentPoly>(*dep));
    }
    LaurentPoly num = sub.apply(eq_.P);
    LaurentPoly den = sub.apply(LaurentPoly::monomial(eq_.Q, 1));
    DivResult q = exact_div(num, den);
    if (auto* nd = std::get_if<NotDivisible>(&q)) return NonLaurent{p, num, den, nd->witness};
    return std::get<LaurentPoly>(std::move(q));
  }

  EquationDef eq_;
  ShiftSystem sys_;
  Domain H_;
  mutable std::mutex mu_;
  VarTable table_;
  std::unordered_map<LatticePoint, Var, LatticePointHash> vars_;
  std::map<Var, LatticePoint> points_;
  std::unordered_map<LatticePoint, IterateResult, LatticePointHash> memo_;
};

// Rational values of f on the past cones of `targets`, computed straight from
// the rule with the given boundary data and parameter values. nullopt when
// the data is singular (a zero value under a negative exponent).
inline std::optional<std::map<LatticePoint, mpq_class>> numeric_recursion(
    const EquationDef& eq, const Domain& H, const std::vector<LatticePoint>& targets,
    const std::function<mpq_class(const LatticePoint&)>& boundary, const std::map<std::string, mpq_class>& params) {
  ShiftSystem sys = eq.system();
  Assignment at;
  for (const auto& [name, v] : params) {
    auto var = eq.table.find(name);
    if (!var || !is_param(*var)) throw EquationError("unknown parameter '" + name + "'");
    at[*var] = v;
  }
  std::map<LatticePoint, mpq_class> value;
  for (const auto& h : targets) {
    for (const auto& p : past_cone(sys, H, h).points) {
      if (value.count(p)) continue;
      if (initial_boundary_contains(sys, H, p)) {
        value[p] = boundary(p);
        continue;
      }
      for (std::size_t i = 0; i < eq.N(); ++i) at[EquationDef::y(i)] = value.at(eq.spec.add(p, eq.shifts[i]));
      try {
        value[p] = evaluate(eq.phi, at, {.allow_zero = true});
      } catch (const PreconditionError&) {
        return std::nullopt;
      }
    }
  }
  return value;
}

}  // namespace laurentlab
