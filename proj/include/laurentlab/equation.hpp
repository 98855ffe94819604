#pragma once

// Lattice equations f_h = Φ(f_{h+v_1}, ..., f_{h+v_N}).
//
// Placeholders: Y_i is Var i-1 for the shift v_i, Z is Var N and stands for
// f_h itself in the backward solution Ψ. Parameters are parameter variables.
// The equation file is a small TOML document:
//
//   name = "dkdv"
//   lattice = { rank = 2, torsion = [] }      # optional basis = [[...], ...]
//   params = { names = ["a", "b"], coprime = true }
//   rule = "f[0,0] = (a*f[-2,0]*f[0,-1] + b*f[-1,0]*f[-1,-1]) / f[-2,-1]"
//   backward = "..."                           # optional Ψ, may use f[0,0]

#include <optional>
#include <string>
#include <vector>

#include "laurentlab/config.hpp"
#include "laurentlab/evaluate.hpp"
#include "laurentlab/irreducible.hpp"
#include "laurentlab/lattice.hpp"
#include "laurentlab/text.hpp"

namespace laurentlab {

class EquationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EquationDef {
  std::string name;
  LatticeSpec spec;
  LatticeFrame frame;
  std::string fname = "f";
  std::vector<LatticePoint> shifts;
  std::optional<ShiftSystem> sys;  // absent when the shifts are dependent
  std::string dependence;          // reason when sys is absent
  bool minimum_found = false;
  VarTable table;
  LaurentPoly phi;
  LaurentPoly P;  // phi = P / Q with P free of negative Y exponents
  Monomial Q;
  std::optional<LaurentPoly> user_psi;
  std::vector<std::string> params;
  bool params_coprime = false;

  std::size_t N() const { return shifts.size(); }
  static Var y(std::size_t i) { return static_cast<Var>(i); }
  Var z() const { return static_cast<Var>(shifts.size()); }
  std::size_t min_index() const { return sys ? sys->min_index() : shifts.size() - 1; }

  const ShiftSystem& system() const {
    if (!sys) throw EquationError("equation has no valid shift system: " + dependence);
    return *sys;
  }

  std::string point_text(const LatticePoint& p) const {
    auto c = frame.to_ambient(p);
    std::string s = fname + "[";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + "]";
  }

  std::string rule_text() const { return point_text(spec.zero()) + " = " + to_string(phi, table); }
};

namespace detail {

inline std::string format_functional(const std::vector<mpq_class>& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + w[i].get_str();
  return s + ")";
}

}  // namespace detail

// Assembles an equation from shifts and Φ over Y_1..Y_N (Var 0..N-1) and the
// parameters in `params` (parameter indices in order).
inline EquationDef make_equation(std::string name, LatticeSpec spec, LatticeFrame frame, std::string fname,
                                 std::vector<LatticePoint> shifts, LaurentPoly phi, std::vector<std::string> params,
                                 bool coprime) {
  EquationDef eq;
  eq.name = std::move(name);
  eq.spec = std::move(spec);
  eq.frame = std::move(frame);
  eq.fname = std::move(fname);
  eq.shifts = std::move(shifts);
  eq.params = std::move(params);
  eq.params_coprime = coprime;
  if (eq.shifts.empty()) throw EquationError("equation without shifts");
  for (std::size_t i = 0; i < eq.shifts.size(); ++i) {
    if (eq.shifts[i].is_zero()) throw EquationError("shift 0 on the right-hand side");
    for (std::size_t j = 0; j < i; ++j)
      if (eq.shifts[i] == eq.shifts[j]) throw EquationError("duplicate shift " + eq.point_text(eq.shifts[i]));
  }
  for (std::size_t i = 0; i < eq.shifts.size(); ++i) eq.table.add_variable(eq.point_text(eq.shifts[i]));
  eq.table.add_variable(eq.point_text(eq.spec.zero()));
  for (const auto& p : eq.params) eq.table.add_param(p);
  for (Var v : phi.vars()) {
    if (is_param(v) ? (v & ~kParamBit) >= eq.params.size() : v >= eq.shifts.size())
      throw EquationError("right-hand side uses an undeclared variable");
  }
  eq.phi = std::move(phi);
  if (eq.phi.is_zero()) throw EquationError("right-hand side is zero");
  Monomial lo = eq.phi.min_laurent_monomial();
  std::vector<Monomial::Factor> neg;
  for (const auto& [v, e] : lo.factors())
    if (e < 0) neg.push_back({v, -e});
  eq.Q = Monomial(std::move(neg));
  eq.P = eq.phi.mul_monomial(eq.Q);

  try {
    ShiftSystem sys(eq.spec, eq.shifts, eq.shifts.size() - 1);
    for (std::size_t i = 0; i < eq.shifts.size(); ++i) {
      ShiftSystem candidate(eq.spec, eq.shifts, i);
      if (candidate.check_minimum_shift()) {
        sys = candidate;
        eq.minimum_found = true;
        break;
      }
    }
    eq.sys = sys;
  } catch (const LatticeError& e) {
    eq.dependence = e.what();
  }
  return eq;
}

namespace detail {

// Resolves f[...] references against the lattice; new shifts are appended.
struct ShiftResolver {
  const LatticeSpec& spec;
  const LatticeFrame& frame;
  std::string fname;
  std::vector<LatticePoint>& shifts;
  const VarTable& params;
  bool allow_new;
  std::optional<LatticePoint> forbidden;  // the minimum shift, inside Ψ
  Var zero_var;

  Var operator()(const Symbol& s, std::size_t pos) const {
    if (!s.index) {
      if (auto v = params.find(s.ident); v && is_param(*v)) return *v;
      throw ParseError("unknown symbol '" + s.ident + "'", pos);
    }
    if (s.ident != fname) throw ParseError("unknown function '" + s.ident + "'", pos);
    std::size_t want = frame.ambient_dim(spec);
    if (s.index->size() != want)
      throw ParseError("index of " + s.text() + " needs " + std::to_string(want) + " coordinates", pos);
    LatticePoint p;
    try {
      p = frame.from_ambient(spec, *s.index);
    } catch (const LatticeError& e) {
      throw ParseError(s.text() + ": " + e.what(), pos);
    }
    if (p.is_zero()) {
      if (zero_var != Var(-1)) return zero_var;
      throw ParseError("shift 0 used on the right-hand side", pos);
    }
    if (forbidden && p == *forbidden) throw ParseError(s.text() + " is the unknown being solved for", pos);
    for (std::size_t i = 0; i < shifts.size(); ++i)
      if (shifts[i] == p) return static_cast<Var>(i);
    if (!allow_new) throw ParseError(s.text() + " is not a shift of the equation", pos);
    shifts.push_back(p);
    return static_cast<Var>(shifts.size() - 1);
  }
};

inline LaurentPoly parse_with(std::string_view text, const ShiftResolver& r, std::size_t offset) {
  try {
    return ExpressionParser(text, r).parse_all();
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.position() + offset);
  }
}

inline std::pair<LatticeSpec, LatticeFrame> parse_lattice(const json& j) {
  if (!j.is_object()) throw ConfigError("lattice must be a table", 0);
  int rank = j.value("rank", -1);
  if (rank < 0) throw ConfigError("lattice.rank is required", 0);
  std::vector<long> torsion = j.value("torsion", std::vector<long>{});
  LatticeSpec spec(rank, torsion);
  LatticeFrame frame;
  if (j.contains("basis")) frame = LatticeFrame(j.at("basis").get<std::vector<std::vector<long>>>());
  if (!frame.is_identity() && !spec.is_free()) throw ConfigError("a lattice basis needs a free lattice", 0);
  if (!frame.is_identity() && frame.basis().size() != static_cast<std::size_t>(rank))
    throw ConfigError("lattice basis needs one vector per rank", 0);
  return {spec, frame};
}

}  // namespace detail

inline EquationDef equation_from_json(const json& doc) {
  if (!doc.contains("lattice")) throw ConfigError("missing 'lattice'", 0);
  if (!doc.contains("rule")) throw ConfigError("missing 'rule'", 0);
  auto [spec, frame] = detail::parse_lattice(doc.at("lattice"));
  std::vector<std::string> params;
  bool coprime = false;
  if (doc.contains("params")) {
    const json& p = doc.at("params");
    if (p.is_array()) {
      params = p.get<std::vector<std::string>>();
    } else {
      params = p.value("names", std::vector<std::string>{});
      coprime = p.value("coprime", false);
    }
  }
  VarTable ptable;
  for (const auto& n : params) ptable.add_param(n);

  std::string rule = doc.at("rule").get<std::string>();
  auto eqpos = rule.find('=');
  if (eqpos == std::string::npos) throw ParseError("rule needs 'lhs = rhs'", 0);
  std::string lhs = rule.substr(0, eqpos);
  std::string fname;
  {
    std::size_t i = 0;
    while (i < lhs.size() && std::isspace(static_cast<unsigned char>(lhs[i]))) ++i;
    std::size_t start = i;
    while (i < lhs.size() && (std::isalnum(static_cast<unsigned char>(lhs[i])) || lhs[i] == '_')) ++i;
    fname = lhs.substr(start, i - start);
    if (fname.empty()) throw ParseError("left-hand side must be f[0,...,0]", start);
  }
  {
    std::vector<LatticePoint> tmp;
    detail::ShiftResolver r{spec, frame, fname, tmp, ptable, true, std::nullopt, 0};
    LaurentPoly l = detail::parse_with(lhs, r, 0);
    if (!(l == LaurentPoly::var(0)) || !tmp.empty())
      throw ParseError("left-hand side must be " + fname + "[0,...,0]", 0);
  }
  // An explicit list fixes the shift numbering; otherwise first appearance.
  std::vector<LatticePoint> shifts;
  if (doc.contains("shifts")) {
    for (const auto& c : doc.at("shifts")) {
      try {
        shifts.push_back(frame.from_ambient(spec, c.get<std::vector<long>>()));
      } catch (const LatticeError& e) {
        throw ConfigError(std::string("shifts: ") + e.what(), 0);
      }
    }
  }
  LaurentPoly phi;
  {
    detail::ShiftResolver r{spec, frame, fname, shifts, ptable, true, std::nullopt, Var(-1)};
    phi = detail::parse_with(std::string_view(rule).substr(eqpos + 1), r, eqpos + 1);
  }
  EquationDef eq = make_equation(doc.value("name", std::string("equation")), spec, frame, fname, shifts, phi, params,
                                 coprime);
  if (doc.contains("backward")) {
    std::string text = doc.at("backward").get<std::string>();
    std::vector<LatticePoint> same = eq.shifts;
    detail::ShiftResolver r{eq.spec, eq.frame, eq.fname, same, ptable, false, eq.shifts[eq.min_index()], eq.z()};
    eq.user_psi = detail::parse_with(text, r, 0);
  }
  return eq;
}

inline EquationDef parse_equation(std::string_view text) { return equation_from_json(parse_config(text)); }

inline EquationDef load_equation(const std::string& path) { return parse_equation(read_file(path)); }

// p with x replaced by the rational function r.
inline RationalFunction substitute(const LaurentPoly& p, Var x, const RationalFunction& r) {
  if (!p.contains_var(x)) return RationalFunction(p);
  Exponent low = 0;
  auto cs = coefficients_in(p, x, &low);
  RationalFunction acc(LaurentPoly{});
  RationalFunction inv = r.num().is_zero() ? RationalFunction(LaurentPoly{}) : RationalFunction(r.den(), r.num());
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (cs[k].is_zero()) continue;
    Exponent e = low + static_cast<Exponent>(k);
    const RationalFunction& base = e < 0 ? inv : r;
    if (e < 0 && r.num().is_zero()) throw AlgebraError("negative power of zero in substitution");
    LaurentPoly num = base.num().pow(static_cast<unsigned>(e < 0 ? -e : e));
    LaurentPoly den = base.den().pow(static_cast<unsigned>(e < 0 ? -e : e));
    acc = acc + RationalFunction(cs[k] * num, den);
  }
  return acc;
}

struct BackwardResult {
  std::optional<LaurentPoly> psi;
  std::string method;  // "inverse", "linear", "user"
  std::string error;   // NoAutoSolve or RoundTripFailed reason
  bool ok() const { return psi.has_value(); }
};

// Φ(Y, Ψ) = Z and Ψ(Y, Φ) = Y_N as identities of rational functions.
inline bool backward_round_trip(const EquationDef& eq, const LaurentPoly& psi) {
  Var yn = EquationDef::y(eq.min_index());
  if (psi.contains_var(yn)) return false;
  RationalFunction forward = substitute(eq.phi, yn, RationalFunction(psi));
  if (!(forward == RationalFunction(LaurentPoly::var(eq.z())))) return false;
  RationalFunction back = substitute(psi, eq.z(), RationalFunction(eq.phi));
  return back == RationalFunction(LaurentPoly::var(yn));
}

// Solves Φ for Y_N. Handled shapes: Φ = A / Y_N and Φ = M Y_N + B with a unit
// monomial M, where A, M, B are free of Y_N. A user-supplied Ψ takes
// precedence and is checked the same way.
inline BackwardResult solve_backward(const EquationDef& eq) {
  BackwardResult r;
  Var yn = EquationDef::y(eq.min_index());
  if (eq.user_psi) {
    r.method = "user";
    if (backward_round_trip(eq, *eq.user_psi))
      r.psi = eq.user_psi;
    else
      r.error = "RoundTripFailed: supplied backward solution does not invert the rule";
    return r;
  }
  Exponent low = 0;
  auto cs = coefficients_in(eq.phi, yn, &low);
  LaurentPoly z = LaurentPoly::var(eq.z());
  std::optional<LaurentPoly> cand;
  if (cs.size() == 1 && low == -1) {
    r.method = "inverse";
    cand = cs[0] * LaurentPoly::var(eq.z(), -1);
  } else if (low <= 0 && low + static_cast<Exponent>(cs.size()) - 1 == 1) {
    // Φ = B + M Y_N with nothing else in Y_N.
    bool shape = true;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      Exponent e = low + static_cast<Exponent>(k);
      if (e != 0 && e != 1 && !cs[k].is_zero()) shape = false;
    }
    const LaurentPoly& M = cs.back();
    LaurentPoly B = low == 0 ? cs[0] : LaurentPoly{};
    if (shape && M.is_unit()) {
      r.method = "linear";
      const Term& t = M.leading();
      LaurentPoly Minv = LaurentPoly::monomial(t.mono.inverse(), t.coeff);
      cand = (z - B) * Minv;
    }
  }
  if (!cand) {
    r.error = "NoAutoSolve: the rule is neither A/Y_N nor M*Y_N + B with a unit monomial M";
    return r;
  }
  if (!backward_round_trip(eq, *cand)) {
    r.error = "RoundTripFailed: automatic backward solution does not invert the rule";
    return r;
  }
  r.psi = cand;
  return r;
}

struct AssumptionItem {
  enum class Status { Pass, Fail, Unknown };
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};

inline const char* to_string(AssumptionItem::Status s) {
  switch (s) {
    case AssumptionItem::Status::Pass: return "pass";
    case AssumptionItem::Status::Fail: return "fail";
    case AssumptionItem::Status::Unknown: return "unknown";
  }
  return "?";
}

struct AssumptionReport {
  std::vector<AssumptionItem> items;
  std::optional<LaurentPoly> psi;

  bool any(AssumptionItem::Status s) const {
    return std::any_of(items.begin(), items.end(), [&](const AssumptionItem& i) { return i.status == s; });
  }
  bool passed() const { return !any(AssumptionItem::Status::Fail); }
  const AssumptionItem& item(const std::string& name) const {
    for (const auto& i : items)
      if (i.name == name) return i;
    throw std::out_of_range("no assumption item " + name);
  }
};

inline AssumptionReport validate_equation(const EquationDef& eq, const IrreducibilityOptions& opt = {}) {
  using S = AssumptionItem::Status;
  AssumptionReport rep;
  auto add = [&](std::string name, S s, std::string detail) { rep.items.push_back({std::move(name), s, std::move(detail)}); };

  add("shifts-distinct", S::Pass, std::to_string(eq.N()) + " distinct nonzero shifts");
  bool gen = check_generates(eq.spec, eq.shifts);
  add("shifts-generate", gen ? S::Pass : S::Fail, gen ? "shifts generate the lattice" : "shifts span a proper sublattice");

  std::string missing;
  for (std::size_t i = 0; i < eq.N(); ++i)
    if (!eq.phi.contains_var(EquationDef::y(i))) missing += (missing.empty() ? "" : ", ") + eq.table.name(EquationDef::y(i));
  add("rule-depends-on-all", missing.empty() ? S::Pass : S::Fail,
      missing.empty() ? "every shift occurs" : "rule does not depend on " + missing);

  bool mono = eq.phi.is_monomial();
  add("rule-not-monomial", mono ? S::Fail : S::Pass, mono ? "rule is a Laurent monomial" : "rule has several terms");

  IrreducibilityVerdict v = certify_irreducible(eq.phi, opt);
  add("rule-irreducible", v.irreducible() ? S::Pass : v.reducible() ? S::Fail : S::Unknown,
      v.reducible() ? "factor " + to_string(v.factor, eq.table) : v.unknown() ? v.note : "certified");

  if (eq.sys)
    add("independent", S::Pass, "separating functional w = " + detail::format_functional(eq.sys->functional()));
  else
    add("independent", S::Fail, eq.dependence);

  if (!eq.sys)
    add("minimum-shift", S::Fail, "no order without independence");
  else if (eq.minimum_found)
    add("minimum-shift", S::Pass, "v_N = " + eq.point_text(eq.sys->minimum()));
  else
    add("minimum-shift", S::Fail, "no shift lies below all others and 0");

  if (!eq.sys || !eq.minimum_found) {
    add("backward-solvable", S::Fail, "needs a minimum shift");
    return rep;
  }
  BackwardResult b = solve_backward(eq);
  if (!b.ok()) {
    add("backward-solvable", S::Fail, b.error);
    return rep;
  }
  rep.psi = b.psi;
  add("backward-solvable", S::Pass, b.method + ": " + eq.table.name(EquationDef::y(eq.min_index())) + " = " +
                                        to_string(*b.psi, eq.table));
  IrreducibilityVerdict pv = certify_irreducible(*b.psi, opt);
  add("backward-irreducible", pv.irreducible() ? S::Pass : pv.reducible() ? S::Fail : S::Unknown,
      pv.reducible() ? "factor " + to_string(pv.factor, eq.table) : pv.unknown() ? pv.note : "certified");
  return rep;
}

// Equation file text that parses back to the same equation.
inline std::string equation_to_text(const EquationDef& eq) {
  std::ostringstream os;
  os << "name = " << json(eq.name).dump() << "\n";
  os << "lattice = { rank = " << eq.spec.rank() << ", torsion = [";
  for (std::size_t i = 0; i < eq.spec.torsion().size(); ++i) os << (i ? ", " : "") << eq.spec.torsion()[i];
  os << "]";
  if (!eq.frame.is_identity()) {
    os << ", basis = [";
    for (int i = 0; i < eq.spec.rank(); ++i) {
      auto c = eq.frame.to_ambient(eq.spec.generator(static_cast<std::size_t>(i)));
      os << (i ? ", " : "") << "[";
      for (std::size_t k = 0; k < c.size(); ++k) os << (k ? ", " : "") << c[k];
      os << "]";
    }
    os << "]";
  }
  os << " }\n";
  os << "params = { names = [";
  for (std::size_t i = 0; i < eq.params.size(); ++i) os << (i ? ", " : "") << json(eq.params[i]).dump();
  os << "], coprime = " << (eq.params_coprime ? "true" : "false") << " }\n";
  os << "shifts = [";
  for (std::size_t i = 0; i < eq.N(); ++i) {
    auto c = eq.frame.to_ambient(eq.shifts[i]);
    os << (i ? ", " : "") << "[";
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? ", " : "") << c[k];
    os << "]";
  }
  os << "]\n";
  os << "rule = " << json(eq.rule_text()).dump() << "\n";
  if (eq.user_psi) os << "backward = " << json(to_string(*eq.user_psi, eq.table)).dump() << "\n";
  return os.str();
}

}  // namespace laurentlab
