#pragma once

// Reductions: surjective Z-linear maps phi that send the shifts to
// Z>=0-independent images, the reduced equation on the target lattice, lifted
// domains, and a numeric check that evolution commutes with phi.

#include <random>

#include "laurentlab/evolution.hpp"

namespace laurentlab {

class ReductionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ReductionCheck {
  bool valid = false;
  std::string reason;                 // set when invalid
  std::vector<LatticePoint> images;   // phi(v_i), in shift order
  std::vector<std::size_t> slot;      // index of phi(v_i) among the distinct images
  std::vector<LatticePoint> distinct; // in order of first appearance
  bool merged() const { return distinct.size() < images.size(); }
};

inline ReductionCheck check_reduction(const LatticeMap& phi, const EquationDef& eq) {
  ReductionCheck r;
  if (!(phi.source() == eq.spec)) {
    r.reason = "map source differs from the equation lattice";
    return r;
  }
  if (!phi.well_defined()) {
    r.reason = "map is not well defined on the torsion part";
    return r;
  }
  if (!phi.surjective()) {
    r.reason = "map is not surjective";
    return r;
  }
  for (const auto& v : eq.shifts) {
    LatticePoint im = phi.apply(v);
    r.images.push_back(im);
    auto it = std::find(r.distinct.begin(), r.distinct.end(), im);
    r.slot.push_back(static_cast<std::size_t>(it - r.distinct.begin()));
    if (it == r.distinct.end()) r.distinct.push_back(im);
  }
  for (std::size_t i = 0; i < r.images.size(); ++i)
    if (r.images[i].is_zero()) {
      r.reason = "image of shift " + eq.point_text(eq.shifts[i]) + " is 0";
      return r;
    }
  IndependenceVerdict ind = check_znn_independence(phi.target(), r.distinct);
  if (auto* d = std::get_if<Dependent>(&ind)) {
    std::string w;
    for (long x : d->witness) w += (w.empty() ? "" : ",") + std::to_string(x);
    r.reason = "images are dependent over Z>=0, witness (" + w + ")";
    return r;
  }
  r.valid = true;
  return r;
}

struct ReducedEquation {
  EquationDef eq;
  ReductionCheck check;
  std::vector<std::string> flags;  // merged shifts, lost dependence, reducible rule, moved minimum
};

// Shifts of the reduced equation are the distinct images in order of first
// appearance; coincident images share one placeholder.
inline ReducedEquation reduce_equation(const LatticeMap& phi, const EquationDef& eq) {
  ReductionCheck chk = check_reduction(phi, eq);
  if (!chk.valid) throw ReductionError(chk.reason);
  Substitution sub;
  for (std::size_t i = 0; i < eq.N(); ++i)
    sub.set(EquationDef::y(i), LaurentPoly::var(EquationDef::y(chk.slot[i])));
  LaurentPoly rule = sub.apply(eq.phi);
  if (rule.is_monomial()) throw ReductionError("reduced rule degenerates to a monomial");
  ReducedEquation out{make_equation(eq.name + "_reduced", phi.target(), LatticeFrame{}, eq.fname, chk.distinct, rule,
                                    eq.params, eq.params_coprime),
                      chk,
                      {}};
  if (chk.merged()) out.flags.push_back("coincident images merged");
  for (std::size_t k = 0; k < chk.distinct.size(); ++k)
    if (!rule.contains_var(EquationDef::y(k)))
      out.flags.push_back("rule no longer depends on " + out.eq.point_text(chk.distinct[k]));
  if (!out.eq.minimum_found)
    out.flags.push_back("no minimum shift among the images");
  else if (out.eq.shifts[out.eq.min_index()] != chk.images[eq.min_index()])
    out.flags.push_back("minimum moved away from the image of " + eq.point_text(eq.shifts[eq.min_index()]));
  if (certify_irreducible(rule).reducible()) out.flags.push_back("reduced rule is reducible");
  return out;
}

inline Domain lift_domain(const LatticeMap& phi, const Domain& target) {
  if (!phi.well_defined() || !phi.surjective()) throw ReductionError("lift along an invalid map");
  return Domain::lift(phi, target);
}

struct CommutationReport {
  std::size_t points = 0;
  std::size_t singular_draws = 0;
  std::vector<LatticePoint> mismatches;
  bool pass() const { return mismatches.empty() && points > 0; }
};

// Boundary data on the lifted domain is pulled back from random data g on the
// target, so it is constant on phi-fibres. Values of the source recursion at h
// must equal values of the reduced recursion at phi(h).
inline CommutationReport commutation_check(const LatticeMap& phi, const EquationDef& eq, const Domain& target,
                                           const std::vector<LatticePoint>& window, std::uint64_t seed,
                                           int max_retries = 20) {
  ReducedEquation red = reduce_equation(phi, eq);
  Domain lifted = lift_domain(phi, target);
  std::vector<LatticePoint> images;
  for (const auto& h : window) images.push_back(phi.apply(h));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-30, 30), den(1, 12);
  auto draw = [&] {
    long n = 0;
    while (n == 0) n = num(rng);
    mpq_class q(n, den(rng));
    q.canonicalize();
    return q;
  };
  CommutationReport rep;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    std::map<LatticePoint, mpq_class> g;
    auto data = [&](const LatticePoint& k) {
      auto it = g.find(k);
      if (it == g.end()) it = g.emplace(k, draw()).first;
      return it->second;
    };
    std::map<std::string, mpq_class> params;
    for (const auto& p : eq.params) params[p] = draw();
    auto lower = numeric_recursion(red.eq, target, images, data, params);
    auto upper = lower ? numeric_recursion(eq, lifted, window, [&](const LatticePoint& h) { return data(phi.apply(h)); },
                                           params)
                       : std::nullopt;
    if (!lower || !upper) {
      ++rep.singular_draws;
      continue;
    }
    for (std::size_t i = 0; i < window.size(); ++i) {
      ++rep.points;
      if (upper->at(window[i]) != lower->at(images[i])) rep.mismatches.push_back(window[i]);
    }
    return rep;
  }
  throw ReductionError("retry budget exhausted: every draw was singular");
}

}  // namespace laurentlab
