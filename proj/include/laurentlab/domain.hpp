#pragma once

// Light-cone regular domains H in a lattice L, their initial boundaries,
// past cones H ∩ (h + S), d_H and domain mutation.
//
// A domain is an immutable tree of nodes shared by pointer, so domains are
// cheap values. Membership never needs the shift system except for future
// cone unions, which carry their own.

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "laurentlab/lattice.hpp"

namespace laurentlab {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown by mutate; `witness` is a member strictly below the requested point.
class NotMinimal : public DomainError {
 public:
  NotMinimal(const LatticePoint& at, LatticePoint witness)
      : DomainError("point " + format_point(at) + " is not minimal; " + format_point(witness) + " lies below it"),
        witness(std::move(witness)) {}
  LatticePoint witness;
};

class Domain;

namespace domain_node {

// w . h >= c on the free part.
struct HalfSpace {
  std::vector<mpq_class> w;
  mpq_class c;
};
struct Intersection {
  std::vector<Domain> parts;
};
// Union of g - S over the generators g.
struct FutureConeUnion {
  ShiftSystem sys;
  std::vector<LatticePoint> generators;
};
struct Custom {
  std::string name;
  std::function<bool(const LatticePoint&)> member;
  bool declared_regular = false;
};

}  // namespace domain_node

class Domain {
 public:
  using HalfSpace = domain_node::HalfSpace;
  using Intersection = domain_node::Intersection;
  using FutureConeUnion = domain_node::FutureConeUnion;
  using Custom = domain_node::Custom;

  struct Translate;
  struct Mutated;
  struct Lifted;
  using Node = std::variant<HalfSpace, Intersection, FutureConeUnion, std::shared_ptr<const Translate>,
                            std::shared_ptr<const Mutated>, std::shared_ptr<const Lifted>, Custom>;

  Domain() = default;

  static Domain half_space(const LatticeSpec& spec, std::vector<mpq_class> w, mpq_class c) {
    if (w.size() != static_cast<std::size_t>(spec.rank())) throw DomainError("half-space normal has wrong length");
    return Domain(spec, HalfSpace{std::move(w), std::move(c)});
  }
  static Domain intersection(std::vector<Domain> parts) {
    if (parts.empty()) throw DomainError("empty intersection");
    LatticeSpec spec = parts.front().spec();
    for (const auto& p : parts)
      if (!(p.spec() == spec)) throw DomainError("intersection of domains in different lattices");
    return Domain(spec, Intersection{std::move(parts)});
  }
  static Domain future_cones(const ShiftSystem& sys, std::vector<LatticePoint> gens) {
    if (gens.empty()) throw DomainError("future cone union needs a generator");
    for (const auto& g : gens)
      if (!sys.spec().contains(g)) throw DomainError("generator " + format_point(g) + " is not a lattice point");
    return Domain(sys.spec(), FutureConeUnion{sys, std::move(gens)});
  }
  static Domain custom(const LatticeSpec& spec, std::string name, std::function<bool(const LatticePoint&)> member,
                       bool declared_regular) {
    return Domain(spec, Custom{std::move(name), std::move(member), declared_regular});
  }
  static Domain translate(const Domain& base, const LatticePoint& v);
  static Domain lift(const LatticeMap& map, const Domain& base);

  const LatticeSpec& spec() const { return spec_; }
  const Node& node() const { return *node_; }
  bool contains(const LatticePoint& h) const;
  std::string describe() const;

  // Points removed by mutation, outermost last; empty for other kinds.
  std::vector<LatticePoint> removed_points() const;

 private:
  friend Domain mutate_unchecked(const Domain&, const LatticePoint&);
  Domain(LatticeSpec spec, Node n) : spec_(std::move(spec)), node_(std::make_shared<const Node>(std::move(n))) {}

  LatticeSpec spec_;
  std::shared_ptr<const Node> node_;
};

struct Domain::Translate {
  Domain base;
  LatticePoint v;
};
struct Domain::Mutated {
  Domain base;
  std::vector<LatticePoint> removed;  // in removal order
};
struct Domain::Lifted {
  LatticeMap map;
  Domain base;  // in the target lattice
};

inline Domain Domain::translate(const Domain& base, const LatticePoint& v) {
  if (!base.spec().contains(v)) throw DomainError("translation vector is not a lattice point");
  return Domain(base.spec(), std::make_shared<const Translate>(Translate{base, v}));
}

inline Domain Domain::lift(const LatticeMap& map, const Domain& base) {
  if (!(map.target() == base.spec())) throw DomainError("lifted domain lives in a different lattice than the map target");
  return Domain(map.source(), std::make_shared<const Lifted>(Lifted{map, base}));
}

inline bool Domain::contains(const LatticePoint& h) const {
  if (!node_) throw DomainError("empty domain value");
  if (!spec_.contains(h)) throw LatticeError("point " + format_point(h) + " is not in the lattice");
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          auto e = spec_.real_embedding(h);
          mpq_class s = 0;
          for (std::size_t i = 0; i < e.size(); ++i) s += n.w[i] * e[i];
          return s >= n.c;
        } else if constexpr (std::is_same_v<T, Intersection>) {
          return std::all_of(n.parts.begin(), n.parts.end(), [&](const Domain& d) { return d.contains(h); });
        } else if constexpr (std::is_same_v<T, FutureConeUnion>) {
          // h in g - S  iff  g - h in S
          for (const auto& g : n.generators)
            if (n.sys.in_monoid(spec_.sub(g, h))) return true;
          return false;
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Translate>>) {
          return n->base.contains(spec_.sub(h, n->v));
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mutated>>) {
          if (std::find(n->removed.begin(), n->removed.end(), h) != n->removed.end()) return false;
          return n->base.contains(h);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Lifted>>) {
          return n->base.contains(n->map.apply(h));
        } else {
          return n.member(h);
        }
      },
      *node_);
}

inline std::vector<LatticePoint> Domain::removed_points() const {
  if (auto* m = std::get_if<std::shared_ptr<const Mutated>>(node_.get())) return (*m)->removed;
  return {};
}

namespace detail {

inline std::string format_rational_vector(const std::vector<mpq_class>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + "]";
}

}  // namespace detail

inline std::string Domain::describe() const {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return "halfspace(w=" + detail::format_rational_vector(n.w) + ",c=" + n.c.get_str() + ")";
        } else if constexpr (std::is_same_v<T, Intersection>) {
          std::string s = "intersection(";
          for (std::size_t i = 0; i < n.parts.size(); ++i) s += (i ? "," : "") + n.parts[i].describe();
          return s + ")";
        } else if constexpr (std::is_same_v<T, FutureConeUnion>) {
          std::string s = "cones(";
          for (std::size_t i = 0; i < n.generators.size(); ++i) s += (i ? "," : "") + format_point(n.generators[i]);
          return s + ")";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Translate>>) {
          return "translate(" + n->base.describe() + "," + format_point(n->v) + ")";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Mutated>>) {
          std::string s = "mutate(" + n->base.describe();
          for (const auto& p : n->removed) s += "," + format_point(p);
          return s + ")";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Lifted>>) {
          std::string s = "lift([";
          for (std::size_t i = 0; i < n->map.images().size(); ++i) s += (i ? "," : "") + format_point(n->map.images()[i]);
          return s + "]," + n->base.describe() + ")";
        } else {
          return "custom(" + n.name + ")";
        }
      },
      *node_);
}

// Appends h0 to the mutation history without checking minimality.
inline Domain mutate_unchecked(const Domain& H, const LatticePoint& h0) {
  if (auto* m = std::get_if<std::shared_ptr<const Domain::Mutated>>(H.node_.get())) {
    auto removed = (*m)->removed;
    removed.push_back(h0);
    return Domain(H.spec(), std::make_shared<const Domain::Mutated>(Domain::Mutated{(*m)->base, std::move(removed)}));
  }
  return Domain(H.spec(), std::make_shared<const Domain::Mutated>(Domain::Mutated{H, {h0}}));
}

inline bool initial_boundary_contains(const ShiftSystem& sys, const Domain& H, const LatticePoint& h) {
  return H.contains(h) && !H.contains(sys.spec().add(h, sys.minimum()));
}

// Boundary in the form "some h + v_i leaves H"; agrees with the v_N form on
// regular domains.
inline bool initial_boundary_contains_any(const ShiftSystem& sys, const Domain& H, const LatticePoint& h) {
  if (!H.contains(h)) return false;
  for (const auto& v : sys.shifts())
    if (!H.contains(sys.spec().add(h, v))) return true;
  return false;
}

struct PastCone {
  LatticePoint apex;
  // Members sorted by increasing w-pairing: every point comes after all of
  // its members h' + v_i. parent[i] is the index of the point it was reached
  // from (apex: itself).
  std::vector<LatticePoint> points;
  std::vector<std::size_t> parent;

  std::size_t size() const { return points.size(); }
  bool contains(const LatticePoint& p) const { return std::find(points.begin(), points.end(), p) != points.end(); }
};

struct PastConeOptions {
  std::size_t budget = 1000000;  // maximal number of members before giving up
};

// BFS from h along h' -> h' + v_i, keeping members of H. For a regular H every
// point between a member p of the past cone and h is itself a member (it lies
// in the future cone of p), so restricting the search to H loses nothing.
// Condition (1) of regularity makes the search finite.
inline PastCone past_cone(const ShiftSystem& sys, const Domain& H, const LatticePoint& h, PastConeOptions opt = {}) {
  if (!H.contains(h)) throw DomainError("point " + format_point(h) + " is not in the domain");
  const LatticeSpec& spec = sys.spec();
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index;
  std::vector<LatticePoint> pts{h};
  std::vector<std::size_t> parent{0};
  index.emplace(h, 0);
  for (std::size_t head = 0; head < pts.size(); ++head) {
    for (const auto& v : sys.shifts()) {
      LatticePoint q = spec.add(pts[head], v);
      if (index.count(q) || !H.contains(q)) continue;
      if (pts.size() >= opt.budget)
        throw DomainError("past cone of " + format_point(h) + " exceeds " + std::to_string(opt.budget) +
                          " points; the domain is not light-cone regular here");
      index.emplace(q, pts.size());
      pts.push_back(q);
      parent.push_back(head);
    }
  }
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<mpq_class> key;
  for (const auto& p : pts) key.push_back(sys.pairing(p));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return pts[a] < pts[b];
  });
  std::vector<std::size_t> where(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) where[order[i]] = i;
  PastCone pc{h, {}, {}};
  for (std::size_t i : order) {
    pc.points.push_back(pts[i]);
    pc.parent.push_back(where[parent[i]]);
  }
  return pc;
}

inline std::size_t d(const ShiftSystem& sys, const Domain& H, const LatticePoint& h) {
  return past_cone(sys, H, h).size();
}

// min(d(h), cap + 1) without enumerating beyond cap + 1 members.
inline std::size_t d_capped(const ShiftSystem& sys, const Domain& H, const LatticePoint& h, std::size_t cap) {
  try {
    return past_cone(sys, H, h, {cap + 1}).size();
  } catch (const DomainError&) {
    return cap + 1;
  }
}

// Minimal means nothing else in H lies below h. On a regular domain any
// member below h can be reached by single steps, so looking at h + v_i
// suffices.
inline std::optional<LatticePoint> member_below(const ShiftSystem& sys, const Domain& H, const LatticePoint& h) {
  if (!H.contains(h)) throw DomainError("point " + format_point(h) + " is not in the domain");
  for (const auto& v : sys.shifts()) {
    LatticePoint q = sys.spec().add(h, v);
    if (H.contains(q)) return q;
  }
  return std::nullopt;
}

inline bool minimal_in(const ShiftSystem& sys, const Domain& H, const LatticePoint& h) {
  return !member_below(sys, H, h).has_value();
}

inline Domain mutate(const ShiftSystem& sys, const Domain& H, const LatticePoint& h0) {
  if (auto below = member_below(sys, H, h0)) throw NotMinimal(h0, *below);
  return mutate_unchecked(H, h0);
}

// Windows: finite point sets standing in for "all h in H".
struct Box {
  std::vector<long> lo, hi;  // inclusive, one entry per free coordinate

  std::vector<LatticePoint> points(const LatticeSpec& spec) const {
    if (lo.size() != static_cast<std::size_t>(spec.rank()) || hi.size() != lo.size())
      throw DomainError("box dimension differs from lattice rank");
    std::vector<LatticePoint> out;
    std::vector<long> c(spec.dim(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == spec.dim()) {
        out.push_back(LatticePoint(c));
        return;
      }
      if (i < lo.size()) {
        for (long x = lo[i]; x <= hi[i]; ++x) {
          c[i] = x;
          rec(i + 1);
        }
      } else {
        for (long x = 0; x < spec.torsion()[i - lo.size()]; ++x) {
          c[i] = x;
          rec(i + 1);
        }
      }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
  }
};

// Members of H inside the box, optionally restricted to d_H(h) <= max_d.
inline std::vector<LatticePoint> window_points(const ShiftSystem& sys, const Domain& H, const Box& box,
                                               std::optional<std::size_t> max_d = std::nullopt) {
  std::vector<LatticePoint> out;
  for (const auto& p : box.points(sys.spec())) {
    if (!H.contains(p)) continue;
    if (max_d && d_capped(sys, H, p, *max_d) > *max_d) continue;
    out.push_back(p);
  }
  return out;
}

struct RegularityReport {
  enum class Kind { StructurallyRegular, SampledRegular, Violation, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::string proof;  // structural argument or sampling summary
  std::optional<std::pair<LatticePoint, LatticePoint>> witness;  // member h and h' >= h outside H
  std::size_t checked = 0;

  bool conclusive() const { return kind == Kind::StructurallyRegular || kind == Kind::Violation; }
  bool ok() const { return kind == Kind::StructurallyRegular || kind == Kind::SampledRegular; }
};

inline const char* to_string(RegularityReport::Kind k) {
  switch (k) {
    case RegularityReport::Kind::StructurallyRegular: return "structurally-regular";
    case RegularityReport::Kind::SampledRegular: return "regular-on-window";
    case RegularityReport::Kind::Violation: return "violation";
    case RegularityReport::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace detail {

inline mpq_class dot(const std::vector<mpq_class>& w, const std::vector<mpq_class>& x) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

// Structural regularity proof for H with respect to the given shifts, or
// nullopt. Half-spaces may be weak (w . v_i <= 0) inside an intersection as
// long as every shift is strictly decreasing for one of them.
inline std::optional<std::string> structural_proof(const Domain& H, const std::vector<LatticePoint>& shifts) {
  const LatticeSpec& spec = H.spec();
  using HS = Domain::HalfSpace;
  auto halfspace_rows = [&](const std::vector<const HS*>& hs) -> std::optional<std::string> {
    std::vector<bool> strict(shifts.size(), false);
    for (const HS* h : hs)
      for (std::size_t i = 0; i < shifts.size(); ++i) {
        mpq_class x = dot(h->w, spec.real_embedding(shifts[i]));
        if (x > 0) return std::nullopt;
        if (x < 0) strict[i] = true;
      }
    if (!std::all_of(strict.begin(), strict.end(), [](bool b) { return b; })) return std::nullopt;
    return std::string("every shift strictly decreases some half-space functional and none increases");
  };
  return std::visit(
      [&](const auto& n) -> std::optional<std::string> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, HS>) {
          return halfspace_rows({&n});
        } else if constexpr (std::is_same_v<T, Domain::Intersection>) {
          std::vector<const HS*> hs;
          for (const auto& p : n.parts)
            if (auto* h = std::get_if<HS>(&p.node())) hs.push_back(h);
          if (hs.size() == n.parts.size()) return halfspace_rows(hs);
          for (const auto& p : n.parts)
            if (!structural_proof(p, shifts)) return std::nullopt;
          return std::string("intersection of regular domains");
        } else if constexpr (std::is_same_v<T, Domain::FutureConeUnion>) {
          if (n.sys.shifts() != shifts) return std::nullopt;
          return std::string("finite union of future light cones");
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Domain::Translate>>) {
          if (!structural_proof(n->base, shifts)) return std::nullopt;
          return std::string("translate of a regular domain");
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Domain::Mutated>>) {
          if (!structural_proof(n->base, shifts)) return std::nullopt;
          return std::string("mutation of a regular domain at minimal points");
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Domain::Lifted>>) {
          std::vector<LatticePoint> images;
          for (const auto& v : shifts) images.push_back(n->map.apply(v));
          if (!structural_proof(n->base, images)) return std::nullopt;
          return std::string("lift of a regular domain along a reduction");
        } else {
          return std::nullopt;
        }
      },
      H.node());
}

}  // namespace detail

// Structural variants get a proof; anything else is sampled on the window:
// condition (2) via single steps h -> h - v_i that stay in the window, and
// condition (1) via bounded past-cone enumeration.
inline RegularityReport validate_regular(const ShiftSystem& sys, const Domain& H, const std::vector<LatticePoint>& window,
                                         std::size_t cone_budget = 100000) {
  RegularityReport r;
  if (auto proof = detail::structural_proof(H, sys.shifts())) {
    r.kind = RegularityReport::Kind::StructurallyRegular;
    r.proof = *proof;
    return r;
  }
  std::set<LatticePoint> in_window(window.begin(), window.end());
  const LatticeSpec& spec = sys.spec();
  for (const auto& h : window) {
    if (!H.contains(h)) continue;
    ++r.checked;
    for (const auto& v : sys.shifts()) {
      LatticePoint up = spec.sub(h, v);
      if (in_window.count(up) && !H.contains(up)) {
        r.kind = RegularityReport::Kind::Violation;
        r.witness = std::make_pair(h, up);
        r.proof = "member " + format_point(h) + " has " + format_point(up) + " above it outside the domain";
        return r;
      }
    }
    try {
      past_cone(sys, H, h, {cone_budget});
    } catch (const DomainError&) {
      r.kind = RegularityReport::Kind::Inconclusive;
      r.proof = "past cone of " + format_point(h) + " exceeded the budget";
      return r;
    }
  }
  r.kind = RegularityReport::Kind::SampledRegular;
  r.proof = "sampled on " + std::to_string(r.checked) + " window members (not conclusive)";
  return r;
}

// Smallest l >= 0 with every point in H + l v_N.
inline long translation_embedding(const ShiftSystem& sys, const std::vector<LatticePoint>& points, const Domain& H,
                                  long bound = 4096) {
  const LatticeSpec& spec = sys.spec();
  for (long l = 0; l <= bound; ++l) {
    LatticePoint shift = spec.scale(l, sys.minimum());
    bool all = std::all_of(points.begin(), points.end(), [&](const LatticePoint& p) { return H.contains(spec.sub(p, shift)); });
    if (all) return l;
  }
  throw DomainError("no translation H + l v_N with l <= " + std::to_string(bound) + " covers the points");
}

}  // namespace laurentlab
