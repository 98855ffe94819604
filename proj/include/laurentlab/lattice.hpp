#pragma once

// Finitely generated abelian lattices Z^r + Z/a_1 + ... + Z/a_m, shift
// systems, the monoid they span and the induced partial order.
//
// Points are coordinate vectors with the free part first and the torsion
// residues last, each residue normalized into [0, a_i).

#include <gmpxx.h>

#include <compare>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "laurentlab/fourier_motzkin.hpp"
#include "laurentlab/matrix.hpp"

namespace laurentlab {

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LatticePoint {
  std::vector<long> c;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<long> coords) : c(std::move(coords)) {}
  LatticePoint(std::initializer_list<long> coords) : c(coords) {}

  std::size_t size() const { return c.size(); }
  long operator[](std::size_t i) const { return c[i]; }
  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](long x) { return x == 0; });
  }

  auto operator<=>(const LatticePoint&) const = default;
  bool operator==(const LatticePoint&) const = default;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (long x : p.c) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h;
  }
};

using PointSet = std::unordered_set<LatticePoint, LatticePointHash>;

inline std::string format_point(const LatticePoint& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.c.size(); ++i) os << (i ? "," : "") << p.c[i];
  os << ')';
  return os.str();
}

class LatticeSpec {
 public:
  LatticeSpec() = default;
  LatticeSpec(int rank, std::vector<long> torsion) : rank_(rank), torsion_(std::move(torsion)) {
    if (rank_ < 0) throw LatticeError("negative rank");
    for (long a : torsion_)
      if (a < 2) throw LatticeError("torsion moduli must be at least 2");
  }

  int rank() const { return rank_; }
  const std::vector<long>& torsion() const { return torsion_; }
  std::size_t dim() const { return static_cast<std::size_t>(rank_) + torsion_.size(); }
  bool is_free() const { return torsion_.empty(); }

  // Least common multiple of the torsion moduli (1 for free lattices).
  long torsion_exponent() const {
    long l = 1;
    for (long a : torsion_) l = std::lcm(l, a);
    return l;
  }

  LatticePoint point(std::vector<long> coords) const {
    if (coords.size() != dim())
      throw LatticeError("point has " + std::to_string(coords.size()) + " coordinates, lattice needs " +
                         std::to_string(dim()));
    normalize(coords);
    return LatticePoint(std::move(coords));
  }
  LatticePoint zero() const { return LatticePoint(std::vector<long>(dim(), 0)); }

  // Unit vector of the i-th generator (free generators first).
  LatticePoint generator(std::size_t i) const {
    std::vector<long> c(dim(), 0);
    c.at(i) = 1;
    return point(std::move(c));
  }

  bool contains(const LatticePoint& p) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
      long x = p.c[static_cast<std::size_t>(rank_) + i];
      if (x < 0 || x >= torsion_[i]) return false;
    }
    return true;
  }

  LatticePoint add(const LatticePoint& p, const LatticePoint& q) const {
    check(p);
    check(q);
    std::vector<long> r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = p.c[i] + q.c[i];
    normalize(r);
    return LatticePoint(std::move(r));
  }
  LatticePoint sub(const LatticePoint& p, const LatticePoint& q) const {
    check(p);
    check(q);
    std::vector<long> r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = p.c[i] - q.c[i];
    normalize(r);
    return LatticePoint(std::move(r));
  }
  LatticePoint neg(const LatticePoint& p) const { return scale(-1, p); }
  LatticePoint scale(long k, const LatticePoint& p) const {
    check(p);
    std::vector<long> r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = k * p.c[i];
    normalize(r);
    return LatticePoint(std::move(r));
  }

  // Free part over Q; torsion is killed.
  std::vector<mpq_class> real_embedding(const LatticePoint& p) const {
    check(p);
    std::vector<mpq_class> r;
    for (int i = 0; i < rank_; ++i) r.emplace_back(p.c[static_cast<std::size_t>(i)]);
    return r;
  }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  void normalize(std::vector<long>& c) const {
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
      long& x = c[static_cast<std::size_t>(rank_) + i];
      x %= torsion_[i];
      if (x < 0) x += torsion_[i];
    }
  }
  void check(const LatticePoint& p) const {
    if (!contains(p)) throw LatticeError("point " + format_point(p) + " does not belong to this lattice");
  }

  int rank_ = 0;
  std::vector<long> torsion_;
};

// Coordinates of a free lattice given as the span of basis vectors inside
// Z^k (e.g. the parity lattice {(t, n) : t + sum n even}). Points are stored
// in basis coordinates; the frame converts to and from ambient coordinates.
class LatticeFrame {
 public:
  LatticeFrame() = default;
  // Columns of `basis` are the ambient images of the lattice generators.
  explicit LatticeFrame(std::vector<std::vector<long>> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw LatticeError("empty basis");
    std::size_t k = basis_.front().size();
    std::vector<std::vector<mpz_class>> cols;
    for (const auto& b : basis_) {
      if (b.size() != k) throw LatticeError("basis vectors differ in length");
      cols.emplace_back(b.begin(), b.end());
    }
    matrix_ = IntMatrix::from_columns(cols, k);
    if (rank(matrix_) != basis_.size()) throw LatticeError("basis vectors are linearly dependent");
  }

  bool is_identity() const { return basis_.empty(); }
  const std::vector<std::vector<long>>& basis() const { return basis_; }
  std::size_t ambient_dim(const LatticeSpec& spec) const { return is_identity() ? spec.dim() : matrix_.rows(); }

  std::vector<long> to_ambient(const LatticePoint& p) const {
    if (is_identity()) return p.c;
    std::vector<long> x(matrix_.rows(), 0);
    for (std::size_t j = 0; j < basis_.size(); ++j)
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += basis_[j][i] * p.c[j];
    return x;
  }

  // Throws when x is not in the span.
  LatticePoint from_ambient(const LatticeSpec& spec, const std::vector<long>& x) const {
    if (is_identity()) return spec.point(x);
    if (x.size() != matrix_.rows()) throw LatticeError("point has wrong number of coordinates");
    std::vector<mpz_class> rhs(x.begin(), x.end());
    auto sol = solve_integer(matrix_, rhs);
    if (!sol) throw LatticeError("point " + format_point(LatticePoint(x)) + " is not in the lattice");
    std::vector<long> c;
    for (const auto& v : *sol) c.push_back(v.get_si());
    return spec.point(std::move(c));
  }

  std::string format(const LatticePoint& p) const { return format_point(LatticePoint(to_ambient(p))); }

 private:
  std::vector<std::vector<long>> basis_;
  IntMatrix matrix_;
};

// Z-module map Z^N -> L given by the shifts, presented together with the
// torsion relations of L: columns are the shifts followed by a_i * e_{r+i}.
inline IntMatrix presentation_matrix(const LatticeSpec& spec, const std::vector<LatticePoint>& gens) {
  std::vector<std::vector<mpz_class>> cols;
  for (const auto& g : gens) {
    if (!spec.contains(g)) throw LatticeError("generator outside the lattice");
    std::vector<mpz_class> col;
    for (long x : g.c) col.emplace_back(x);
    cols.push_back(std::move(col));
  }
  for (std::size_t i = 0; i < spec.torsion().size(); ++i) {
    std::vector<mpz_class> col(spec.dim(), 0);
    col[static_cast<std::size_t>(spec.rank()) + i] = spec.torsion()[i];
    cols.push_back(std::move(col));
  }
  return IntMatrix::from_columns(cols, spec.dim());
}

// The shifts generate L as a group.
inline bool check_generates(const LatticeSpec& spec, const std::vector<LatticePoint>& shifts) {
  return columns_span_lattice(presentation_matrix(spec, shifts));
}

// Integer coefficients a with sum a_i * shifts_i = p in L, if any.
inline std::optional<std::vector<long>> integer_expansion(const LatticeSpec& spec, const std::vector<LatticePoint>& shifts,
                                                          const LatticePoint& p) {
  std::vector<mpz_class> rhs;
  for (long x : p.c) rhs.emplace_back(x);
  auto sol = solve_integer(presentation_matrix(spec, shifts), rhs);
  if (!sol) return std::nullopt;
  std::vector<long> a;
  for (std::size_t i = 0; i < shifts.size(); ++i) a.push_back((*sol)[i].get_si());
  return a;
}

struct Independent {
  std::vector<mpq_class> w;  // w . free(v_i) <= -1 for every shift
};
struct Dependent {
  std::vector<long> witness;  // nonzero, nonnegative, sum witness_i v_i = 0
};
using IndependenceVerdict = std::variant<Independent, Dependent>;

// Gordan alternative on the free parts, with the dependency lifted through
// the torsion by multiplying with the torsion exponent.
inline IndependenceVerdict check_znn_independence(const LatticeSpec& spec, const std::vector<LatticePoint>& shifts) {
  if (shifts.empty()) throw LatticeError("empty shift list");
  std::vector<std::vector<mpq_class>> A;
  std::vector<mpq_class> b;
  for (const auto& v : shifts) {
    A.push_back(spec.real_embedding(v));
    b.emplace_back(-1);
  }
  fm::Result r = fm::solve(A, b, static_cast<std::size_t>(spec.rank()));
  if (auto* f = std::get_if<fm::Feasible>(&r)) return Independent{f->w};

  const auto& y = std::get<fm::Infeasible>(r).farkas;
  mpz_class den = 1;
  for (const auto& q : y) den = lcm(den, mpz_class(q.get_den()));
  std::vector<long> a;
  for (const auto& q : y) a.push_back(mpz_class(q * den).get_si());
  long g = 0;
  for (long x : a) g = std::gcd(g, x);
  for (long& x : a) x /= g;
  long t = spec.torsion_exponent();
  for (long& x : a) x *= t;
  return Dependent{a};
}

// Nonnegative coefficients with sum a_i v_i = difference.
struct OrderCertificate {
  std::vector<long> a;
};

inline LatticePoint combine(const LatticeSpec& spec, const std::vector<LatticePoint>& shifts, const std::vector<long>& a) {
  LatticePoint s = spec.zero();
  for (std::size_t i = 0; i < shifts.size(); ++i) s = spec.add(s, spec.scale(a[i], shifts[i]));
  return s;
}

// Z-linear map between lattices, given by the images of the standard
// generators of the source (free generators first, then torsion).
class LatticeMap {
 public:
  LatticeMap() = default;
  LatticeMap(LatticeSpec source, LatticeSpec target, std::vector<LatticePoint> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.dim()) throw LatticeError("map needs one image per source generator");
    for (const auto& im : images_)
      if (!target_.contains(im)) throw LatticeError("image " + format_point(im) + " is not a target point");
  }

  // rows[i][j]: coordinate i of the image of free generator j; torsion
  // generators map to the given target points.
  static LatticeMap from_matrix(LatticeSpec source, LatticeSpec target, const std::vector<std::vector<long>>& rows,
                                const std::vector<std::vector<long>>& torsion_images = {}) {
    if (rows.size() != target.dim()) throw LatticeError("matrix row count differs from target dimension");
    if (torsion_images.size() != source.torsion().size())
      throw LatticeError("need one image per torsion generator of the source");
    std::vector<LatticePoint> ims;
    for (int j = 0; j < source.rank(); ++j) {
      std::vector<long> c;
      for (const auto& r : rows) {
        if (r.size() != static_cast<std::size_t>(source.rank())) throw LatticeError("matrix column count differs from source rank");
        c.push_back(r[static_cast<std::size_t>(j)]);
      }
      ims.push_back(target.point(c));
    }
    for (const auto& t : torsion_images) ims.push_back(target.point(t));
    return LatticeMap(std::move(source), std::move(target), std::move(ims));
  }

  static LatticeMap identity(const LatticeSpec& spec) {
    std::vector<LatticePoint> ims;
    for (std::size_t i = 0; i < spec.dim(); ++i) ims.push_back(spec.generator(i));
    return LatticeMap(spec, spec, std::move(ims));
  }

  const LatticeSpec& source() const { return source_; }
  const LatticeSpec& target() const { return target_; }
  const std::vector<LatticePoint>& images() const { return images_; }

  LatticePoint apply(const LatticePoint& h) const {
    if (!source_.contains(h)) throw LatticeError("point " + format_point(h) + " is not in the source lattice");
    LatticePoint r = target_.zero();
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (h.c[i] != 0) r = target_.add(r, target_.scale(h.c[i], images_[i]));
    return r;
  }

  // A torsion generator of order a must land on an a-torsion point.
  bool well_defined() const {
    for (std::size_t j = 0; j < source_.torsion().size(); ++j) {
      const auto& im = images_[static_cast<std::size_t>(source_.rank()) + j];
      if (!target_.scale(source_.torsion()[j], im).is_zero()) return false;
    }
    return true;
  }

  bool surjective() const { return check_generates(target_, images_); }

  friend bool operator==(const LatticeMap& a, const LatticeMap& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.images_ == b.images_;
  }

 private:
  LatticeSpec source_, target_;
  std::vector<LatticePoint> images_;
};

// Shifts v_1..v_N with a designated minimum and a separating functional w
// (w . v_i <= -1). Construction fails on Z>=0-dependent shifts.
class ShiftSystem {
 public:
  ShiftSystem() = default;
  ShiftSystem(LatticeSpec spec, std::vector<LatticePoint> shifts, std::size_t min_index)
      : spec_(std::move(spec)), shifts_(std::move(shifts)), min_index_(min_index) {
    validate_shape();
    auto verdict = check_znn_independence(spec_, shifts_);
    if (auto* d = std::get_if<Dependent>(&verdict)) {
      std::string s;
      for (long x : d->witness) s += (s.empty() ? "" : ",") + std::to_string(x);
      throw LatticeError("shifts are dependent over Z>=0, witness (" + s + ")");
    }
    w_ = std::get<Independent>(verdict).w;
    init();
  }

  // Same shifts, caller-supplied functional (must separate).
  ShiftSystem with_functional(std::vector<mpq_class> w) const {
    ShiftSystem s = *this;
    if (w.size() != static_cast<std::size_t>(spec_.rank())) throw LatticeError("functional has wrong length");
    s.w_ = std::move(w);
    for (const auto& v : s.shifts_)
      if (s.pairing(v) > -1) throw LatticeError("functional does not separate the shifts");
    s.init();
    return s;
  }

  const LatticeSpec& spec() const { return spec_; }
  const std::vector<LatticePoint>& shifts() const { return shifts_; }
  std::size_t size() const { return shifts_.size(); }
  std::size_t min_index() const { return min_index_; }
  const LatticePoint& minimum() const { return shifts_[min_index_]; }
  const std::vector<mpq_class>& functional() const { return w_; }

  mpq_class pairing(const LatticePoint& p) const {
    auto e = spec_.real_embedding(p);
    mpq_class s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) s += w_[i] * e[i];
    return s;
  }

  // Membership of d in S = span_{Z>=0}(v_i). Any representation has
  // sum a_i <= -w.d, which bounds the depth-first search.
  std::optional<OrderCertificate> in_monoid(const LatticePoint& d) const {
    {
      std::lock_guard lock(cache_->mu);
      auto it = cache_->results.find(d);
      if (it != cache_->results.end()) return it->second;
    }
    auto result = search(d);
    std::lock_guard lock(cache_->mu);
    cache_->results.emplace(d, result);
    return result;
  }

  // h1 <= h2  iff  h1 - h2 in S.
  bool leq(const LatticePoint& h1, const LatticePoint& h2) const { return in_monoid(spec_.sub(h1, h2)).has_value(); }

  bool check_certificate(const LatticePoint& d, const OrderCertificate& cert) const {
    if (cert.a.size() != shifts_.size()) return false;
    for (long x : cert.a)
      if (x < 0) return false;
    return combine(spec_, shifts_, cert.a) == d;
  }

  // v_N <= v_i for every i, and v_N <= 0.
  bool check_minimum_shift() const {
    for (const auto& v : shifts_)
      if (!leq(minimum(), v)) return false;
    return leq(minimum(), spec_.zero());
  }

 private:
  struct Cache {
    std::mutex mu;
    std::unordered_map<LatticePoint, std::optional<OrderCertificate>, LatticePointHash> results;
  };

  void validate_shape() {
    if (shifts_.empty()) throw LatticeError("empty shift list");
    if (min_index_ >= shifts_.size()) throw LatticeError("minimum index out of range");
    for (const auto& v : shifts_)
      if (!spec_.contains(v)) throw LatticeError("shift " + format_point(v) + " is not a lattice point");
    for (std::size_t i = 0; i < shifts_.size(); ++i)
      for (std::size_t j = i + 1; j < shifts_.size(); ++j)
        if (shifts_[i] == shifts_[j]) throw LatticeError("duplicate shift " + format_point(shifts_[i]));
  }

  void init() {
    cache_ = std::make_shared<Cache>();
    // Integer weights: costs c_i = -w.v_i >= 1 scaled to a common denominator.
    mpz_class den = 1;
    for (const auto& q : w_) den = lcm(den, mpz_class(q.get_den()));
    den_ = den.get_si();
    cost_.clear();
    for (const auto& v : shifts_) cost_.push_back(mpz_class(-pairing(v) * den).get_si());
  }

  long budget(const LatticePoint& d) const {
    mpq_class b = -pairing(d) * den_;
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    return f.get_si();
  }

  std::optional<OrderCertificate> search(const LatticePoint& d) const {
    std::vector<long> a(shifts_.size(), 0);
    if (d.is_zero()) return OrderCertificate{a};
    if (budget(d) < 0) return std::nullopt;
    std::unordered_set<std::pair<LatticePoint, std::size_t>, PairHash> dead;
    if (dfs(d, 0, a, dead)) return OrderCertificate{a};
    return std::nullopt;
  }

  struct PairHash {
    std::size_t operator()(const std::pair<LatticePoint, std::size_t>& p) const {
      return LatticePointHash{}(p.first) * 31 + p.second;
    }
  };

  // Residual r must be written with shifts of index >= start.
  bool dfs(const LatticePoint& r, std::size_t start, std::vector<long>& a,
           std::unordered_set<std::pair<LatticePoint, std::size_t>, PairHash>& dead) const {
    if (r.is_zero()) return true;
    long b = budget(r);
    if (b <= 0) return false;
    if (dead.count({r, start})) return false;
    for (std::size_t i = start; i < shifts_.size(); ++i) {
      if (cost_[i] > b) continue;
      LatticePoint next = spec_.sub(r, shifts_[i]);
      ++a[i];
      if (dfs(next, i, a, dead)) return true;
      --a[i];
    }
    dead.insert({r, start});
    return false;
  }

  LatticeSpec spec_;
  std::vector<LatticePoint> shifts_;
  std::size_t min_index_ = 0;
  std::vector<mpq_class> w_;
  long den_ = 1;
  std::vector<long> cost_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace laurentlab
