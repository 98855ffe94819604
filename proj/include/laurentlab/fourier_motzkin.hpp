#pragma once

// Exact Fourier-Motzkin elimination for systems A*w <= b over Q.
//
// Every derived inequality remembers the nonnegative multipliers of the
// original rows that produced it, so an infeasible system comes with a
// Farkas certificate y >= 0 with y^T A = 0 and y^T b < 0.

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace laurentlab::fm {

struct Row {
  std::vector<mpq_class> a;     // coefficients of w
  mpq_class b;                  // a.w <= b
  std::vector<mpq_class> mult;  // combination of the original rows

  friend bool operator==(const Row& x, const Row& y) { return x.a == y.a && x.b == y.b; }
};

struct Feasible {
  std::vector<mpq_class> w;
};
struct Infeasible {
  std::vector<mpq_class> farkas;  // y >= 0, y^T A = 0, y^T b < 0
};
using Result = std::variant<Feasible, Infeasible>;

namespace detail {

// Scales a row so that its first nonzero coefficient has absolute value 1;
// multipliers are scaled along.
inline void normalize(Row& r) {
  for (const auto& c : r.a) {
    if (c == 0) continue;
    mpq_class s = abs(c);
    for (auto& x : r.a) x /= s;
    r.b /= s;
    for (auto& m : r.mult) m /= s;
    return;
  }
}

// Value inside [lo, hi] (either side optional), preferring 0, then integers.
inline mpq_class pick(const std::optional<mpq_class>& lo, const std::optional<mpq_class>& hi) {
  if (lo && hi && *lo > *hi) throw std::logic_error("empty interval during back substitution");
  if ((!lo || *lo <= 0) && (!hi || *hi >= 0)) return 0;
  if (lo && *lo > 0) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), lo->get_num_mpz_t(), lo->get_den_mpz_t());
    if (!hi || mpq_class(c) <= *hi) return mpq_class(c);
    return *lo;
  }
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), hi->get_num_mpz_t(), hi->get_den_mpz_t());
  if (!lo || mpq_class(f) >= *lo) return mpq_class(f);
  return *hi;
}

}  // namespace detail

inline Result solve(const std::vector<std::vector<mpq_class>>& A, const std::vector<mpq_class>& b, std::size_t nvars) {
  if (A.size() != b.size()) throw std::invalid_argument("row count mismatch");
  std::vector<Row> rows;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != nvars) throw std::invalid_argument("row length mismatch");
    Row r{A[i], b[i], std::vector<mpq_class>(A.size(), 0)};
    r.mult[i] = 1;
    rows.push_back(std::move(r));
  }

  // stages[k] holds the system over variables 0..k-1.
  std::vector<std::vector<Row>> stages(nvars + 1);
  stages[nvars] = rows;
  for (std::size_t k = nvars; k-- > 0;) {
    std::vector<Row> pos, neg, next;
    for (const auto& r : stages[k + 1]) {
      if (r.a[k] > 0)
        pos.push_back(r);
      else if (r.a[k] < 0)
        neg.push_back(r);
      else
        next.push_back(r);
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        mpq_class sp = -n.a[k], sn = p.a[k];
        Row c{std::vector<mpq_class>(nvars), p.b * sp + n.b * sn, std::vector<mpq_class>(rows.size())};
        for (std::size_t j = 0; j < nvars; ++j) c.a[j] = p.a[j] * sp + n.a[j] * sn;
        for (std::size_t j = 0; j < rows.size(); ++j) c.mult[j] = p.mult[j] * sp + n.mult[j] * sn;
        c.a[k] = 0;
        detail::normalize(c);
        if (std::find(next.begin(), next.end(), c) == next.end()) next.push_back(std::move(c));
      }
    stages[k] = std::move(next);
  }

  for (const auto& r : stages[0])
    if (r.b < 0) return Infeasible{r.mult};

  std::vector<mpq_class> w(nvars, 0);
  for (std::size_t k = 0; k < nvars; ++k) {
    std::optional<mpq_class> lo, hi;
    for (const auto& r : stages[k + 1]) {
      if (r.a[k] == 0) continue;
      mpq_class rest = r.b;
      for (std::size_t j = 0; j < k; ++j) rest -= r.a[j] * w[j];
      mpq_class bound = rest / r.a[k];
      if (r.a[k] > 0) {
        if (!hi || bound < *hi) hi = bound;
      } else {
        if (!lo || bound > *lo) lo = bound;
      }
    }
    w[k] = detail::pick(lo, hi);
  }
  return Feasible{w};
}

}  // namespace laurentlab::fm
