#pragma once

// Smith and Hermite normal forms, cokernels, kernels, lattice intersections
// and subgroups of cokernels over the integers.
//
// Orientation: a matrix M with `rows` generators and `cols` relations presents
// coker(M : Z^cols -> Z^rows). Internally the relations become eliminator rows.

#include "ceva/int_matrix.hpp"
#include "ceva/integer.hpp"
#include "ceva/modular.hpp"
#include "ceva/runtime.hpp"
#include "ceva/sparse_elimination.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ceva {

/// An internal cross-check disagreed with an exact result.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Smith invariant factors d1 | d2 | ... | dk, all positive. Factors equal to
/// one are kept; reports usually show only the nontrivial tail.
struct InvariantFactors {
  std::vector<Integer> factors;

  [[nodiscard]] std::size_t size() const { return factors.size(); }
  [[nodiscard]] std::vector<Integer> nontrivial() const {
    std::vector<Integer> out;
    for (const auto& d : factors) {
      if (!d.is_one()) out.push_back(d);
    }
    return out;
  }
  friend bool operator==(const InvariantFactors&, const InvariantFactors&) = default;
};

/// Z^rank + Z/t1 + ... + Z/tk with t1 | t2 | ... and every ti >= 2.
struct FPAbelianGroup {
  std::size_t rank = 0;
  std::vector<Integer> torsion;

  [[nodiscard]] std::size_t length() const { return rank + torsion.size(); }
  [[nodiscard]] bool is_free() const { return torsion.empty(); }
  [[nodiscard]] bool is_trivial() const { return rank == 0 && torsion.empty(); }

  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    if (is_trivial()) return "0";
    bool first = true;
    if (rank > 0) {
      os << "Z^" << rank;
      first = false;
    }
    for (const auto& t : torsion) {
      os << (first ? "" : " + ") << "Z/" << t;
      first = false;
    }
    return os.str();
  }
  friend bool operator==(const FPAbelianGroup&, const FPAbelianGroup&) = default;
};

struct SnfOptions {
  /// Switch from sparse to dense elimination once the remaining non-unit
  /// block is denser than this.
  double dense_threshold = 0.2;
  /// Cross-check against modular ranks.
  bool verify = true;
  std::uint64_t seed = 0x5eedc0ffeeULL;
};

namespace detail {

using IntRow = SparseEliminator<IntegerRing>::Row;

inline void load_columns(SparseEliminator<IntegerRing>& e, const IntMatrix& m, bool pivotable = true) {
  for (auto& col : m.columns()) {
    IntRow row;
    row.reserve(col.size());
    for (auto& [r, v] : col) row.emplace_back(static_cast<std::uint32_t>(r), std::move(v));
    e.add_row(std::move(row), pivotable);
  }
}

/// Turns an arbitrary multiset of nonzero diagonal entries into the
/// divisibility chain with the same cokernel.
inline std::vector<Integer> normalize_diagonal(std::vector<Integer> d) {
  std::erase_if(d, [](const Integer& x) { return x.is_zero(); });
  for (auto& x : d) x = abs(x);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (divides(d[i], d[j])) continue;
      Integer g = gcd(d[i], d[j]);
      Integer l = exact_div(d[i], g) * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
  return d;
}

/// Nonzero diagonal of a Smith reduction of a dense matrix (not normalized).
inline std::vector<Integer> dense_smith_diagonal(std::vector<std::vector<Integer>> a) {
  std::vector<Integer> diag;
  const std::size_t nr = a.size();
  const std::size_t nc = nr == 0 ? 0 : a[0].size();
  std::size_t t = 0;
  while (t < nr && t < nc) {
    check_deadline();
    // Smallest nonzero entry of the trailing block.
    std::size_t pi = nr, pj = nc;
    for (std::size_t i = t; i < nr; ++i) {
      for (std::size_t j = t; j < nc; ++j) {
        if (!a[i][j].is_zero() && (pi == nr || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
          if (a[i][j].is_unit()) break;
        }
      }
      if (pi != nr && a[pi][pj].is_unit()) break;
    }
    if (pi == nr) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    for (;;) {
      bool dirty = false;
      const Integer piv = a[t][t];
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (a[i][t].is_zero()) continue;
        Integer q = floor_divmod(a[i][t], piv).first;
        for (std::size_t j = t; j < nc; ++j) {
          if (!a[t][j].is_zero()) a[i][j].submul(q, a[t][j]);
        }
        dirty = dirty || !a[i][t].is_zero();
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (a[t][j].is_zero()) continue;
        Integer q = floor_divmod(a[t][j], piv).first;
        for (std::size_t i = t; i < nr; ++i) {
          if (!a[i][t].is_zero()) a[i][j].submul(q, a[i][t]);
        }
        dirty = dirty || !a[t][j].is_zero();
      }
      if (!dirty) break;
      // Move the smallest remainder in row/column t into the pivot slot.
      std::size_t bi = t, bj = t;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (!a[i][t].is_zero() && abs(a[i][t]) < abs(a[bi][bj])) {
          bi = i;
          bj = t;
        }
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (!a[t][j].is_zero() && abs(a[t][j]) < abs(a[bi][bj])) {
          bi = t;
          bj = j;
        }
      }
      std::swap(a[t], a[bi]);
      for (auto& row : a) std::swap(row[t], row[bj]);
    }
    diag.push_back(a[t][t]);
    ++t;
  }
  return diag;
}

/// Runs unit elimination plus the non-unit phase on a loaded eliminator and
/// returns all nonzero diagonal entries (units included).
inline std::vector<Integer> finish_smith(SparseEliminator<IntegerRing>& e, const SnfOptions& opt) {
  std::vector<Integer> diag;
  std::size_t ones = 0;
  for (;;) {
    ones += e.eliminate_units();
    bool any = false;
    for (std::size_t r = 0; r < e.nrows() && !any; ++r) any = e.alive(r) && e.pivotable(r) && !e.row(r).empty();
    if (!any) break;
    if (e.active_density() > opt.dense_threshold) {
      auto cols = e.active_columns();
      std::vector<std::size_t> pos(e.ncols(), 0);
      for (std::size_t i = 0; i < cols.size(); ++i) pos[cols[i]] = i;
      std::vector<std::vector<Integer>> dense;
      for (std::size_t r = 0; r < e.nrows(); ++r) {
        if (!e.alive(r) || !e.pivotable(r) || e.row(r).empty()) continue;
        std::vector<Integer> row(cols.size());
        for (const auto& [c, v] : e.row(r)) row[pos[c]] = v;
        dense.push_back(std::move(row));
      }
      for (auto& d : dense_smith_diagonal(std::move(dense))) diag.push_back(std::move(d));
      break;
    }
    auto piv = e.find_min_pivot();
    auto [p, c] = *piv;
    for (;;) {
      check_deadline();
      Integer g = e.gcd_clear_column(p, c);
      auto next = e.reduce_pivot_row(p, c);
      if (!next) {
        diag.push_back(g);
        e.retire_pivot(p, c);
        break;
      }
      c = *next;
    }
  }
  diag.insert(diag.begin(), ones, Integer(1));
  return diag;
}

}  // namespace detail

/// Rank of M over F_p.
inline std::size_t modular_rank(const IntMatrix& m, std::uint64_t p) {
  if (!is_prime_u64(p)) throw std::invalid_argument("modular_rank: " + std::to_string(p) + " is not prime");
  PrimeField field{p};
  SparseEliminator<PrimeField> e(field, m.rows());
  for (const auto& col : m.columns()) {
    SparseEliminator<PrimeField>::Row row;
    for (const auto& [r, v] : col) {
      auto x = field.from(v);
      if (x != 0) row.emplace_back(static_cast<std::uint32_t>(r), x);
    }
    e.add_row(std::move(row));
  }
  return e.eliminate_units();
}

namespace detail {

/// Rank checks that certify a Smith result: two large random primes must see
/// the full rank, and every small prime dividing a factor must see exactly the
/// factors it does not divide.
inline void verify_smith(const IntMatrix& m, const std::vector<Integer>& factors, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (m.rows() * 0x9E3779B97F4A7C15ULL) ^ m.cols() ^ m.nonzeros());
  for (int i = 0; i < 2; ++i) {
    std::uint64_t p = random_prime(rng);
    bool divides_some = std::any_of(factors.begin(), factors.end(), [&](const Integer& d) { return d.mod_u64(p) == 0; });
    if (divides_some) continue;
    auto r = modular_rank(m, p);
    if (r != factors.size()) {
      throw VerificationError("snf: rank mod " + std::to_string(p) + " is " + std::to_string(r) + ", expected " +
                              std::to_string(factors.size()));
    }
  }
  if (factors.empty() || factors.back().is_one()) return;
  // Small primes of the largest factor (trial division; huge cofactors are skipped).
  std::vector<std::uint64_t> primes;
  Integer rest = factors.back();
  for (std::uint64_t q = 2; q < 100000 && !rest.is_one(); ++q) {
    if (divides(Integer(static_cast<std::int64_t>(q)), rest)) {
      primes.push_back(q);
      while (divides(Integer(static_cast<std::int64_t>(q)), rest)) rest = exact_div(rest, Integer(static_cast<std::int64_t>(q)));
    }
  }
  if (rest.is_small() && !rest.is_one() && is_prime_u64(static_cast<std::uint64_t>(rest.small_value()))) {
    primes.push_back(static_cast<std::uint64_t>(rest.small_value()));
  }
  for (auto q : primes) {
    std::size_t expect = std::count_if(factors.begin(), factors.end(), [&](const Integer& d) { return d.mod_u64(q) != 0; });
    auto r = modular_rank(m, q);
    if (r != expect) {
      throw VerificationError("snf: rank mod " + std::to_string(q) + " is " + std::to_string(r) + ", expected " +
                              std::to_string(expect));
    }
  }
}

}  // namespace detail

/// Smith invariant factors of M.
inline InvariantFactors snf(const IntMatrix& m, const SnfOptions& opt = {}) {
  SparseEliminator<IntegerRing> e(IntegerRing{}, m.rows());
  detail::load_columns(e, m);
  auto diag = detail::finish_smith(e, opt);
  // Units first, then the normalized non-unit tail.
  std::vector<Integer> ones, rest;
  for (auto& d : diag) (d.is_unit() ? ones : rest).push_back(abs(d));
  auto tail = detail::normalize_diagonal(std::move(rest));
  InvariantFactors out;
  out.factors = std::move(ones);
  for (auto& d : tail) out.factors.push_back(std::move(d));
  if (opt.verify) detail::verify_smith(m, out.factors, opt.seed);
  return out;
}

inline FPAbelianGroup cokernel_group(const IntMatrix& m, const SnfOptions& opt = {}) {
  auto f = snf(m, opt);
  FPAbelianGroup g;
  g.rank = m.rows() - f.size();
  g.torsion = f.nontrivial();
  return g;
}

/// Quotient q minimizing |a - q*b|.
inline Integer nearest_quotient(const Integer& a, const Integer& b) {
  auto [q, r] = floor_divmod(a, b);
  if (abs(r + r) > abs(b)) q += Integer(1);
  return q;
}

/// Dense column-style Hermite reduction. On return `cols` holds the basis
/// columns followed by zero columns; `transform` (if given) receives the
/// matching unimodular column operations. Returns the number of basis columns.
///
/// Convention: lower triangular, positive pivots, and in each pivot row the
/// entries of earlier columns are reduced into [0, pivot).
inline std::size_t hermite_columns(std::vector<std::vector<Integer>>& cols, std::size_t nrows,
                                   std::vector<std::vector<Integer>>* transform = nullptr) {
  const std::size_t k = cols.size();
  if (transform != nullptr) {
    transform->assign(k, std::vector<Integer>(k));
    for (std::size_t j = 0; j < k; ++j) (*transform)[j][j] = Integer(1);
  }
  auto col_submul = [&](std::size_t a, const Integer& q, std::size_t b) {
    for (std::size_t i = 0; i < nrows; ++i) {
      if (!cols[b][i].is_zero()) cols[a][i].submul(q, cols[b][i]);
    }
    if (transform != nullptr) {
      for (std::size_t i = 0; i < k; ++i) {
        if (!(*transform)[b][i].is_zero()) (*transform)[a][i].submul(q, (*transform)[b][i]);
      }
    }
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    std::swap(cols[a], cols[b]);
    if (transform != nullptr) std::swap((*transform)[a], (*transform)[b]);
  };

  std::size_t t = 0;
  for (std::size_t i = 0; i < nrows && t < k; ++i) {
    check_deadline();
    // Euclid on row i: keep the smallest entry as pivot and reduce the others
    // by it until only the pivot is left. This keeps intermediate entries small.
    for (;;) {
      std::size_t best = k;
      for (std::size_t j = t; j < k; ++j) {
        if (!cols[j][i].is_zero() && (best == k || abs(cols[j][i]) < abs(cols[best][i]))) best = j;
      }
      if (best == k) break;
      swap_cols(t, best);
      bool done = true;
      const Integer piv = cols[t][i];
      for (std::size_t j = t + 1; j < k; ++j) {
        if (cols[j][i].is_zero()) continue;
        col_submul(j, nearest_quotient(cols[j][i], piv), t);
        done = done && cols[j][i].is_zero();
      }
      if (done) break;
    }
    if (cols[t][i].is_zero()) continue;
    if (cols[t][i].sign() < 0) {
      for (auto& x : cols[t]) x = -x;
      if (transform != nullptr) {
        for (auto& x : (*transform)[t]) x = -x;
      }
    }
    const Integer piv = cols[t][i];
    for (std::size_t l = 0; l < t; ++l) {
      if (cols[l][i].is_zero()) continue;
      auto q = floor_divmod(cols[l][i], piv).first;
      if (!q.is_zero()) col_submul(l, q, t);
    }
    ++t;
  }
  return t;
}

/// Exact determinant of a square matrix (fraction-free Bareiss elimination).
inline Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return Integer(1);
  auto a = m.to_dense();
  Integer prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    check_deadline();
    if (a[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && a[r][k].is_zero()) ++r;
      if (r == n) return Integer(0);
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a[i][j] * a[k][k];
        v.submul(a[i][k], a[k][j]);
        a[i][j] = exact_div(v, prev);
      }
      a[i][k] = Integer(0);
    }
    prev = a[k][k];
  }
  return sign < 0 ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

/// Column-style Hermite normal form; the result keeps only basis columns.
inline IntMatrix hnf(const IntMatrix& m) {
  auto d = m.transpose().to_dense();  // one vector per column of m
  if (m.cols() == 0) return IntMatrix(m.rows(), 0);
  std::size_t t = hermite_columns(d, m.rows());
  d.resize(t);
  if (t == 0) return IntMatrix(m.rows(), 0);
  return IntMatrix::from_columns(m.rows(), d);
}

/// Basis (as columns) of the integer kernel {x : M x = 0}.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  auto d = m.transpose().to_dense();
  if (m.cols() == 0) return IntMatrix(0, 0);
  std::vector<std::vector<Integer>> v;
  std::size_t t = hermite_columns(d, m.rows(), &v);
  std::vector<std::vector<Integer>> ker(v.begin() + static_cast<std::ptrdiff_t>(t), v.end());
  IntMatrix k = IntMatrix::from_columns(m.cols(), ker);
  return hnf(k);
}

/// Generators (columns) of the intersection of the column lattices of A and B.
inline IntMatrix lattice_intersect(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("lattice_intersect: ambient dimensions differ");
  IntMatrix neg_b(b.rows(), b.cols());
  for (const auto& [idx, v] : b.entries()) neg_b.set(idx.first, idx.second, -v);
  IntMatrix k = kernel_basis(a.hcat(neg_b));
  // Keep the A-coordinates of each kernel vector and map them through A.
  IntMatrix x(a.cols(), k.cols());
  for (const auto& [idx, v] : k.entries()) {
    if (idx.first < a.cols()) x.set(idx.first, idx.second, v);
  }
  return hnf(a * x);
}

/// Subgroup of coker(R) generated by the images of U's columns, i.e.
/// (im U + im R) / im R. R and U share the ambient row space.
inline FPAbelianGroup subgroup_of_cokernel(const IntMatrix& r, const IntMatrix& u, const SnfOptions& opt = {}) {
  if (r.rows() != u.rows()) throw std::invalid_argument("subgroup_of_cokernel: ambient dimensions differ");
  SparseEliminator<IntegerRing> e(IntegerRing{}, r.rows());
  detail::load_columns(e, r, true);
  detail::load_columns(e, u, false);
  e.eliminate_units();

  auto active = e.active_columns();
  std::vector<std::size_t> pos(e.ncols(), 0);
  for (std::size_t i = 0; i < active.size(); ++i) pos[active[i]] = i;
  const std::size_t n = active.size();
  std::vector<std::vector<Integer>> rel, elems;
  for (std::size_t i = 0; i < e.nrows(); ++i) {
    if (!e.alive(i) || e.row(i).empty()) continue;
    std::vector<Integer> v(n);
    for (const auto& [c, x] : e.row(i)) v[pos[c]] = x;
    (e.pivotable(i) ? rel : elems).push_back(std::move(v));
  }
  if (elems.empty()) return {};
  if (rel.empty()) {
    // Remaining quotient is free on the active generators: the subgroup is
    // the lattice spanned by the reduced elements.
    FPAbelianGroup g;
    g.rank = snf(IntMatrix::from_columns(n, elems), opt).size();
    return g;
  }
  // Hermite basis H of the lattice spanned by relations and elements, then
  // the relations' coordinates X in that basis: the subgroup is coker(X).
  std::vector<std::vector<Integer>> lat = rel;
  lat.insert(lat.end(), elems.begin(), elems.end());
  std::size_t w = hermite_columns(lat, n);
  lat.resize(w);
  std::vector<std::size_t> pivot_row(w);
  for (std::size_t j = 0; j < w; ++j) {
    std::size_t i = 0;
    while (lat[j][i].is_zero()) ++i;
    pivot_row[j] = i;
  }
  IntMatrix x(w, rel.size());
  for (std::size_t c = 0; c < rel.size(); ++c) {
    std::vector<Integer> res = rel[c];
    for (std::size_t j = 0; j < w; ++j) {
      const Integer& h = lat[j][pivot_row[j]];
      const Integer& v = res[pivot_row[j]];
      if (v.is_zero()) continue;
      if (!divides(h, v)) throw VerificationError("subgroup_of_cokernel: relation outside Hermite lattice");
      Integer q = exact_div(v, h);
      for (std::size_t i = 0; i < n; ++i) {
        if (!lat[j][i].is_zero()) res[i].submul(q, lat[j][i]);
      }
      x.set(j, c, q);
    }
    if (std::any_of(res.begin(), res.end(), [](const Integer& z) { return !z.is_zero(); })) {
      throw VerificationError("subgroup_of_cokernel: nonzero residual");
    }
  }
  return cokernel_group(x, opt);
}

}  // namespace ceva
