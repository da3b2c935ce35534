#pragma once

// Structured sparse Gaussian elimination over a ring with an explicit notion of
// units. The same engine serves integer Smith reduction (units are +-1) and
// rank computation over prime fields (every nonzero element is a unit).
//
// Rows are relation vectors; columns are generators. A unit pivot at (p, c)
// expresses generator c through the others, so it is substituted into every
// other row (including non-pivotable "element" rows) and both row p and column
// c leave the active matrix. Pivots are chosen by the Markowitz cost
// (len(row) - 1) * (count(col) - 1), ties broken by row then column index.

#include "ceva/integer.hpp"
#include "ceva/modular.hpp"
#include "ceva/runtime.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ceva {

struct IntegerRing {
  using Scalar = Integer;
  static bool is_zero(const Scalar& a) { return a.is_zero(); }
  static bool is_unit(const Scalar& a) { return a.is_unit(); }
  static Scalar unit_inverse(const Scalar& a) { return a; }
  static Scalar mul(const Scalar& a, const Scalar& b) { return a * b; }
  static Scalar add(const Scalar& a, const Scalar& b) { return a + b; }
  static void submul(Scalar& a, const Scalar& f, const Scalar& b) { a.submul(f, b); }
  static Scalar neg(const Scalar& a) { return -a; }
};

struct PrimeField {
  using Scalar = std::uint64_t;
  std::uint64_t p;
  [[nodiscard]] bool is_zero(Scalar a) const { return a == 0; }
  [[nodiscard]] bool is_unit(Scalar a) const { return a != 0; }
  [[nodiscard]] Scalar unit_inverse(Scalar a) const { return invmod(a, p); }
  [[nodiscard]] Scalar mul(Scalar a, Scalar b) const { return mulmod(a, b, p); }
  [[nodiscard]] Scalar add(Scalar a, Scalar b) const { return addmod(a, b, p); }
  void submul(Scalar& a, Scalar f, Scalar b) const { a = submod(a, mulmod(f, b, p), p); }
  [[nodiscard]] Scalar neg(Scalar a) const { return a == 0 ? 0 : p - a; }
  [[nodiscard]] Scalar from(const Integer& v) const { return v.mod_u64(p); }
};

template <class Ring>
class SparseEliminator {
 public:
  using Scalar = typename Ring::Scalar;
  using Entry = std::pair<std::uint32_t, Scalar>;
  using Row = std::vector<Entry>;

  SparseEliminator(Ring ring, std::size_t ncols)
      : ring_(std::move(ring)), col_rows_(ncols), col_count_(ncols, 0), col_done_(ncols, 0) {}

  /// `row` must be sorted by column with no zero entries.
  std::size_t add_row(Row row, bool pivotable = true) {
    auto id = static_cast<std::uint32_t>(rows_.size());
    for (const auto& [c, v] : row) {
      if (c >= col_rows_.size()) throw std::out_of_range("SparseEliminator: column out of range");
      col_rows_[c].push_back(id);
      ++col_count_[c];
    }
    rows_.push_back(std::move(row));
    alive_.push_back(1);
    pivotable_.push_back(pivotable ? 1 : 0);
    return id;
  }

  [[nodiscard]] std::size_t ncols() const { return col_rows_.size(); }
  [[nodiscard]] std::size_t nrows() const { return rows_.size(); }
  [[nodiscard]] const Row& row(std::size_t i) const { return rows_[i]; }
  [[nodiscard]] bool alive(std::size_t i) const { return alive_[i] != 0; }
  [[nodiscard]] bool pivotable(std::size_t i) const { return pivotable_[i] != 0; }
  [[nodiscard]] bool column_done(std::size_t c) const { return col_done_[c] != 0; }
  [[nodiscard]] std::size_t unit_pivots() const { return unit_pivots_; }
  [[nodiscard]] const Ring& ring() const { return ring_; }

  /// Columns not yet eliminated, in increasing order.
  [[nodiscard]] std::vector<std::uint32_t> active_columns() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < col_done_.size(); ++c) {
      if (!col_done_[c]) out.push_back(c);
    }
    return out;
  }

  /// Nonzeros and shape of the active pivotable block.
  [[nodiscard]] double active_density() const {
    std::size_t nnz = 0, nr = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (alive_[i] && pivotable_[i] && !rows_[i].empty()) {
        nnz += rows_[i].size();
        ++nr;
      }
    }
    std::size_t nc = 0;
    for (std::size_t c = 0; c < col_done_.size(); ++c) nc += (col_done_[c] == 0 && col_count_[c] > 0) ? 1 : 0;
    if (nr == 0 || nc == 0) return 0.0;
    return static_cast<double>(nnz) / (static_cast<double>(nr) * static_cast<double>(nc));
  }

  /// Pivots on units until none remain among pivotable rows.
  std::size_t eliminate_units() {
    std::size_t count = 0;
    for (;;) {
      auto piv = find_unit_pivot();
      if (!piv) break;
      eliminate(piv->first, piv->second);
      ++count;
      if ((count & 63U) == 0) check_deadline();
    }
    return count;
  }

  // -- Integer-only operations (instantiated only when used) ----------------

  /// Entry of minimal absolute value among pivotable rows, Markowitz tie-break.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> find_min_pivot() const {
    std::optional<std::pair<std::uint32_t, std::uint32_t>> best;
    Scalar best_abs;
    std::uint64_t best_cost = 0;
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
      if (!alive_[r] || !pivotable_[r]) continue;
      const auto& row = rows_[r];
      for (const auto& [c, v] : row) {
        Scalar a = abs(v);
        std::uint64_t cost = static_cast<std::uint64_t>(row.size() - 1) * (col_count_[c] - 1);
        if (!best || a < best_abs || (a == best_abs && cost < best_cost)) {
          best = {r, c};
          best_abs = a;
          best_cost = cost;
        }
      }
    }
    return best;
  }

  /// Clears column c from every other alive row using unimodular 2x2 row
  /// operations involving row p. Returns the final pivot value at (p, c).
  Scalar gcd_clear_column(std::uint32_t p, std::uint32_t c) {
    auto others = col_rows_[c];
    for (auto k : others) {
      if (k == p || !alive_[k]) continue;
      const Scalar* a = find(rows_[k], c);
      if (a == nullptr) continue;
      const Scalar* v = find(rows_[p], c);
      if (divides(*v, *a)) {
        Scalar f = exact_div(*a, *v);
        replace_row(k, combine(Scalar(1), rows_[k], -f, rows_[p]));
      } else {
        auto [g, s, t] = xgcd(*v, *a);
        Scalar vg = exact_div(*v, g), ag = exact_div(*a, g);
        Row np = combine(s, rows_[p], t, rows_[k]);
        Row nk = combine(vg, rows_[k], -ag, rows_[p]);
        replace_row(p, std::move(np));
        replace_row(k, std::move(nk));
      }
    }
    compact_column(c);
    return *find(rows_[p], c);
  }

  /// With column c cleared except for row p, reduces the other entries of row p
  /// modulo the pivot (column operations that touch only row p). Returns the
  /// column of a nonzero remainder, or nullopt if row p is now the pivot alone.
  std::optional<std::uint32_t> reduce_pivot_row(std::uint32_t p, std::uint32_t c) {
    Scalar g = *find(rows_[p], c);
    Row out;
    std::optional<std::uint32_t> smallest;
    Scalar smallest_abs;
    for (auto& [j, b] : rows_[p]) {
      if (j == c) {
        out.emplace_back(j, b);
        continue;
      }
      auto [q, r] = floor_divmod(b, g);
      (void)q;
      if (!r.is_zero()) {
        if (!smallest || abs(r) < smallest_abs) {
          smallest = j;
          smallest_abs = abs(r);
        }
        out.emplace_back(j, std::move(r));
      }
    }
    replace_row(p, std::move(out));
    return smallest;
  }

  /// Removes row p and column c after (p, c) became an isolated pivot.
  void retire_pivot(std::uint32_t p, std::uint32_t c) {
    for (const auto& [j, v] : rows_[p]) --col_count_[j];
    rows_[p].clear();
    alive_[p] = 0;
    col_done_[c] = 1;
    col_rows_[c].clear();
  }

 private:
  static const Scalar* find(const Row& row, std::uint32_t c) {
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::uint32_t col) { return e.first < col; });
    return (it != row.end() && it->first == c) ? &it->second : nullptr;
  }

  std::optional<std::pair<std::uint32_t, std::uint32_t>> find_unit_pivot() const {
    std::optional<std::pair<std::uint32_t, std::uint32_t>> best;
    std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
      if (!alive_[r] || !pivotable_[r]) continue;
      const auto& row = rows_[r];
      if (row.empty()) continue;
      auto rlen = static_cast<std::uint64_t>(row.size() - 1);
      for (const auto& [c, v] : row) {
        if (!ring_.is_unit(v)) continue;
        std::uint64_t cost = rlen * (col_count_[c] - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best = {r, c};
          if (cost == 0) return best;
        }
      }
    }
    return best;
  }

  /// x * a + y * b over sorted sparse rows.
  Row combine(const Scalar& x, const Row& a, const Scalar& y, const Row& b) const {
    Row out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        Scalar v = ring_.mul(x, a[i].second);
        if (!ring_.is_zero(v)) out.emplace_back(a[i].first, std::move(v));
        ++i;
      } else if (i == a.size() || b[j].first < a[i].first) {
        Scalar v = ring_.mul(y, b[j].second);
        if (!ring_.is_zero(v)) out.emplace_back(b[j].first, std::move(v));
        ++j;
      } else {
        Scalar v = ring_.add(ring_.mul(x, a[i].second), ring_.mul(y, b[j].second));
        if (!ring_.is_zero(v)) out.emplace_back(a[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    return out;
  }

  /// Swaps in a new content for row k, keeping column counts and lists exact
  /// enough (lists may hold stale ids, counts are exact).
  void replace_row(std::uint32_t k, Row fresh) {
    const Row& old = rows_[k];
    std::size_t i = 0, j = 0;
    while (i < old.size() || j < fresh.size()) {
      if (j == fresh.size() || (i < old.size() && old[i].first < fresh[j].first)) {
        --col_count_[old[i].first];
        ++i;
      } else if (i == old.size() || fresh[j].first < old[i].first) {
        ++col_count_[fresh[j].first];
        col_rows_[fresh[j].first].push_back(k);
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
    rows_[k] = std::move(fresh);
  }

  /// row_k -= f * row_p.
  void subtract_scaled(std::uint32_t k, const Scalar& f, std::uint32_t p) {
    Row& rk = rows_[k];
    const Row& rp = rows_[p];
    scratch_.clear();
    scratch_.reserve(rk.size() + rp.size());
    std::size_t i = 0, j = 0;
    while (i < rk.size() || j < rp.size()) {
      if (j == rp.size() || (i < rk.size() && rk[i].first < rp[j].first)) {
        scratch_.push_back(std::move(rk[i]));
        ++i;
      } else if (i == rk.size() || rp[j].first < rk[i].first) {
        Scalar v = ring_.neg(ring_.mul(f, rp[j].second));
        ++col_count_[rp[j].first];
        col_rows_[rp[j].first].push_back(k);
        scratch_.emplace_back(rp[j].first, std::move(v));
        ++j;
      } else {
        Scalar v = std::move(rk[i].second);
        ring_.submul(v, f, rp[j].second);
        if (ring_.is_zero(v)) {
          --col_count_[rk[i].first];
        } else {
          scratch_.emplace_back(rk[i].first, std::move(v));
        }
        ++i;
        ++j;
      }
    }
    rk.swap(scratch_);
  }

  void eliminate(std::uint32_t p, std::uint32_t c) {
    const Scalar* pv = find(rows_[p], c);
    Scalar inv = ring_.unit_inverse(*pv);
    auto others = std::move(col_rows_[c]);
    col_rows_[c].clear();
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    for (auto k : others) {
      if (k == p || !alive_[k]) continue;
      const Scalar* a = find(rows_[k], c);
      if (a == nullptr) continue;
      Scalar f = ring_.mul(*a, inv);
      subtract_scaled(k, f, p);
    }
    ++unit_pivots_;
    retire_pivot(p, c);
  }

  void compact_column(std::uint32_t c) {
    auto& lst = col_rows_[c];
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    std::erase_if(lst, [&](std::uint32_t k) { return !alive_[k] || find(rows_[k], c) == nullptr; });
  }

  Ring ring_;
  std::vector<Row> rows_;
  std::vector<char> alive_;
  std::vector<char> pivotable_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<std::uint32_t> col_count_;
  std::vector<char> col_done_;
  std::size_t unit_pivots_ = 0;
  Row scratch_;
};

}  // namespace ceva
