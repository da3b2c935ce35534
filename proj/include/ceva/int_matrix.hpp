#pragma once

#include "ceva/integer.hpp"

#include <cstddef>
#include <initializer_list>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ceva {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sparse integer matrix. Only nonzero entries are stored; iteration order is
/// row-major, which is also the order used by the text export.
class IntMatrix {
 public:
  using Index = std::pair<std::size_t, std::size_t>;
  using Column = std::vector<std::pair<std::size_t, Integer>>;

  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  /// Dense literal, mostly for tests: IntMatrix::dense({{2, 4}, {6, 8}}).
  static IntMatrix dense(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<std::vector<Integer>> d;
    for (const auto& r : rows) d.emplace_back(r.begin(), r.end());
    return from_dense(d, rows.size() == 0 ? 0 : rows.begin()->size());
  }

  static IntMatrix from_dense(const std::vector<std::vector<Integer>>& d, std::size_t cols) {
    IntMatrix m(d.size(), cols);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i].size() != cols) throw std::invalid_argument("IntMatrix::from_dense: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, d[i][j]);
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Integer(1));
    return m;
  }

  /// Matrix whose columns are the given vectors (each of length `rows`).
  static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& cols) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("IntMatrix::from_columns: wrong length");
      for (std::size_t i = 0; i < rows; ++i) m.set(i, j, cols[j][i]);
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t nonzeros() const { return entries_.size(); }
  [[nodiscard]] const std::map<Index, Integer>& entries() const { return entries_; }

  [[nodiscard]] Integer get(std::size_t r, std::size_t c) const {
    check(r, c);
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Integer(0) : it->second;
  }

  void set(std::size_t r, std::size_t c, Integer v) {
    check(r, c);
    if (v.is_zero()) {
      entries_.erase({r, c});
    } else {
      entries_[{r, c}] = std::move(v);
    }
  }

  void add(std::size_t r, std::size_t c, const Integer& v) {
    check(r, c);
    if (v.is_zero()) return;
    auto [it, inserted] = entries_.try_emplace({r, c}, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) entries_.erase(it);
    }
  }

  /// Appends a column given as sparse (row, value) pairs.
  void append_column(const Column& col) {
    std::size_t c = cols_++;
    for (const auto& [r, v] : col) add(r, c, v);
  }

  [[nodiscard]] std::vector<Column> columns() const {
    std::vector<Column> out(cols_);
    for (const auto& [idx, v] : entries_) out[idx.second].emplace_back(idx.first, v);
    return out;
  }

  [[nodiscard]] std::vector<std::vector<Integer>> to_dense() const {
    std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols_));
    for (const auto& [idx, v] : entries_) d[idx.first][idx.second] = v;
    return d;
  }

  [[nodiscard]] IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (const auto& [idx, v] : entries_) t.entries_.emplace(Index{idx.second, idx.first}, v);
    return t;
  }

  [[nodiscard]] IntMatrix operator*(const IntMatrix& b) const {
    if (cols_ != b.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    IntMatrix out(rows_, b.cols_);
    std::vector<std::vector<std::pair<std::size_t, Integer>>> brows(b.rows_);
    for (const auto& [idx, v] : b.entries_) brows[idx.first].emplace_back(idx.second, v);
    for (const auto& [idx, v] : entries_) {
      for (const auto& [c, w] : brows[idx.second]) out.add(idx.first, c, v * w);
    }
    return out;
  }

  /// Horizontal concatenation [A | B].
  [[nodiscard]] IntMatrix hcat(const IntMatrix& b) const {
    if (rows_ != b.rows_) throw std::invalid_argument("IntMatrix::hcat: row mismatch");
    IntMatrix out(rows_, cols_ + b.cols_);
    out.entries_ = entries_;
    for (const auto& [idx, v] : b.entries_) out.entries_.emplace(Index{idx.first, idx.second + cols_}, v);
    return out;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  /// Sparse text format: "rows cols M", then "i j value" (1-based), then "0 0 0".
  void write_sms(std::ostream& os) const {
    os << rows_ << ' ' << cols_ << " M\n";
    for (const auto& [idx, v] : entries_) os << idx.first + 1 << ' ' << idx.second + 1 << ' ' << v << '\n';
    os << "0 0 0\n";
  }

  [[nodiscard]] std::string to_sms() const {
    std::ostringstream os;
    write_sms(os);
    return os.str();
  }

  static IntMatrix read_sms(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("sms: missing header");
    std::istringstream hs(line);
    std::size_t rows = 0, cols = 0;
    std::string tag;
    if (!(hs >> rows >> cols >> tag) || tag != "M") throw FormatError("sms: bad header '" + line + "'");
    IntMatrix m(rows, cols);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::size_t i = 0, j = 0;
      std::string value;
      if (!(ls >> i >> j >> value)) throw FormatError("sms: bad entry line '" + line + "'");
      if (i == 0 && j == 0) {
        if (value != "0") throw FormatError("sms: bad terminator");
        return m;
      }
      if (i > rows || j > cols || i == 0 || j == 0) throw FormatError("sms: index out of range in '" + line + "'");
      Integer v(value);
      if (v.is_zero()) continue;
      if (m.entries_.contains({i - 1, j - 1})) throw FormatError("sms: duplicate entry in '" + line + "'");
      m.entries_.emplace(Index{i - 1, j - 1}, std::move(v));
    }
    throw FormatError("sms: missing terminator");
  }

  static IntMatrix from_sms(const std::string& text) {
    std::istringstream is(text);
    return read_sms(is);
  }

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("IntMatrix: index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<Index, Integer> entries_;
};

}  // namespace ceva
