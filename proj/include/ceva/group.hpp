#pragma once

// Finite abelian groups G = Z/n1 + ... + Z/nr and epimorphisms Z^3 ->> G.
//
// Elements are exponent vectors reduced modulo the moduli. They are indexed in
// mixed radix with the first coordinate most significant, so index order is
// the lexicographic order on exponent vectors.

#include "ceva/int_matrix.hpp"
#include "ceva/integer.hpp"
#include "ceva/normal_forms.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ceva {

struct NotSurjective : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using ExponentVector = std::vector<std::int64_t>;
using ElementIndex = std::uint32_t;

class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
    order_ = 1;
    for (auto n : moduli_) {
      if (n < 1) throw std::invalid_argument("FiniteAbelianGroup: moduli must be >= 1");
      order_ *= static_cast<std::uint64_t>(n);
      if (order_ > (std::uint64_t{1} << 31U)) throw std::invalid_argument("FiniteAbelianGroup: order too large");
    }
  }

  [[nodiscard]] const std::vector<std::int64_t>& moduli() const { return moduli_; }
  [[nodiscard]] std::size_t rank() const { return moduli_.size(); }
  [[nodiscard]] std::size_t order() const { return order_; }

  /// Least common multiple of the moduli.
  [[nodiscard]] std::int64_t exponent() const {
    std::int64_t e = 1;
    for (auto n : moduli_) e = std::lcm(e, n);
    return e;
  }

  /// Moduli > 1 in divisibility order.
  [[nodiscard]] bool is_smith() const {
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      if (moduli_[i] < 2) return false;
      if (i + 1 < moduli_.size() && moduli_[i + 1] % moduli_[i] != 0) return false;
    }
    return true;
  }

  [[nodiscard]] ExponentVector reduce(ExponentVector x) const {
    if (x.size() != moduli_.size()) throw std::invalid_argument("FiniteAbelianGroup: exponent vector has wrong length");
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] %= moduli_[i];
      if (x[i] < 0) x[i] += moduli_[i];
    }
    return x;
  }

  [[nodiscard]] ElementIndex index(const ExponentVector& x) const {
    auto r = reduce(x);
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < r.size(); ++i) idx = idx * static_cast<std::uint64_t>(moduli_[i]) + static_cast<std::uint64_t>(r[i]);
    return static_cast<ElementIndex>(idx);
  }

  [[nodiscard]] ExponentVector element(ElementIndex idx) const {
    ExponentVector x(moduli_.size());
    std::uint64_t v = idx;
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      x[i] = static_cast<std::int64_t>(v % static_cast<std::uint64_t>(moduli_[i]));
      v /= static_cast<std::uint64_t>(moduli_[i]);
    }
    return x;
  }

  [[nodiscard]] ElementIndex add(ElementIndex a, ElementIndex b) const {
    std::uint64_t out = 0, va = a, vb = b, scale = 1;
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      auto n = static_cast<std::uint64_t>(moduli_[i]);
      std::uint64_t s = va % n + vb % n;
      if (s >= n) s -= n;
      out += s * scale;
      scale *= n;
      va /= n;
      vb /= n;
    }
    return static_cast<ElementIndex>(out);
  }

  [[nodiscard]] ElementIndex neg(ElementIndex a) const {
    auto x = element(a);
    for (auto& v : x) v = -v;
    return index(x);
  }

  [[nodiscard]] ElementIndex scale(ElementIndex a, std::int64_t k) const {
    auto x = element(a);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = static_cast<std::int64_t>((static_cast<__int128>(x[i]) * k) % moduli_[i]);
    }
    return index(x);
  }

  [[nodiscard]] std::int64_t order_of(ElementIndex a) const {
    auto x = element(a);
    std::int64_t o = 1;
    for (std::size_t i = 0; i < x.size(); ++i) o = std::lcm(o, moduli_[i] / std::gcd(x[i], moduli_[i]));
    return o;
  }

  [[nodiscard]] std::string str() const {
    if (moduli_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < moduli_.size(); ++i) os << (i ? "+" : "") << "Z/" << moduli_[i];
    return os.str();
  }

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.moduli_ == b.moduli_; }

 private:
  std::vector<std::int64_t> moduli_;
  std::uint64_t order_ = 1;
};

/// Smith form of a finite abelian group together with the coordinate change:
/// x (in the original coordinates) maps to matrix * x reduced by the Smith moduli.
struct SmithIsomorphism {
  FiniteAbelianGroup smith;
  std::vector<std::vector<std::int64_t>> matrix;  // smith.rank() x original rank

  [[nodiscard]] ExponentVector apply(const ExponentVector& x) const {
    ExponentVector y(matrix.size(), 0);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < x.size(); ++j) acc += static_cast<__int128>(matrix[i][j]) * x[j];
      acc %= smith.moduli()[i];
      y[i] = static_cast<std::int64_t>(acc);
    }
    return smith.reduce(y);
  }
};

namespace detail {

/// Dense Smith form with the left transform: returns (P, diag) with
/// P * A * Q = diag(d1, d2, ...) and d1 | d2 | ... (Q is not tracked).
inline std::pair<std::vector<std::vector<Integer>>, std::vector<Integer>> smith_left(std::vector<std::vector<Integer>> a) {
  const std::size_t nr = a.size();
  const std::size_t nc = nr == 0 ? 0 : a[0].size();
  std::vector<std::vector<Integer>> p(nr, std::vector<Integer>(nr));
  for (std::size_t i = 0; i < nr; ++i) p[i][i] = Integer(1);
  auto row_submul = [&](std::size_t i, const Integer& q, std::size_t t) {
    for (std::size_t j = 0; j < nc; ++j) a[i][j].submul(q, a[t][j]);
    for (std::size_t j = 0; j < nr; ++j) p[i][j].submul(q, p[t][j]);
  };
  std::size_t t = 0;
  std::vector<Integer> diag;
  while (t < nr && t < nc) {
    std::size_t pi = nr, pj = nc;
    for (std::size_t i = t; i < nr; ++i) {
      for (std::size_t j = t; j < nc; ++j) {
        if (!a[i][j].is_zero() && (pi == nr || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
      }
    }
    if (pi == nr) break;
    std::swap(a[t], a[pi]);
    std::swap(p[t], p[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (a[i][t].is_zero()) continue;
        row_submul(i, floor_divmod(a[i][t], a[t][t]).first, t);
        dirty = dirty || !a[i][t].is_zero();
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (a[t][j].is_zero()) continue;
        Integer q = floor_divmod(a[t][j], a[t][t]).first;
        for (std::size_t i = t; i < nr; ++i) a[i][j].submul(q, a[i][t]);
        dirty = dirty || !a[t][j].is_zero();
      }
      if (!dirty) {
        // Divisibility: fold any offending row into row t and retry.
        std::size_t bad = nr;
        for (std::size_t i = t + 1; i < nr && bad == nr; ++i) {
          for (std::size_t j = t + 1; j < nc; ++j) {
            if (!divides(a[t][t], a[i][j])) {
              bad = i;
              break;
            }
          }
        }
        if (bad == nr) break;
        row_submul(t, Integer(-1), bad);
        dirty = true;
      }
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
      std::swap(p[t], p[bi]);
      for (auto& row : a) std::swap(row[t], row[bj]);
    }
    if (a[t][t].sign() < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : p[t]) x = -x;
    }
    diag.push_back(a[t][t]);
    ++t;
  }
  return {p, diag};
}

}  // namespace detail

inline SmithIsomorphism smith_form(const FiniteAbelianGroup& g) {
  const std::size_t r = g.rank();
  std::vector<std::vector<Integer>> a(r, std::vector<Integer>(r));
  for (std::size_t i = 0; i < r; ++i) a[i][i] = Integer(g.moduli()[i]);
  auto [p, diag] = detail::smith_left(a);
  std::vector<std::int64_t> moduli;
  SmithIsomorphism iso;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i].is_one()) continue;
    moduli.push_back(diag[i].to_int64());
    std::vector<std::int64_t> row(r);
    for (std::size_t j = 0; j < r; ++j) {
      auto [q, rem] = floor_divmod(p[i][j], diag[i]);
      (void)q;
      row[j] = rem.to_int64();
    }
    iso.matrix.push_back(std::move(row));
  }
  iso.smith = FiniteAbelianGroup(moduli);
  return iso;
}

/// A surjection alpha: Z^3 ->> G given by the images of gamma_1, gamma_2,
/// gamma_3; gamma_0 maps to -(alpha(gamma_1) + alpha(gamma_2) + alpha(gamma_3)).
class Epimorphism {
 public:
  Epimorphism(std::vector<std::int64_t> moduli, std::array<ExponentVector, 3> images)
      : user_group_(std::move(moduli)), user_images_(std::move(images)) {
    for (auto& x : user_images_) x = user_group_.reduce(x);
    auto iso = smith_form(user_group_);
    group_ = iso.smith;
    for (std::size_t i = 0; i < 3; ++i) images_[i + 1] = group_.index(iso.apply(user_images_[i]));
    images_[0] = group_.neg(group_.add(images_[1], group_.add(images_[2], images_[3])));
    if (!generates()) throw NotSurjective("images do not generate " + user_group_.str());
  }

  /// The quotient map Z^3 ->> (Z/m)^3 with the standard basis as images.
  static Epimorphism fermat(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("fermat: m must be >= 1");
    return Epimorphism({m, m, m}, {ExponentVector{1, 0, 0}, ExponentVector{0, 1, 0}, ExponentVector{0, 0, 1}});
  }

  /// Internal group, in Smith coordinates.
  [[nodiscard]] const FiniteAbelianGroup& group() const { return group_; }
  /// Image of gamma_j (j = 0..3) as an element index of group().
  [[nodiscard]] ElementIndex image(std::size_t j) const { return images_.at(j); }
  [[nodiscard]] const std::array<ElementIndex, 4>& images() const { return images_; }

  [[nodiscard]] const FiniteAbelianGroup& user_group() const { return user_group_; }
  [[nodiscard]] const std::array<ExponentVector, 3>& user_images() const { return user_images_; }

  [[nodiscard]] std::size_t order() const { return group_.order(); }

  /// The same covering with the four branch lines relabeled: gamma'_j = gamma_{perm[j]}.
  /// perm is a permutation of {0,1,2,3}; the result is expressed in Smith coordinates.
  [[nodiscard]] Epimorphism relabeled(const std::array<int, 4>& perm) const {
    std::array<ExponentVector, 3> imgs;
    for (std::size_t i = 0; i < 3; ++i) imgs[i] = group_.element(images_.at(static_cast<std::size_t>(perm[i + 1])));
    return Epimorphism(group_.moduli(), imgs);
  }

 private:
  [[nodiscard]] bool generates() const {
    const std::size_t r = group_.rank();
    if (r == 0) return true;
    IntMatrix m(r, 3 + r);
    for (std::size_t j = 0; j < 3; ++j) {
      auto x = group_.element(images_[j + 1]);
      for (std::size_t i = 0; i < r; ++i) m.set(i, j, Integer(x[i]));
    }
    for (std::size_t i = 0; i < r; ++i) m.set(i, 3 + i, Integer(group_.moduli()[i]));
    SnfOptions opt;
    opt.verify = false;
    return cokernel_group(m, opt).is_trivial();
  }

  FiniteAbelianGroup user_group_;
  std::array<ExponentVector, 3> user_images_;
  FiniteAbelianGroup group_;
  std::array<ElementIndex, 4> images_{};
};

}  // namespace ceva
