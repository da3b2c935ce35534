#pragma once

// Integral group ring Z[G] of a finite abelian group, and its characters.

#include "ceva/group.hpp"

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ceva {

struct CoefficientOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

namespace detail {
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw CoefficientOverflow("group ring coefficient overflow");
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw CoefficientOverflow("group ring coefficient overflow");
  return r;
}
}  // namespace detail

/// Sparse element sum_g c_g g of Z[G]; zero coefficients are never stored.
class GroupRingElem {
 public:
  GroupRingElem() = default;
  explicit GroupRingElem(FiniteAbelianGroup g) : group_(std::move(g)) {}

  static GroupRingElem zero(const FiniteAbelianGroup& g) { return GroupRingElem(g); }
  static GroupRingElem one(const FiniteAbelianGroup& g) { return monomial(g, 0); }
  static GroupRingElem monomial(const FiniteAbelianGroup& g, ElementIndex e, std::int64_t c = 1) {
    GroupRingElem x(g);
    x.add_term(e, c);
    return x;
  }

  [[nodiscard]] const FiniteAbelianGroup& group() const { return group_; }
  [[nodiscard]] const std::map<ElementIndex, std::int64_t>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] std::int64_t coeff(ElementIndex e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(ElementIndex e, std::int64_t c) {
    if (e >= group_.order()) throw std::out_of_range("GroupRingElem: element index out of range");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second = detail::checked_add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Sum of the coefficients (the augmentation Z[G] -> Z).
  [[nodiscard]] std::int64_t augmentation() const {
    std::int64_t s = 0;
    for (const auto& [e, c] : terms_) s = detail::checked_add(s, c);
    return s;
  }

  /// Multiplication by the group element g.
  [[nodiscard]] GroupRingElem translate(ElementIndex g) const {
    GroupRingElem out(group_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(group_.add(e, g), c);
    return out;
  }

  GroupRingElem& operator+=(const GroupRingElem& b) {
    same_group(b);
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
  }
  GroupRingElem& operator-=(const GroupRingElem& b) {
    same_group(b);
    for (const auto& [e, c] : b.terms_) add_term(e, -c);
    return *this;
  }
  friend GroupRingElem operator+(GroupRingElem a, const GroupRingElem& b) { return a += b; }
  friend GroupRingElem operator-(GroupRingElem a, const GroupRingElem& b) { return a -= b; }
  friend GroupRingElem operator-(const GroupRingElem& a) { return a * -1; }

  friend GroupRingElem operator*(const GroupRingElem& a, std::int64_t k) {
    GroupRingElem out(a.group_);
    if (k == 0) return out;
    for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, detail::checked_mul(c, k));
    return out;
  }
  friend GroupRingElem operator*(std::int64_t k, const GroupRingElem& a) { return a * k; }

  friend GroupRingElem operator*(const GroupRingElem& a, const GroupRingElem& b) {
    a.same_group(b);
    GroupRingElem out(a.group_);
    for (const auto& [e, c] : a.terms_) {
      for (const auto& [f, d] : b.terms_) out.add_term(a.group_.add(e, f), detail::checked_mul(c, d));
    }
    return out;
  }

  friend bool operator==(const GroupRingElem& a, const GroupRingElem& b) {
    return a.group_ == b.group_ && a.terms_ == b.terms_;
  }

  /// Human-readable form such as "t^(1,0,0) - 1".
  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      std::int64_t mag = c < 0 ? -c : c;
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (e == 0) {
        os << mag;
        continue;
      }
      if (mag != 1) os << mag << '*';
      os << "t^(";
      auto x = group_.element(e);
      for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
      os << ')';
    }
    return os.str();
  }

 private:
  void same_group(const GroupRingElem& b) const {
    if (!(group_ == b.group_)) throw std::invalid_argument("GroupRingElem: operands live in different groups");
  }

  FiniteAbelianGroup group_;
  std::map<ElementIndex, std::int64_t> terms_;
};

/// The variable t_j = alpha(gamma_j) as a group ring element, j = 0..3.
inline GroupRingElem variable(const Epimorphism& alpha, std::size_t j) {
  return GroupRingElem::monomial(alpha.group(), alpha.image(j));
}

/// 1 + x + ... + x^(n-1) for a group element x.
inline GroupRingElem geometric_sum(const FiniteAbelianGroup& g, ElementIndex x, std::int64_t n) {
  GroupRingElem out(g);
  ElementIndex p = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    out.add_term(p, 1);
    p = g.add(p, x);
  }
  return out;
}

/// phi_n(t_j) = 1 + t_j + ... + t_j^(n-1).
inline GroupRingElem phi(const Epimorphism& alpha, std::int64_t n, std::size_t j) {
  return geometric_sum(alpha.group(), alpha.image(j), n);
}

/// A character chi: G -> mu_N, chi(x) = zeta^(sum_i e_i x_i) with N the group exponent.
struct Character {
  std::uint64_t order = 1;               // N
  std::vector<std::uint64_t> exponents;  // e_i, one per Smith coordinate

  /// Exponent k with chi(x) = zeta^k, k in [0, N).
  [[nodiscard]] std::uint64_t evaluate(const FiniteAbelianGroup& g, ElementIndex x) const {
    auto v = g.element(x);
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += static_cast<unsigned __int128>(exponents[i]) * static_cast<std::uint64_t>(v[i]);
    return static_cast<std::uint64_t>(acc % order);
  }
};

/// All |G| characters of a group in Smith form, in lexicographic order of the
/// dual coordinates.
inline std::vector<Character> characters(const FiniteAbelianGroup& g) {
  if (!g.moduli().empty() && !g.is_smith()) throw std::invalid_argument("characters: group must be in Smith form");
  const auto n = static_cast<std::uint64_t>(g.exponent());
  std::vector<Character> out;
  out.reserve(g.order());
  for (ElementIndex k = 0; k < g.order(); ++k) {
    auto dual = g.element(k);
    Character chi;
    chi.order = n;
    for (std::size_t i = 0; i < dual.size(); ++i) {
      chi.exponents.push_back(static_cast<std::uint64_t>(dual[i]) * (n / static_cast<std::uint64_t>(g.moduli()[i])));
    }
    out.push_back(std::move(chi));
  }
  return out;
}

}  // namespace ceva
