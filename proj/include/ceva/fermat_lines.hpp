#pragma once

// The 3m^2 lines on the Fermat surface z0^m + z1^m + z2^m + z3^m = 0 and the
// lattice they span together with the hyperplane class.
//
// Write zeta_k = exp(i*pi*(2k+1)/m), k in Z/m, for the m-th roots of -1.
//   family 0, pairing (01)(23):  z1 = zeta_a z0,  z3 = zeta_b z2
//   family 1, pairing (02)(13):  z2 = zeta_a z0,  z3 = zeta_b z1
//   family 2, pairing (03)(12):  z3 = zeta_a z0,  z2 = zeta_b z1

#include "ceva/int_matrix.hpp"
#include "ceva/normal_forms.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceva {

struct DegreeTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Line {
  int family = 0;
  std::int64_t eps = 0;
  std::int64_t eps_prime = 0;

  friend bool operator==(const Line&, const Line&) = default;
};

inline void require_degree(std::int64_t m) {
  if (m <= 2) throw DegreeTooSmall("surfaces of degree " + std::to_string(m) + " contain infinitely many lines; need m >= 3");
}

/// Lines ordered by (family, eps, eps').
inline std::vector<Line> enumerate_lines(std::int64_t m) {
  require_degree(m);
  std::vector<Line> out;
  out.reserve(static_cast<std::size_t>(3 * m * m));
  for (int f = 0; f < 3; ++f) {
    for (std::int64_t a = 0; a < m; ++a) {
      for (std::int64_t b = 0; b < m; ++b) out.push_back({f, a, b});
    }
  }
  return out;
}

inline std::size_t line_index(const Line& l, std::int64_t m) {
  return static_cast<std::size_t>((l.family * m + l.eps) * m + l.eps_prime);
}

namespace detail {
inline std::int64_t mod(std::int64_t x, std::int64_t m) {
  x %= m;
  return x < 0 ? x + m : x;
}
}  // namespace detail

/// Intersection number of two lines on the degree-m Fermat surface.
inline std::int64_t intersection(const Line& l1, const Line& l2, std::int64_t m) {
  if (l1 == l2) return 2 - m;
  if (l1.family == l2.family) return (l1.eps == l2.eps) != (l1.eps_prime == l2.eps_prime) ? 1 : 0;
  const Line& x = l1.family < l2.family ? l1 : l2;
  const Line& y = l1.family < l2.family ? l2 : l1;
  const auto a = x.eps, b = x.eps_prime, c = y.eps, d = y.eps_prime;
  bool meet = false;
  if (x.family == 0 && y.family == 1) {
    meet = detail::mod(b + c - a - d, m) == 0;
  } else if (x.family == 0 && y.family == 2) {
    meet = detail::mod(a + b + d + 1 - c, m) == 0;
  } else {
    meet = detail::mod(a + b - c - d, m) == 0;
  }
  return meet ? 1 : 0;
}

struct LineLattice {
  std::int64_t m = 0;
  bool include_hyperplane = true;
  IntMatrix gram;
};

/// Gram matrix of the line classes, optionally followed by the hyperplane
/// class H (H^2 = m, L.H = 1) as the last row and column.
inline LineLattice gram_matrix(std::int64_t m, bool include_hyperplane = true) {
  auto lines = enumerate_lines(m);
  const std::size_t n = lines.size() + (include_hyperplane ? 1 : 0);
  LineLattice out{m, include_hyperplane, IntMatrix(n, n)};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = 0; j < lines.size(); ++j) out.gram.set(i, j, Integer(intersection(lines[i], lines[j], m)));
  }
  if (include_hyperplane) {
    const std::size_t h = lines.size();
    for (std::size_t i = 0; i < h; ++i) {
      out.gram.set(i, h, Integer(1));
      out.gram.set(h, i, Integer(1));
    }
    out.gram.set(h, h, Integer(m));
  }
  return out;
}

/// Rank of the lattice spanned by the lines and the hyperplane class.
inline std::size_t rank_S(std::int64_t m) {
  return snf(gram_matrix(m, true).gram).size();
}

/// 3m^2 + 1 - rank_S(m): the rank of the kernel of the map from the free
/// group on the curve classes to the lattice they span.
inline std::size_t rank_K(std::int64_t m) {
  return static_cast<std::size_t>(3 * m * m + 1) - rank_S(m);
}

struct Discriminant {
  Integer value;            // det of the form on the numerical lattice
  Integer restricted_det;   // det of the form on the saturated column space
  Integer index;            // [Z^n : kernel + saturated column space]
  Integer invariant_product;  // product of the nonzero invariant factors of the Gram matrix
};

/// Discriminant of the lattice spanned by the lines and the hyperplane class
/// (the Gram form on Z^n modulo its kernel).
///
/// The form is restricted to the saturation of its column space, which is the
/// orthogonal complement (for the standard dot product) of the kernel; that
/// sublattice has index d in a complement of the kernel, so the restricted
/// determinant equals disc * d^2.
inline Discriminant discriminant_S(std::int64_t m) {
  const IntMatrix g = gram_matrix(m, true).gram;
  IntMatrix ker = kernel_basis(g);          // n x k
  IntMatrix sat = kernel_basis(ker.transpose());  // n x (n - k)
  Discriminant d;
  d.restricted_det = determinant(sat.transpose() * g * sat);
  d.index = abs(determinant(ker.hcat(sat)));
  auto sq = d.index * d.index;
  if (!divides(sq, d.restricted_det)) throw VerificationError("discriminant_S: restricted determinant not divisible by index^2");
  d.value = exact_div(d.restricted_det, sq);
  d.invariant_product = Integer(1);
  for (const auto& f : snf(g).factors) d.invariant_product = d.invariant_product * f;
  if (!(abs(d.value) == d.invariant_product)) {
    throw VerificationError("discriminant_S: restricted determinant disagrees with the invariant factors");
  }
  return d;
}

/// CSV with header "family,eps,eps_prime".
inline void write_lines_csv(std::ostream& os, std::int64_t m) {
  os << "family,eps,eps_prime\n";
  for (const auto& l : enumerate_lines(m)) os << l.family << ',' << l.eps << ',' << l.eps_prime << '\n';
}

}  // namespace ceva
