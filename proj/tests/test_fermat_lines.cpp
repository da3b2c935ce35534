#include "oracles.hpp"

#include "ceva/fermat_lines.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <sstream>

using ceva::Line;

namespace {

// 61 decimal digits, a little over 200 bits.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<61>>;
using Complex = boost::multiprecision::cpp_complex<61>;

// A line is cut out by x_p = zeta^e x_q for two disjoint pairs (p, q), with
// zeta = exp(i pi / m) and e odd.
struct Edge {
  int p, q;
  std::int64_t e;  // mod 2m
};

std::int64_t mod(std::int64_t x, std::int64_t n) { return ((x % n) + n) % n; }

std::array<Edge, 2> edges_of(const Line& l) {
  const auto a = 2 * l.eps + 1, b = 2 * l.eps_prime + 1;
  switch (l.family) {
    case 0:
      return {Edge{0, 1, a}, Edge{2, 3, b}};
    case 1:
      return {Edge{0, 2, a}, Edge{1, 3, b}};
    default:
      return {Edge{0, 3, a}, Edge{1, 2, b}};
  }
}

Line line_of(std::array<Edge, 2> es, std::int64_t m) {
  for (auto& x : es) {
    if (x.p > x.q) x = {x.q, x.p, -x.e};
    x.e = mod(x.e, 2 * m);
  }
  std::sort(es.begin(), es.end(), [](const Edge& x, const Edge& y) { return x.p < y.p; });
  Line l;
  l.family = es[0].q - 1;
  l.eps = (es[0].e - 1) / 2;
  l.eps_prime = (es[1].e - 1) / 2;
  return l;
}

// Exact test: the four equations have a nonzero solution iff some connected
// component of the coordinate graph carries consistent exponents.
bool meet_symbolic(const Line& x, const Line& y, std::int64_t m) {
  std::vector<Edge> es;
  for (const auto& e : edges_of(x)) es.push_back(e);
  for (const auto& e : edges_of(y)) es.push_back(e);
  std::array<int, 4> comp{-1, -1, -1, -1};
  std::array<std::int64_t, 4> pot{};
  bool any_consistent = false;
  for (int start = 0; start < 4; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    comp[static_cast<std::size_t>(start)] = start;
    pot[static_cast<std::size_t>(start)] = 0;
    bool consistent = true;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& e : es) {
        // x_p = zeta^e x_q, so pot(p) = pot(q) + e.
        int w = -1;
        std::int64_t want = 0;
        if (e.p == v) {
          w = e.q;
          want = pot[static_cast<std::size_t>(v)] - e.e;
        } else if (e.q == v) {
          w = e.p;
          want = pot[static_cast<std::size_t>(v)] + e.e;
        } else {
          continue;
        }
        want = mod(want, 2 * m);
        auto wi = static_cast<std::size_t>(w);
        if (comp[wi] < 0) {
          comp[wi] = start;
          pot[wi] = want;
          stack.push_back(w);
        } else if (pot[wi] != want) {
          consistent = false;
        }
      }
    }
    any_consistent = any_consistent || consistent;
  }
  return any_consistent;
}

Complex zeta_power(std::int64_t e, std::int64_t m) {
  Real angle = boost::math::constants::pi<Real>() * Real(e) / Real(m);
  return Complex(cos(angle), sin(angle));
}

Real abs_det(std::array<std::array<Complex, 4>, 4> a) {
  Complex det(1);
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 4; ++r) {
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    }
    if (abs(a[piv][c]) == 0) return Real(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < 4; ++r) {
      Complex f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return abs(det);
}

// Numerically: the two planes in C^4 meet iff the 4x4 matrix of their equations is singular.
Real meet_numeric(const Line& x, const Line& y, std::int64_t m) {
  std::array<std::array<Complex, 4>, 4> a{};
  std::size_t row = 0;
  for (const auto& l : {x, y}) {
    for (const auto& e : edges_of(l)) {
      a[row][static_cast<std::size_t>(e.p)] = Complex(1);
      a[row][static_cast<std::size_t>(e.q)] = -zeta_power(e.e, m);
      ++row;
    }
  }
  return abs_det(a);
}

}  // namespace

TEST(Lines, Counts) {
  EXPECT_EQ(ceva::enumerate_lines(3).size(), 27U);
  EXPECT_EQ(ceva::enumerate_lines(4).size(), 48U);
  EXPECT_EQ(ceva::enumerate_lines(5).size(), 75U);
  EXPECT_THROW(ceva::enumerate_lines(2), ceva::DegreeTooSmall);
  EXPECT_THROW(ceva::gram_matrix(1), ceva::DegreeTooSmall);
}

TEST(Lines, IndexIsEnumerationOrder) {
  auto lines = ceva::enumerate_lines(4);
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(ceva::line_index(lines[i], 4), i);
}

TEST(Lines, EquationsRoundTrip) {
  for (const auto& l : ceva::enumerate_lines(5)) EXPECT_EQ(line_of(edges_of(l), 5), l);
}

TEST(Lines, LieOnTheSurface) {
  // A point of each line: fix the free coordinates and check sum x_i^m = 0.
  const std::int64_t m = 4;
  for (const auto& l : ceva::enumerate_lines(m)) {
    std::array<Complex, 4> x{};
    for (const auto& e : edges_of(l)) {
      x[static_cast<std::size_t>(e.q)] = Complex(Real(e.q + 2), Real(1));
      x[static_cast<std::size_t>(e.p)] = zeta_power(e.e, m) * x[static_cast<std::size_t>(e.q)];
    }
    Complex s(0);
    for (const auto& v : x) s += pow(v, static_cast<int>(m));
    EXPECT_LT(abs(s), Real("1e-40"));
  }
}

TEST(Lines, IntersectionMatchesNumericAndSymbolicOracles) {
  const Real zero_tol("1e-40");
  for (std::int64_t m = 3; m <= 6; ++m) {
    auto lines = ceva::enumerate_lines(m);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const bool sym = meet_symbolic(lines[i], lines[j], m);
        const Real d = meet_numeric(lines[i], lines[j], m);
        const bool num = d < zero_tol;
        if (!num) {
          EXPECT_GT(d, Real("1e-6"));
        }
        EXPECT_EQ(sym, num);
        EXPECT_EQ(ceva::intersection(lines[i], lines[j], m), sym ? 1 : 0)
            << "m=" << m << " (" << lines[i].family << "," << lines[i].eps << "," << lines[i].eps_prime << ") ("
            << lines[j].family << "," << lines[j].eps << "," << lines[j].eps_prime << ")";
      }
    }
  }
}

TEST(Lines, EachLineMeetsFourMMinusTwoOthers) {
  for (std::int64_t m = 3; m <= 7; ++m) {
    auto lines = ceva::enumerate_lines(m);
    for (const auto& x : lines) {
      std::int64_t count = 0;
      for (const auto& y : lines) {
        if (!(x == y)) count += ceva::intersection(x, y, m);
      }
      EXPECT_EQ(count, 4 * m - 2);
    }
  }
}

TEST(Gram, DiagonalAndHyperplane) {
  auto g = ceva::gram_matrix(5).gram;
  ASSERT_EQ(g.rows(), 76U);
  EXPECT_EQ(g.get(0, 0), ceva::Integer(-3));
  EXPECT_EQ(g.get(75, 75), ceva::Integer(5));
  EXPECT_EQ(g.get(10, 75), ceva::Integer(1));
  EXPECT_EQ(g, g.transpose());
  EXPECT_EQ(ceva::gram_matrix(5, false).gram.rows(), 75U);
}

TEST(Gram, HyperplaneIsSumOfLinesInAPlane) {
  // The plane x0 = zeta_a x1 cuts the surface in the m lines F0(a, b).
  for (std::int64_t m = 3; m <= 6; ++m) {
    auto lines = ceva::enumerate_lines(m);
    for (const auto& x : lines) {
      std::int64_t s = 0;
      for (std::int64_t b = 0; b < m; ++b) s += ceva::intersection(x, Line{0, 1, b}, m);
      EXPECT_EQ(s, 1);
    }
  }
}

TEST(Gram, InvariantUnderSurfaceAutomorphisms) {
  for (std::int64_t m = 3; m <= 5; ++m) {
    auto g = ceva::gram_matrix(m).gram;
    auto lines = ceva::enumerate_lines(m);
    const std::size_t h = lines.size();
    auto check = [&](const std::function<Line(const Line&)>& f) {
      std::vector<std::size_t> img(h + 1, h);
      for (std::size_t i = 0; i < h; ++i) img[i] = ceva::line_index(f(lines[i]), m);
      std::vector<std::size_t> sorted = img;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::size_t> expect(h + 1);
      std::iota(expect.begin(), expect.end(), 0);
      ASSERT_EQ(sorted, expect);
      for (std::size_t i = 0; i <= h; ++i) {
        for (std::size_t j = 0; j <= h; ++j) ASSERT_EQ(g.get(img[i], img[j]), g.get(i, j));
      }
    };
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
      check([&](const Line& l) {
        auto es = edges_of(l);
        for (auto& e : es) e = {perm[static_cast<std::size_t>(e.p)], perm[static_cast<std::size_t>(e.q)], e.e};
        return line_of(es, m);
      });
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < 4; ++k) {
      // x_k -> omega x_k with omega = zeta^2.
      check([&](const Line& l) {
        auto es = edges_of(l);
        for (auto& e : es) e.e += 2 * ((e.p == k ? 1 : 0) - (e.q == k ? 1 : 0));
        return line_of(es, m);
      });
    }
  }
}

TEST(Lattice, RankFormula) {
  for (std::int64_t m = 3; m <= 8; ++m) {
    const auto d = m % 2 == 0 ? 1 : 0;
    EXPECT_EQ(static_cast<std::int64_t>(ceva::rank_S(m)), 3 * (m - 1) * (m - 2) + 1 + d) << "m=" << m;
    EXPECT_EQ(ceva::rank_S(m) + ceva::rank_K(m), static_cast<std::size_t>(3 * m * m + 1));
  }
}

TEST(Lattice, CubicDiscriminantFromUnimodularSubset) {
  // Any 7 classes with Gram determinant +-1 span the rank-7 lattice, so that
  // determinant is the discriminant.
  auto g = ceva::gram_matrix(3).gram.to_dense();
  std::mt19937_64 rng(31);
  std::vector<std::size_t> idx(g.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    std::shuffle(idx.begin(), idx.end(), rng);
    oracle::Dense sub = oracle::zeros(7, 7);
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 7; ++j) sub[i][j] = g[idx[i]][idx[j]];
    }
    auto d = oracle::det_cofactor(sub);
    if (abs(d).is_one()) {
      EXPECT_EQ(ceva::discriminant_S(3).value, d);
      return;
    }
  }
  FAIL() << "no unimodular subset found";
}

TEST(Lattice, DiscriminantTimesSquareIndex) {
  // For any full-rank set of classes M, det Gram(M) = disc * [S : M]^2.
  for (std::int64_t m = 4; m <= 5; ++m) {
    auto disc = ceva::discriminant_S(m);
    auto g = ceva::gram_matrix(m).gram;
    auto dense = g.to_dense();
    const std::size_t r = ceva::rank_S(m);
    std::mt19937_64 rng(static_cast<std::uint64_t>(m));
    std::vector<std::size_t> idx(dense.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(idx.begin(), idx.end(), rng);
      std::vector<std::size_t> chosen;
      for (auto i : idx) {
        chosen.push_back(i);
        oracle::Dense rows;
        for (auto c : chosen) rows.push_back(dense[c]);
        if (ceva::modular_rank(oracle::to_matrix(rows, dense.size()), 1000000007) < chosen.size()) chosen.pop_back();
        if (chosen.size() == r) break;
      }
      ASSERT_EQ(chosen.size(), r);
      oracle::Dense sub = oracle::zeros(r, r);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) sub[i][j] = dense[chosen[i]][chosen[j]];
      }
      auto d = ceva::determinant(oracle::to_matrix(sub, r));
      ASSERT_TRUE(divides(disc.value, d));
      auto q = exact_div(d, disc.value);
      ASSERT_GT(q.sign(), 0);
      mpz_class root = sqrt(q.to_mpz());
      EXPECT_EQ(root * root, q.to_mpz());
    }
  }
}

TEST(Lattice, DiscriminantValues) {
  EXPECT_EQ(ceva::discriminant_S(3).value, ceva::Integer(1));
  EXPECT_EQ(ceva::discriminant_S(4).value, ceva::Integer(-64));
  EXPECT_EQ(ceva::discriminant_S(5).value, ceva::Integer(244140625));
  auto d6 = ceva::discriminant_S(6);
  EXPECT_EQ(abs(d6.value), d6.invariant_product);
}

TEST(Export, LinesCsv) {
  std::ostringstream os;
  ceva::write_lines_csv(os, 3);
  auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "family,eps,eps_prime");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 28);
}
