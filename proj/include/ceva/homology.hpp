#pragma once

// Abelian-group answers for module presentations: cokernels, subgroups,
// quotients, ranks over C via characters, and H1 of covering complements.

#include "ceva/alexander.hpp"
#include "ceva/modular.hpp"
#include "ceva/normal_forms.hpp"
#include "ceva/runtime.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceva {

/// Subgroup of the cokernel of P generated by all G-translates of `elements`.
inline FPAbelianGroup subgroup_of_cokernel(const ModulePresentation& p, const std::vector<ModuleElement>& elements,
                                           const SnfOptions& opt = {}) {
  return subgroup_of_cokernel(flatten(p), flatten_elements(p, elements), opt);
}

inline FPAbelianGroup fp_group(const ModulePresentation& p, const SnfOptions& opt = {}) {
  if (!p.subgroup_generators.empty()) return subgroup_of_cokernel(p, p.subgroup_generators, opt);
  return cokernel_group(flatten(p), opt);
}

inline ModulePresentation quotient_by_elements(const ModulePresentation& p, const std::vector<ModuleElement>& elements,
                                               const std::string& tag = "quotient") {
  ModulePresentation q = p;
  for (const auto& e : elements) q.add_relation(e, tag);
  return q;
}

namespace detail {

inline std::size_t dense_rank_mod_p(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
  std::size_t rank = 0;
  const std::size_t nr = a.size();
  const std::size_t nc = nr == 0 ? 0 : a[0].size();
  for (std::size_t c = 0; c < nc && rank < nr; ++c) {
    std::size_t piv = rank;
    while (piv < nr && a[piv][c] == 0) ++piv;
    if (piv == nr) continue;
    std::swap(a[piv], a[rank]);
    std::uint64_t inv = invmod(a[rank][c], p);
    for (std::size_t i = rank + 1; i < nr; ++i) {
      if (a[i][c] == 0) continue;
      std::uint64_t f = mulmod(a[i][c], inv, p);
      for (std::size_t j = c; j < nc; ++j) a[i][j] = submod(a[i][j], mulmod(f, a[rank][j], p), p);
    }
    ++rank;
  }
  return rank;
}

/// Rank over C of the chi-isotypic part, computed in F_p with zeta of order N.
inline std::size_t isotypic_rank(const ModulePresentation& p, const Character& chi, std::uint64_t prime,
                                 const std::vector<std::uint64_t>& zeta_powers) {
  const auto& g = p.group();
  auto specialize = [&](const GroupRingElem& x) {
    std::uint64_t s = 0;
    for (const auto& [e, c] : x.terms()) {
      std::uint64_t cm = Integer(c).mod_u64(prime);
      s = addmod(s, mulmod(cm, zeta_powers[chi.evaluate(g, e)], prime), prime);
    }
    return s;
  };
  auto rows_of = [&](const std::vector<ModuleElement>& elems) {
    std::vector<std::vector<std::uint64_t>> rows;
    for (const auto& v : elems) {
      std::vector<std::uint64_t> r(p.num_generators());
      for (std::size_t k = 0; k < v.size(); ++k) r[k] = specialize(v[k]);
      rows.push_back(std::move(r));
    }
    return rows;
  };
  std::vector<ModuleElement> rels;
  for (const auto& r : p.relations) rels.push_back(r.coeffs);
  auto rr = rows_of(rels);
  std::size_t rank_r = dense_rank_mod_p(rr, prime);
  if (p.subgroup_generators.empty()) return p.num_generators() - rank_r;
  auto ru = rows_of(p.subgroup_generators);
  rr.insert(rr.end(), ru.begin(), ru.end());
  return dense_rank_mod_p(rr, prime) - rank_r;
}

inline std::size_t rank_via_characters_at(const ModulePresentation& p, std::uint64_t prime, std::uint64_t zeta,
                                          std::size_t jobs) {
  auto chars = characters(p.group());
  const std::uint64_t n = chars.empty() ? 1 : chars.front().order;
  std::vector<std::uint64_t> zeta_powers(n);
  std::uint64_t w = 1;
  for (std::uint64_t k = 0; k < n; ++k) {
    zeta_powers[k] = w;
    w = mulmod(w, zeta, prime);
  }
  std::vector<std::size_t> slots(chars.size(), 0);
  parallel_for(chars.size(), jobs, [&](std::size_t i) {
    check_deadline();
    slots[i] = isotypic_rank(p, chars[i], prime, zeta_powers);
  });
  std::size_t total = 0;
  for (auto s : slots) total += s;
  return total;
}

}  // namespace detail

/// Rank of the module (or of its designated subgroup) as sum over characters
/// of the dimensions of the isotypic parts, evaluated exactly in a prime field.
/// Two random primes p == 1 (mod exponent) must agree; a third breaks a tie.
inline std::size_t rank_via_characters(const ModulePresentation& p, std::size_t jobs = 1, std::uint64_t seed = 0x5eed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::uint64_t>(p.group().exponent());
  std::vector<std::size_t> seen;
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::uint64_t prime = random_prime_congruent_one(n, rng);
    std::uint64_t zeta = primitive_root_of_unity(n, prime, rng);
    std::size_t r = detail::rank_via_characters_at(p, prime, zeta, jobs);
    for (auto s : seen) {
      if (s == r) return r;
    }
    seen.push_back(r);
  }
  throw VerificationError("rank_via_characters: three primes gave three different ranks");
}

/// H1 of the covering complement: the kernel of the boundary map inside the
/// module. By exactness of H1 -> A -> Z[G] -> Z -> 0 its rank is
/// rank A - |G| + 1 and its torsion is that of A.
inline FPAbelianGroup h1_of_complement(const ModulePresentation& p, const SnfOptions& opt = {}) {
  if (!p.boundary) throw std::invalid_argument("h1_of_complement: presentation carries no boundary map");
  auto a = fp_group(p, opt);
  const std::size_t n = p.group().order();
  if (a.rank + 1 < n) throw VerificationError("h1_of_complement: module rank smaller than |G| - 1");
  FPAbelianGroup h;
  h.rank = a.rank + 1 - n;
  h.torsion = a.torsion;
  return h;
}

/// The same group computed directly: the Z-kernel of the flattened boundary,
/// pushed into the cokernel of the relation matrix.
inline FPAbelianGroup h1_by_kernel(const ModulePresentation& p, const SnfOptions& opt = {}) {
  auto d = flatten_boundary(p);
  return subgroup_of_cokernel(flatten(p), kernel_basis(d), opt);
}

/// Rank of the image of the boundary map in Z[G].
inline std::size_t boundary_image_rank(const ModulePresentation& p) {
  auto d = flatten_boundary(p);
  SnfOptions opt;
  opt.verify = false;
  return snf(d, opt).size();
}

}  // namespace ceva
