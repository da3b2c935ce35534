#pragma once

// Abelian coverings of the plane branched over the four lines of the Ceva
// arrangement: H1 of the covering surface, the unramified-line case, and a
// batch search over epimorphisms up to symmetry.

#include "ceva/check.hpp"
#include "ceva/homology.hpp"
#include "ceva/runtime.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ceva {

struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// gamma_j in the coordinates (gamma_1, gamma_2, gamma_3); gamma_0 = -(gamma_1 + gamma_2 + gamma_3).
inline std::vector<Integer> gamma_vector(std::size_t j) {
  if (j == 0) return {Integer(-1), Integer(-1), Integer(-1)};
  std::vector<Integer> v(3);
  v.at(j - 1) = Integer(1);
  return v;
}

/// Basis (columns) of Ker alpha inside Z^3.
inline IntMatrix kernel_of_epimorphism(const Epimorphism& alpha) {
  const auto& g = alpha.group();
  const std::size_t r = g.rank();
  if (r == 0) return IntMatrix::identity(3);
  IntMatrix m(r, 3 + r);
  for (std::size_t j = 0; j < 3; ++j) {
    auto x = g.element(alpha.image(j + 1));
    for (std::size_t i = 0; i < r; ++i) m.set(i, j, Integer(x[i]));
  }
  for (std::size_t i = 0; i < r; ++i) m.set(i, 3 + i, Integer(g.moduli()[i]));
  auto k = kernel_basis(m);
  IntMatrix proj(3, k.cols());
  for (const auto& [idx, v] : k.entries()) {
    if (idx.first < 3) proj.set(idx.first, idx.second, v);
  }
  return hnf(proj);
}

/// H1 of the covering surface: Ker alpha modulo the sum over 0 <= i, j <= 3 of
/// (Z gamma_i + Z gamma_j) intersected with Ker alpha.
inline FPAbelianGroup h1_of_covering(const Epimorphism& alpha) {
  IntMatrix ker = kernel_of_epimorphism(alpha);
  IntMatrix sum(3, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      std::vector<std::vector<Integer>> cols{gamma_vector(i)};
      if (j != i) cols.push_back(gamma_vector(j));
      sum = sum.hcat(lattice_intersect(ker, IntMatrix::from_columns(3, cols)));
    }
  }
  return subgroup_of_cokernel(sum, ker);
}

struct ToyReport {
  Epimorphism relabeled;
  std::size_t vanishing_index = 0;  // j with alpha(gamma_j) = 0, before relabeling
  FPAbelianGroup h1;
  FPAbelianGroup module_A;
  FPAbelianGroup module_B;
  std::size_t expected_rank_B = 0;
  std::vector<Check> checks;
};

/// Checks the case where alpha vanishes on some gamma_j: trivial H1, no
/// torsion in A(alpha) and B(alpha), and the rank of B(alpha) as the sum of
/// the indices of the cyclic subgroups generated by alpha(gamma_2),
/// alpha(gamma_1) and alpha(gamma_1 + gamma_2) (after moving gamma_j to slot 3).
inline ToyReport verify_toy(const Epimorphism& alpha, const SnfOptions& opt = {}) {
  std::size_t j = 4;
  for (std::size_t i = 0; i < 4 && j == 4; ++i) {
    if (alpha.image(i) == 0) j = i;
  }
  if (j == 4) throw PreconditionViolated("verify_toy: alpha does not vanish on any gamma_j");
  std::array<int, 4> perm{};
  int pos = 0;
  for (int i = 0; i < 4; ++i) {
    if (static_cast<std::size_t>(i) != j) perm[static_cast<std::size_t>(pos++)] = i;
  }
  perm[3] = static_cast<int>(j);
  Epimorphism beta = alpha.relabeled(perm);
  const auto& g = beta.group();
  const std::size_t n = g.order();
  auto idx = [&](ElementIndex x) { return n / static_cast<std::size_t>(g.order_of(x)); };
  std::size_t expected = idx(beta.image(2)) + idx(beta.image(1)) + idx(g.add(beta.image(1), beta.image(2)));
  ToyReport rep{beta, j, h1_of_covering(beta), fp_group(build_A(beta), opt), fp_group(build_B(beta), opt), expected, {}};
  rep.checks.push_back(make_check("H1 of the covering is trivial", to_json(FPAbelianGroup{}), to_json(rep.h1)));
  rep.checks.push_back(make_check("Tors A(alpha) = 0", nlohmann::ordered_json::array(), to_json(rep.module_A)["torsion"]));
  rep.checks.push_back(make_check("Tors B(alpha) = 0", nlohmann::ordered_json::array(), to_json(rep.module_B)["torsion"]));
  rep.checks.push_back(make_check("rank B(alpha)", expected, rep.module_B.rank));
  return rep;
}

// ---------------------------------------------------------------------------
// Search over epimorphisms.

enum class SearchFamily { cyclic, all };

/// Abelian groups in Smith form with 2 <= order <= max_order and rank <= 3.
inline std::vector<FiniteAbelianGroup> groups_up_to(SearchFamily family, std::int64_t max_order) {
  std::vector<std::vector<std::int64_t>> found;
  std::function<void(std::vector<std::int64_t>&, std::int64_t)> rec = [&](std::vector<std::int64_t>& d, std::int64_t order) {
    if (!d.empty()) found.push_back(d);
    if (d.size() == (family == SearchFamily::cyclic ? 1U : 3U)) return;
    const std::int64_t step = d.empty() ? 1 : d.back();
    for (std::int64_t next = d.empty() ? 2 : d.back(); order * next <= max_order; next += step) {
      d.push_back(next);
      rec(d, order * next);
      d.pop_back();
    }
  };
  std::vector<std::int64_t> d;
  rec(d, 1);
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    std::int64_t oa = 1, ob = 1;
    for (auto x : a) oa *= x;
    for (auto x : b) ob *= x;
    return oa != ob ? oa < ob : a < b;
  });
  std::vector<FiniteAbelianGroup> out;
  for (auto& m : found) out.emplace_back(m);
  return out;
}

/// All automorphisms of a group in Smith form, each as the images of the
/// Smith generators.
inline std::vector<std::vector<ElementIndex>> automorphisms(const FiniteAbelianGroup& g) {
  const std::size_t r = g.rank();
  const auto n = static_cast<ElementIndex>(g.order());
  std::vector<std::vector<ElementIndex>> out;
  std::vector<ElementIndex> imgs(r, 0);
  // Candidate images for generator i: elements whose order divides d_i.
  std::vector<std::vector<ElementIndex>> cand(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (ElementIndex x = 0; x < n; ++x) {
      if (g.moduli()[i] % g.order_of(x) == 0) cand[i].push_back(x);
    }
  }
  auto apply = [&](ElementIndex x) {
    auto v = g.element(x);
    ElementIndex y = 0;
    for (std::size_t i = 0; i < r; ++i) y = g.add(y, g.scale(imgs[i], v[i]));
    return y;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == r) {
      std::vector<char> hit(n, 0);
      for (ElementIndex x = 0; x < n; ++x) {
        auto y = apply(x);
        if (hit[y]) return;
        hit[y] = 1;
      }
      out.push_back(imgs);
      return;
    }
    for (auto x : cand[i]) {
      imgs[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline ElementIndex apply_automorphism(const FiniteAbelianGroup& g, const std::vector<ElementIndex>& aut, ElementIndex x) {
  auto v = g.element(x);
  ElementIndex y = 0;
  for (std::size_t i = 0; i < v.size(); ++i) y = g.add(y, g.scale(aut[i], v[i]));
  return y;
}

using ImageTriple = std::array<ElementIndex, 3>;

inline bool generates(const FiniteAbelianGroup& g, const ImageTriple& t) {
  std::vector<char> seen(g.order(), 0);
  std::vector<ElementIndex> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (auto s : t) {
      auto y = g.add(x, s);
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

/// Surjective image triples (alpha(gamma_1), alpha(gamma_2), alpha(gamma_3)) in
/// lexicographic order; with `reduce`, only the lexicographically least triple
/// of each orbit under relabeling of gamma_0..gamma_3 and Aut(G).
inline std::vector<ImageTriple> epimorphism_classes(const FiniteAbelianGroup& g, bool reduce = true) {
  const auto n = static_cast<ElementIndex>(g.order());
  auto auts = reduce ? automorphisms(g) : std::vector<std::vector<ElementIndex>>{};
  std::array<int, 4> perm{0, 1, 2, 3};
  std::vector<std::array<int, 4>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  auto encode = [&](const ImageTriple& t) { return (static_cast<std::uint64_t>(t[0]) * n + t[1]) * n + t[2]; };
  std::unordered_set<std::uint64_t> marked;
  std::vector<ImageTriple> out;
  for (ElementIndex a = 0; a < n; ++a) {
    for (ElementIndex b = 0; b < n; ++b) {
      for (ElementIndex c = 0; c < n; ++c) {
        check_deadline();
        ImageTriple t{a, b, c};
        if (reduce && marked.contains(encode(t))) continue;
        if (!generates(g, t)) continue;
        out.push_back(t);
        if (!reduce) continue;
        std::array<ElementIndex, 4> four{g.neg(g.add(a, g.add(b, c))), a, b, c};
        for (const auto& p : perms) {
          for (const auto& aut : auts) {
            ImageTriple u{};
            for (std::size_t i = 0; i < 3; ++i) u[i] = apply_automorphism(g, aut, four[static_cast<std::size_t>(p[i + 1])]);
            marked.insert(encode(u));
          }
        }
      }
    }
  }
  return out;
}

struct SearchRow {
  std::vector<std::int64_t> group_moduli;
  std::array<ExponentVector, 3> images;
  FPAbelianGroup h1;
  FPAbelianGroup module_A;
  FPAbelianGroup module_B;
  double elapsed_ms = 0;

  [[nodiscard]] bool applicable() const { return h1.is_trivial(); }

  [[nodiscard]] std::string key() const {
    nlohmann::json k{group_moduli, images};
    return k.dump();
  }

  [[nodiscard]] nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["group_moduli"] = group_moduli;
    j["images"] = images;
    j["h1"] = ceva::to_json(h1);
    auto tors = nlohmann::ordered_json::array();
    for (const auto& d : module_A.torsion) tors.push_back(d.str());
    j["tors"] = tors;
    j["tors_interpretation"] = applicable() ? "applicable" : "not_applicable";
    auto tors_b = nlohmann::ordered_json::array();
    for (const auto& d : module_B.torsion) tors_b.push_back(d.str());
    j["tors_B"] = tors_b;
    j["rank_A"] = module_A.rank;
    j["elapsed_ms"] = elapsed_ms;
    return j;
  }
};

inline SearchRow evaluate_class(const FiniteAbelianGroup& g, const ImageTriple& t, const SnfOptions& opt = {}) {
  auto start = std::chrono::steady_clock::now();
  std::array<ExponentVector, 3> imgs{g.element(t[0]), g.element(t[1]), g.element(t[2])};
  Epimorphism alpha(g.moduli(), imgs);
  SearchRow row;
  row.group_moduli = g.moduli();
  row.images = imgs;
  row.h1 = h1_of_covering(alpha);
  row.module_A = fp_group(build_A(alpha), opt);
  row.module_B = fp_group(build_B(alpha), opt);
  row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

struct SearchOptions {
  SearchFamily family = SearchFamily::cyclic;
  std::int64_t max_order = 2;
  bool full_enumeration = false;  // skip symmetry reduction
  std::size_t jobs = 1;
  std::filesystem::path out;       // JSONL rows; empty = keep in memory only
  SnfOptions snf;
};

struct SearchSummary {
  std::size_t classes = 0;
  std::size_t evaluated = 0;
  std::size_t resumed = 0;  // skipped because already in the index
  std::size_t torsion_hits = 0;  // classes with trivial H1 and torsion in A(alpha)
  std::vector<SearchRow> rows;  // rows evaluated in this run, in enumeration order
};

/// Path of the completed-classes index that accompanies a JSONL result file.
inline std::filesystem::path index_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".index");
}

/// Enumerates epimorphism classes and evaluates each. Rows are appended to
/// `out` (one JSON object per line) in enumeration order, and the key of each
/// finished class to the index file, so an interrupted run can be resumed.
inline SearchSummary search(const SearchOptions& opt) {
  if (opt.max_order < 2) throw std::invalid_argument("search: max_order must be >= 2");
  std::set<std::string> done;
  std::ofstream rows_out, index_out;
  if (!opt.out.empty()) {
    std::ifstream idx(index_path(opt.out));
    for (std::string line; std::getline(idx, line);) {
      if (!line.empty()) done.insert(line);
    }
    rows_out.open(opt.out, std::ios::app);
    index_out.open(index_path(opt.out), std::ios::app);
    if (!rows_out || !index_out) throw std::runtime_error("search: cannot open " + opt.out.string());
  }
  SearchSummary summary;
  struct Task {
    FiniteAbelianGroup g;
    ImageTriple t;
  };
  std::vector<Task> tasks;
  for (const auto& g : groups_up_to(opt.family, opt.max_order)) {
    for (const auto& t : epimorphism_classes(g, !opt.full_enumeration)) {
      ++summary.classes;
      SearchRow probe;
      probe.group_moduli = g.moduli();
      probe.images = {g.element(t[0]), g.element(t[1]), g.element(t[2])};
      if (done.contains(probe.key())) {
        ++summary.resumed;
        continue;
      }
      tasks.push_back({g, t});
    }
  }
  const std::size_t batch = std::max<std::size_t>(1, opt.jobs) * 4;
  for (std::size_t start = 0; start < tasks.size(); start += batch) {
    const std::size_t len = std::min(batch, tasks.size() - start);
    std::vector<SearchRow> slots(len);
    parallel_for(len, opt.jobs, [&](std::size_t i) {
      check_deadline();
      slots[i] = evaluate_class(tasks[start + i].g, tasks[start + i].t, opt.snf);
    });
    for (auto& row : slots) {
      if (row.applicable() && !row.module_A.is_free()) ++summary.torsion_hits;
      if (rows_out.is_open()) {
        rows_out << row.to_json().dump() << '\n';
        rows_out.flush();
        index_out << row.key() << '\n';
        index_out.flush();
      }
      ++summary.evaluated;
      summary.rows.push_back(std::move(row));
    }
  }
  return summary;
}

}  // namespace ceva
