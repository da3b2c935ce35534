#pragma once

// Module presentations over Z[G] for the coverings of the Ceva arrangement
// complement, and their flattening to integer matrices.
//
// Default generators are a1, a2, a3 (mapped by the boundary to t_i - 1) and
// c1, c2, c3 (boundary zero).

#include "ceva/group_ring.hpp"
#include "ceva/int_matrix.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ceva {

using ModuleElement = std::vector<GroupRingElem>;  // one coordinate per generator

struct Relation {
  ModuleElement coeffs;
  std::string tag;
};

struct BoundaryMap {
  std::vector<GroupRingElem> targets;  // per generator
};

struct ModulePresentation {
  Epimorphism epimorphism;
  std::vector<std::string> generators;
  std::vector<Relation> relations;
  std::optional<BoundaryMap> boundary;
  /// When non-empty, the module is the subgroup of the cokernel generated by
  /// the G-translates of these elements rather than the whole cokernel.
  std::vector<ModuleElement> subgroup_generators;

  [[nodiscard]] const FiniteAbelianGroup& group() const { return epimorphism.group(); }
  [[nodiscard]] std::size_t num_generators() const { return generators.size(); }

  [[nodiscard]] std::size_t generator_index(const std::string& name) const {
    for (std::size_t k = 0; k < generators.size(); ++k) {
      if (generators[k] == name) return k;
    }
    throw std::invalid_argument("unknown generator '" + name + "'");
  }

  [[nodiscard]] ModuleElement zero_element() const {
    return ModuleElement(generators.size(), GroupRingElem::zero(group()));
  }

  /// coeff * (generator `name`).
  [[nodiscard]] ModuleElement element(const std::string& name, const GroupRingElem& coeff) const {
    auto v = zero_element();
    v[generator_index(name)] = coeff;
    return v;
  }
  [[nodiscard]] ModuleElement element(const std::string& name) const {
    return element(name, GroupRingElem::one(group()));
  }

  void add_relation(ModuleElement coeffs, std::string tag) {
    if (coeffs.size() != generators.size()) throw std::invalid_argument("relation has the wrong number of coordinates");
    relations.push_back({std::move(coeffs), std::move(tag)});
  }
};

inline ModuleElement scale(const GroupRingElem& f, const ModuleElement& v) {
  ModuleElement out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(f * x);
  return out;
}

inline ModuleElement add(const ModuleElement& a, const ModuleElement& b) {
  if (a.size() != b.size()) throw std::invalid_argument("module elements of different length");
  ModuleElement out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += b[k];
  return out;
}

inline const std::vector<std::string>& default_generators() {
  static const std::vector<std::string> names{"a1", "a2", "a3", "c1", "c2", "c3"};
  return names;
}

/// The six relation vectors of A(alpha), in the fixed order b1, a1, b2, a2, b3, a3.
inline std::vector<Relation> universal_relations(const Epimorphism& alpha) {
  const auto& g = alpha.group();
  auto one = GroupRingElem::one(g);
  auto zero = GroupRingElem::zero(g);
  auto t1 = variable(alpha, 1), t2 = variable(alpha, 2), t3 = variable(alpha, 3);
  auto rel = [&](GroupRingElem a1, GroupRingElem a2, GroupRingElem a3, GroupRingElem c1, GroupRingElem c2,
                 GroupRingElem c3, std::string tag) {
    return Relation{{std::move(a1), std::move(a2), std::move(a3), std::move(c1), std::move(c2), std::move(c3)},
                    std::move(tag)};
  };
  std::vector<Relation> out;
  out.push_back(rel(zero, zero, zero, t2 * t3 - one, zero, zero, "b1"));
  out.push_back(rel(zero, t3 - one, -(t2 - one), t3 - one, zero, zero, "a1"));
  out.push_back(rel(zero, zero, zero, zero, t1 * t3 - one, zero, "b2"));
  out.push_back(rel(t3 - one, zero, -(t1 - one), zero, t3 - one, zero, "a2"));
  out.push_back(rel(zero, zero, zero, zero, zero, t1 * t2 - one, "b3"));
  out.push_back(rel(-(t2 - one), t1 - one, zero, zero, zero, t1 - one, "a3"));
  return out;
}

/// a_i -> t_i - 1, c_j -> 0.
inline BoundaryMap standard_boundary(const Epimorphism& alpha) {
  BoundaryMap d;
  auto one = GroupRingElem::one(alpha.group());
  for (std::size_t i = 1; i <= 3; ++i) d.targets.push_back(variable(alpha, i) - one);
  for (std::size_t j = 0; j < 3; ++j) d.targets.push_back(GroupRingElem::zero(alpha.group()));
  return d;
}

inline ModulePresentation build_A(const Epimorphism& alpha) {
  ModulePresentation p{alpha, default_generators(), universal_relations(alpha), standard_boundary(alpha), {}};
  return p;
}

inline ModulePresentation build_tilde_A(std::int64_t m) {
  auto alpha = Epimorphism::fermat(m);
  auto p = build_A(alpha);
  for (std::size_t i = 1; i <= 3; ++i) {
    p.add_relation(p.element("a" + std::to_string(i), phi(alpha, m, i)), "phi_m(t" + std::to_string(i) + ")a" + std::to_string(i));
  }
  return p;
}

inline ModulePresentation build_tilde_A_prime(std::int64_t m) {
  auto p = build_tilde_A(m);
  p.add_relation(p.element("c2"), "c2=0");
  p.add_relation(p.element("c3"), "c3=0");
  return p;
}

/// The submodule of A(alpha) generated by c1, c2, c3.
inline ModulePresentation build_B(const Epimorphism& alpha) {
  auto p = build_A(alpha);
  p.boundary.reset();
  p.subgroup_generators = {p.element("c1"), p.element("c2"), p.element("c3")};
  return p;
}

/// B[m] on the generators c1, c2, c3: each c_k is killed by its own
/// annihilator t_i t_j - 1, and the three are tied by the single relation
/// (t1-1)(t3-1)c1 = (t2-1)(t3-1)c2 + (t1-1)(t3-1)c3.
inline ModulePresentation build_B_onerelator(std::int64_t m) {
  auto alpha = Epimorphism::fermat(m);
  const auto& g = alpha.group();
  auto one = GroupRingElem::one(g);
  auto t1 = variable(alpha, 1), t2 = variable(alpha, 2), t3 = variable(alpha, 3);
  ModulePresentation p{alpha, {"c1", "c2", "c3"}, {}, std::nullopt, {}};
  p.add_relation(p.element("c1", t2 * t3 - one), "b1");
  p.add_relation(p.element("c2", t1 * t3 - one), "b2");
  p.add_relation(p.element("c3", t1 * t2 - one), "b3");
  ModuleElement r{(t1 - one) * (t3 - one), -((t2 - one) * (t3 - one)), -((t1 - one) * (t3 - one))};
  p.add_relation(std::move(r), "single");
  return p;
}

/// Flattened Z-matrix of the given module elements: one column per G-translate
/// of each element (translates in group enumeration order); the Z-generator
/// of (generator k, group element h) is row k*|G| + h.
inline IntMatrix flatten_elements(const ModulePresentation& p, const std::vector<ModuleElement>& elems) {
  const std::size_t n = p.group().order();
  const auto& g = p.group();
  IntMatrix out(p.num_generators() * n, 0);
  for (const auto& v : elems) {
    if (v.size() != p.num_generators()) throw std::invalid_argument("module element has the wrong number of coordinates");
    for (ElementIndex s = 0; s < n; ++s) {
      IntMatrix::Column col;
      for (std::size_t k = 0; k < v.size(); ++k) {
        for (const auto& [h, c] : v[k].terms()) col.emplace_back(k * n + g.add(h, s), Integer(c));
      }
      out.append_column(col);
    }
  }
  return out;
}

inline IntMatrix flatten(const ModulePresentation& p) {
  std::vector<ModuleElement> rels;
  rels.reserve(p.relations.size());
  for (const auto& r : p.relations) rels.push_back(r.coeffs);
  return flatten_elements(p, rels);
}

/// Sum over generators of r_k * d(g_k) for a relation vector r.
inline GroupRingElem apply_boundary(const ModulePresentation& p, const ModuleElement& r) {
  if (!p.boundary) throw std::invalid_argument("presentation carries no boundary map");
  GroupRingElem s = GroupRingElem::zero(p.group());
  for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * p.boundary->targets[k];
  return s;
}

/// Flattened boundary Z^(n|G|) -> Z[G]: column k*|G| + h is h * d(g_k).
inline IntMatrix flatten_boundary(const ModulePresentation& p) {
  if (!p.boundary) throw std::invalid_argument("presentation carries no boundary map");
  const std::size_t n = p.group().order();
  IntMatrix out(n, 0);
  for (const auto& target : p.boundary->targets) {
    for (ElementIndex h = 0; h < n; ++h) {
      IntMatrix::Column col;
      const auto shifted = target.translate(h);
      for (const auto& [e, c] : shifted.terms()) col.emplace_back(e, Integer(c));
      out.append_column(col);
    }
  }
  return out;
}

/// JSON description accompanying an exported matrix.
inline nlohmann::ordered_json presentation_sidecar(const ModulePresentation& p) {
  nlohmann::ordered_json j;
  j["group_moduli"] = p.epimorphism.user_group().moduli();
  j["smith_moduli"] = p.group().moduli();
  j["images"] = p.epimorphism.user_images();
  j["generators"] = p.generators;
  j["group_order"] = p.group().order();
  j["row_order"] = "generator-major: row = generator_index * group_order + element_index";
  j["column_order"] = "relation-major: column = relation_index * group_order + translate_index";
  auto rels = nlohmann::ordered_json::array();
  for (const auto& r : p.relations) {
    nlohmann::ordered_json e;
    e["tag"] = r.tag;
    auto coeffs = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
      if (!r.coeffs[k].is_zero()) coeffs[p.generators[k]] = r.coeffs[k].str();
    }
    e["coefficients"] = coeffs;
    rels.push_back(e);
  }
  j["relations"] = rels;
  return j;
}

}  // namespace ceva
