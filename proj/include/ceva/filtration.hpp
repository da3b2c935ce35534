#pragma once

// The seven-step filtration 0 = A0 < A1 < ... < A7 = A~[m] and the lengths of
// its successive quotients.

#include "ceva/check.hpp"
#include "ceva/homology.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ceva {

inline std::int64_t delta(std::int64_t m) { return m % 2 == 0 ? 1 : 0; }

/// Laurent polynomial in one variable with integer coefficients.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly monomial(std::int64_t exponent, Integer c = Integer(1)) {
    LaurentPoly p;
    p.add_term(exponent, c);
    return p;
  }

  void add_term(std::int64_t e, const Integer& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  [[nodiscard]] const std::map<std::int64_t, Integer>& terms() const { return terms_; }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
    return a;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [e, c] : a.terms_) {
      for (const auto& [f, d] : b.terms_) out.add_term(e + f, c * d);
    }
    return out;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

 private:
  std::map<std::int64_t, Integer> terms_;
};

/// phi_r(t^step) = 1 + t^step + ... + t^(step*(r-1)); phi_0 = 0.
inline LaurentPoly phi_poly(std::int64_t r, std::int64_t step = 1) {
  LaurentPoly p;
  for (std::int64_t i = 0; i < r; ++i) p.add_term(i * step, Integer(1));
  return p;
}

/// Both sides of
///   t^(m-2) * sum_{r=0}^{m-1} t^(1-r) phi_r(t^2) = t phi_{k-1}(t^2) phi_m(t) + phi_k(t^2),  m = 2k.
inline std::pair<LaurentPoly, LaurentPoly> even_degree_identity(std::int64_t m) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("even_degree_identity: m must be even and >= 2");
  const std::int64_t k = m / 2;
  LaurentPoly sum;
  for (std::int64_t r = 0; r < m; ++r) sum = sum + LaurentPoly::monomial(1 - r) * phi_poly(r, 2);
  LaurentPoly lhs = LaurentPoly::monomial(m - 2) * sum;
  LaurentPoly rhs = LaurentPoly::monomial(1) * phi_poly(k - 1, 2) * phi_poly(m) + phi_poly(k, 2);
  return {lhs, rhs};
}

struct FiltrationStep {
  int index = 0;
  std::vector<std::string> labels;  // human-readable new elements
  std::vector<ModuleElement> new_elements;
  std::int64_t expected_length = 0;
};

/// Expected quotient lengths l(A_k / A_{k-1}), k = 1..7.
inline std::array<std::int64_t, 7> expected_quotient_lengths(std::int64_t m) {
  return {m * m * m - m * m, 3 * (m - 1) - delta(m), 3 * (m - 1), m * m - m, m - 1, m - 1, 2 * m + 1};
}

inline std::vector<FiltrationStep> filtration_steps(const ModulePresentation& p, std::int64_t m) {
  const auto& alpha = p.epimorphism;
  auto one = GroupRingElem::one(alpha.group());
  auto s1 = variable(alpha, 1) - one;  // t1 - 1
  auto s3 = variable(alpha, 3) - one;  // t3 - 1
  auto exp = expected_quotient_lengths(m);
  std::vector<FiltrationStep> steps(7);
  for (int k = 0; k < 7; ++k) {
    steps[k].index = k + 1;
    steps[k].expected_length = exp[k];
  }
  steps[0].labels = {"a3"};
  steps[0].new_elements = {p.element("a3")};
  steps[1].labels = {"(t1-1)(t3-1)a2", "(t1-1)(t3-1)c3"};
  steps[1].new_elements = {p.element("a2", s1 * s3), p.element("c3", s1 * s3)};
  for (const auto& g : p.generators) {
    steps[2].labels.push_back("(t3-1)" + g);
    steps[2].new_elements.push_back(p.element(g, s3));
  }
  steps[3].labels = {"a1"};
  steps[3].new_elements = {p.element("a1")};
  steps[4].labels = {"(t1-1)a2", "(t1-1)c3"};
  steps[4].new_elements = {p.element("a2", s1), p.element("c3", s1)};
  steps[5].labels = {"a2"};
  steps[5].new_elements = {p.element("a2")};
  steps[6].labels = {"c1", "c2", "c3"};
  steps[6].new_elements = {p.element("c1"), p.element("c2"), p.element("c3")};
  return steps;
}

struct FiltrationRow {
  int index = 0;
  std::vector<std::string> labels;
  FPAbelianGroup quotient;
  std::int64_t expected_length = 0;

  [[nodiscard]] bool pass() const { return static_cast<std::int64_t>(quotient.length()) == expected_length; }
};

/// Elements generating A_k (all steps up to k, 1-based).
inline std::vector<ModuleElement> filtration_generators(const std::vector<FiltrationStep>& steps, int k) {
  std::vector<ModuleElement> out;
  for (int j = 0; j < k; ++j) out.insert(out.end(), steps[j].new_elements.begin(), steps[j].new_elements.end());
  return out;
}

/// For each k, the subgroup of A~[m]/A_{k-1} generated by the new elements of step k.
inline std::vector<FiltrationRow> quotient_lengths(std::int64_t m, const SnfOptions& opt = {}) {
  auto p = build_tilde_A(m);
  auto steps = filtration_steps(p, m);
  std::vector<FiltrationRow> rows;
  for (int k = 1; k <= 7; ++k) {
    auto q = quotient_by_elements(p, filtration_generators(steps, k - 1), "filtration");
    const auto& s = steps[k - 1];
    rows.push_back({k, s.labels, subgroup_of_cokernel(q, s.new_elements, opt), s.expected_length});
  }
  return rows;
}

/// A_{k-1} lies in A_k for every k: the image of A_{k-1} in A~/A_k vanishes.
inline bool filtration_is_monotone(std::int64_t m) {
  auto p = build_tilde_A(m);
  auto steps = filtration_steps(p, m);
  for (int k = 2; k <= 7; ++k) {
    auto q = quotient_by_elements(p, filtration_generators(steps, k), "filtration");
    if (!subgroup_of_cokernel(q, filtration_generators(steps, k - 1)).is_trivial()) return false;
  }
  return true;
}

/// The element u written both ways: (t3 - t2)(t1-1)(t3-1)c3 and (t1 - t2)(t1-1)(t3-1)c1.
inline std::pair<ModuleElement, ModuleElement> u_element(const ModulePresentation& p) {
  const auto& alpha = p.epimorphism;
  auto one = GroupRingElem::one(alpha.group());
  auto t1 = variable(alpha, 1), t2 = variable(alpha, 2), t3 = variable(alpha, 3);
  auto bar_prime = (t1 - one) * (t3 - one);
  return {p.element("c3", (t3 - t2) * bar_prime), p.element("c1", (t1 - t2) * bar_prime)};
}

/// Compares the successive quotients with the modules that surject onto them.
inline std::vector<Check> verify_structure_epimorphisms(std::int64_t m, const SnfOptions& opt = {}) {
  if (m < 2) throw std::invalid_argument("verify_structure_epimorphisms: need m >= 2");
  auto p = build_tilde_A(m);
  auto steps = filtration_steps(p, m);
  auto upto = [&](int k) { return filtration_generators(steps, k); };
  auto sub = [&](int k) { return subgroup_of_cokernel(quotient_by_elements(p, upto(k - 1)), steps[k - 1].new_elements, opt); };
  std::vector<Check> checks;
  checks.push_back(make_check("A3/A2 = three copies of Z[t]/phi_m", to_json(free_group(3 * (m - 1))), to_json(sub(3))));
  checks.push_back(make_check("A5/A4 = Z[t]/phi_m", to_json(free_group(m - 1)), to_json(sub(5))));
  checks.push_back(make_check("A7/A6 = Z[G/t2t3] + Z[G/t1t3] + Z", to_json(free_group(2 * m + 1)), to_json(sub(7))));

  auto [u3, u1] = u_element(p);
  auto mod_a1 = quotient_by_elements(p, upto(1));
  auto diff = add(u3, scale(-GroupRingElem::one(p.group()), u1));
  checks.push_back(make_check("u: both expressions agree modulo A1", to_json(FPAbelianGroup{}),
                              to_json(subgroup_of_cokernel(mod_a1, {diff}, opt))));
  const std::int64_t u_rank = m % 2 == 0 ? m - 2 : m - 1;
  checks.push_back(make_check(m % 2 == 0 ? "A2' = Z[t]/phi_k(t^2), m = 2k" : "A2' = Z[t]/phi_m",
                              to_json(free_group(static_cast<std::size_t>(u_rank))),
                              to_json(subgroup_of_cokernel(mod_a1, {u3}, opt))));
  auto mod_a1_u = quotient_by_elements(mod_a1, {u3});
  checks.push_back(make_check("(A2/A1)/A2' = two copies of Z[t]/phi_m", to_json(free_group(2 * (m - 1))),
                              to_json(subgroup_of_cokernel(mod_a1_u, steps[1].new_elements, opt))));
  return checks;
}

}  // namespace ceva
