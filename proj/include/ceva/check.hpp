#pragma once

#include "ceva/normal_forms.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace ceva {

/// One asserted equality: what was expected, what came out.
struct Check {
  std::string name;
  nlohmann::ordered_json expected;
  nlohmann::ordered_json computed;
  bool pass = false;
};

inline Check make_check(std::string name, nlohmann::ordered_json expected, nlohmann::ordered_json computed) {
  bool ok = expected == computed;
  return {std::move(name), std::move(expected), std::move(computed), ok};
}

inline bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

inline nlohmann::ordered_json to_json(const FPAbelianGroup& g) {
  nlohmann::ordered_json j;
  j["rank"] = g.rank;
  auto t = nlohmann::ordered_json::array();
  for (const auto& d : g.torsion) t.push_back(d.str());
  j["torsion"] = t;
  j["length"] = g.length();
  return j;
}

inline FPAbelianGroup free_group(std::size_t rank) {
  FPAbelianGroup g;
  g.rank = rank;
  return g;
}

inline nlohmann::ordered_json to_json(const Check& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["expected"] = c.expected;
  j["computed"] = c.computed;
  j["pass"] = c.pass;
  return j;
}

}  // namespace ceva
