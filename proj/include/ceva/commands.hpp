#pragma once

// Report-producing entry points behind the command-line tool. Each returns a
// JSON report {command, params, results, checks, versions}; the report passes
// iff every check does.

#include "ceva/check.hpp"
#include "ceva/coverings.hpp"
#include "ceva/fermat_lines.hpp"
#include "ceva/filtration.hpp"
#include "ceva/homology.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ceva {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct Report {
  std::string command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  std::vector<Check> checks;

  [[nodiscard]] bool pass() const { return all_pass(checks); }

  [[nodiscard]] nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["params"] = params;
    j["results"] = results;
    auto cs = nlohmann::ordered_json::array();
    for (const auto& c : checks) cs.push_back(ceva::to_json(c));
    j["checks"] = cs;
    j["versions"] = {{"schema", kReportSchemaVersion}, {"tool", kToolVersion}};
    return j;
  }
};

struct CommandOptions {
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> emit_matrix;  // writes <path> (.sms) and <path>.json
};

inline void export_presentation(const ModulePresentation& p, const std::filesystem::path& path) {
  std::ofstream sms(path);
  if (!sms) throw std::runtime_error("cannot write " + path.string());
  flatten(p).write_sms(sms);
  std::ofstream side(path.string() + ".json");
  if (!side) throw std::runtime_error("cannot write " + path.string() + ".json");
  side << presentation_sidecar(p).dump(2) << '\n';
}

inline nlohmann::ordered_json epimorphism_json(const Epimorphism& a) {
  return {{"group", a.user_group().moduli()}, {"images", a.user_images()}};
}

inline Report cmd_verify_main(std::int64_t m, const CommandOptions& opt = {}) {
  Report r;
  r.command = "verify main";
  r.params = {{"m", m}};
  auto p = build_tilde_A(m);
  if (opt.emit_matrix) export_presentation(p, *opt.emit_matrix);
  auto g = fp_group(p);
  auto chars = rank_via_characters(p, opt.jobs);
  auto h1 = h1_of_complement(p);
  r.results.push_back({{"module", "tilde_A"}, {"group", to_json(g)}});
  r.results.push_back({{"module", "H1 of complement"}, {"group", to_json(h1)}});
  r.checks.push_back(make_check("torsion of tilde_A", nlohmann::ordered_json::array(), to_json(g)["torsion"]));
  r.checks.push_back(make_check("length of tilde_A", m * m * m + 9 * m - 7 - delta(m), g.length()));
  r.checks.push_back(make_check("rank via characters", g.rank, chars));
  r.checks.push_back(make_check("rank of H1 of complement", 9 * m - 6 - delta(m), h1.rank));
  if (m >= 3) {
    auto k = rank_K(m);
    r.results.push_back({{"rank_K", k}});
    r.checks.push_back(make_check("rank_K agrees with H1 of complement", h1.rank, k));
  }
  return r;
}

inline Report cmd_verify_pq(std::int64_t m, const CommandOptions& opt = {}) {
  Report r;
  r.command = "verify pq";
  r.params = {{"m", m}};
  auto p = build_tilde_A_prime(m);
  if (opt.emit_matrix) export_presentation(p, *opt.emit_matrix);
  auto g = fp_group(p);
  auto chars = rank_via_characters(p, opt.jobs);
  auto h1 = h1_of_complement(p);
  r.results.push_back({{"module", "tilde_A_prime"}, {"group", to_json(g)}});
  r.results.push_back({{"module", "H1 of complement"}, {"group", to_json(h1)}});
  r.checks.push_back(make_check("torsion of tilde_A_prime", nlohmann::ordered_json::array(), to_json(g)["torsion"]));
  r.checks.push_back(make_check("length of tilde_A_prime", m * m * m + 2 * m - 2, g.length()));
  r.checks.push_back(make_check("rank via characters", g.rank, chars));
  r.checks.push_back(make_check("rank of H1 of complement", 2 * m - 1, h1.rank));
  return r;
}

inline Report cmd_verify_toy(const Epimorphism& alpha, const CommandOptions& opt = {}) {
  Report r;
  r.command = "verify toy";
  r.params = epimorphism_json(alpha);
  auto rep = verify_toy(alpha);
  if (opt.emit_matrix) export_presentation(build_A(rep.relabeled), *opt.emit_matrix);
  r.results.push_back({{"vanishing_gamma", rep.vanishing_index},
                       {"relabeled", {{"group", rep.relabeled.group().moduli()},
                                      {"images", {rep.relabeled.group().element(rep.relabeled.image(1)),
                                                  rep.relabeled.group().element(rep.relabeled.image(2)),
                                                  rep.relabeled.group().element(rep.relabeled.image(3))}}}}});
  r.results.push_back({{"module", "H1 of covering"}, {"group", to_json(rep.h1)}});
  r.results.push_back({{"module", "A"}, {"group", to_json(rep.module_A)}});
  r.results.push_back({{"module", "B"}, {"group", to_json(rep.module_B)}});
  r.checks = rep.checks;
  return r;
}

inline Report cmd_filtration(std::int64_t m, const CommandOptions& = {}) {
  Report r;
  r.command = "filtration";
  r.params = {{"m", m}};
  std::int64_t total = 0;
  for (const auto& row : quotient_lengths(m)) {
    r.results.push_back({{"k", row.index},
                         {"new_elements", row.labels},
                         {"quotient", to_json(row.quotient)},
                         {"length", row.quotient.length()},
                         {"expected", row.expected_length},
                         {"pass", row.pass()}});
    r.checks.push_back(make_check("length of A" + std::to_string(row.index) + "/A" + std::to_string(row.index - 1),
                                  row.expected_length, row.quotient.length()));
    total += static_cast<std::int64_t>(row.quotient.length());
  }
  r.checks.push_back(make_check("sum of quotient lengths", m * m * m + 9 * m - 7 - delta(m), total));
  r.checks.push_back(make_check("filtration is increasing", true, filtration_is_monotone(m)));
  if (m >= 2) {
    for (auto& c : verify_structure_epimorphisms(m)) r.checks.push_back(std::move(c));
  }
  return r;
}

struct LinesOptions {
  std::optional<std::filesystem::path> emit_gram;
  std::optional<std::filesystem::path> emit_lines;
  bool include_hyperplane = true;  // for the exported Gram matrix
};

inline Report cmd_lines(std::int64_t m, const LinesOptions& lo = {}) {
  Report r;
  r.command = "lines";
  r.params = {{"m", m}};
  auto lines = enumerate_lines(m);
  if (lo.emit_lines) {
    std::ofstream os(*lo.emit_lines);
    if (!os) throw std::runtime_error("cannot write " + lo.emit_lines->string());
    write_lines_csv(os, m);
  }
  if (lo.emit_gram) {
    std::ofstream os(*lo.emit_gram);
    if (!os) throw std::runtime_error("cannot write " + lo.emit_gram->string());
    gram_matrix(m, lo.include_hyperplane).gram.write_sms(os);
  }
  auto rs = rank_S(m);
  auto rk = rank_K(m);
  auto disc = discriminant_S(m);
  r.results.push_back({{"lines", lines.size()}, {"rank_S", rs}, {"rank_K", rk}, {"discriminant", disc.value.str()}});
  const auto expect_rank = static_cast<std::size_t>(3 * (m - 1) * (m - 2) + 1 + delta(m));
  r.checks.push_back(make_check("number of lines", 3 * m * m, lines.size()));
  r.checks.push_back(make_check("rank_S", expect_rank, rs));
  r.checks.push_back(make_check("rank_K", 9 * m - 6 - delta(m), rk));
  return r;
}

inline Report cmd_search(const SearchOptions& so) {
  Report r;
  r.command = "search";
  r.params = {{"family", so.family == SearchFamily::cyclic ? "cyclic" : "all"},
              {"max_order", so.max_order},
              {"full_enumeration", so.full_enumeration}};
  if (!so.out.empty()) r.params["out"] = so.out.string();
  auto s = search(so);
  std::size_t mismatched_b = 0;
  for (const auto& row : s.rows) {
    if (row.applicable() && row.module_A.torsion != row.module_B.torsion) ++mismatched_b;
  }
  r.results.push_back({{"classes", s.classes},
                       {"evaluated", s.evaluated},
                       {"resumed", s.resumed},
                       {"torsion_hits", s.torsion_hits}});
  r.checks.push_back(make_check("Tors A = Tors B when H1 vanishes", 0, mismatched_b));
  return r;
}

}  // namespace ceva
