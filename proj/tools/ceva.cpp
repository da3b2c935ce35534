// Command-line front end. Exit codes: 0 all checks pass, 1 a check failed,
// 2 usage or precondition error, 3 time budget exceeded.

#include "ceva/commands.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::vector<std::int64_t> parse_vector(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    std::int64_t v = std::stoll(item, &used);
    if (used != item.size()) throw std::invalid_argument("not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

ceva::Epimorphism parse_epimorphism(std::optional<std::int64_t> m, const std::string& group, const std::string& images) {
  if (m) {
    if (!group.empty() || !images.empty()) throw std::invalid_argument("--m cannot be combined with --group/--images");
    return ceva::Epimorphism::fermat(*m);
  }
  if (group.empty() || images.empty()) throw std::invalid_argument("give either --m or both --group and --images");
  auto moduli = parse_vector(group);
  std::array<ceva::ExponentVector, 3> imgs;
  std::stringstream ss(images);
  std::size_t k = 0;
  for (std::string part; std::getline(ss, part, '|'); ++k) {
    if (k >= 3) throw std::invalid_argument("--images takes exactly three vectors a1|a2|a3");
    imgs[k] = parse_vector(part);
    if (imgs[k].size() != moduli.size()) throw std::invalid_argument("image vector '" + part + "' does not match the group rank");
  }
  if (k != 3) throw std::invalid_argument("--images takes exactly three vectors a1|a2|a3");
  return ceva::Epimorphism(moduli, imgs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsion and lattice computations for abelian coverings branched over four lines"};
  app.require_subcommand(1);

  std::optional<std::int64_t> m;
  std::string group, images, report_path;
  std::size_t jobs = ceva::default_jobs();
  std::optional<double> budget;
  std::optional<std::string> emit_matrix, emit_gram, emit_lines;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--budget-seconds", budget, "Abort with exit code 3 after this many seconds")->check(CLI::PositiveNumber);
    sub->add_option("--report", report_path, "Write the JSON report here instead of stdout");
  };

  auto* verify = app.add_subcommand("verify", "Verify the torsion statements");
  verify->require_subcommand(1);
  auto* v_main = verify->add_subcommand("main", "Fermat covering of degree m");
  auto* v_toy = verify->add_subcommand("toy", "Covering unramified over one of the four lines");
  auto* v_pq = verify->add_subcommand("pq", "Quotient module with c2 = c3 = 0");
  for (auto* sub : {v_main, v_pq}) {
    sub->add_option("--m", m, "Degree")->required()->check(CLI::PositiveNumber);
    sub->add_option("--emit-matrix", emit_matrix, "Export the flattened presentation (.sms plus .json sidecar)");
    add_common(sub);
  }
  v_toy->add_option("--m", m, "Shorthand for group m,m,m with standard images")->check(CLI::PositiveNumber);
  v_toy->add_option("--group", group, "Group moduli, e.g. 2,4");
  v_toy->add_option("--images", images, "Images of gamma_1..3, e.g. 1,0|0,1|0,0");
  v_toy->add_option("--emit-matrix", emit_matrix, "Export the flattened presentation (.sms plus .json sidecar)");
  add_common(v_toy);

  auto* filt = app.add_subcommand("filtration", "Lengths of the successive quotients of the seven-step filtration");
  filt->add_option("--m", m, "Degree")->required()->check(CLI::PositiveNumber);
  add_common(filt);

  auto* lines = app.add_subcommand("lines", "Lines on the Fermat surface and their lattice");
  lines->add_option("--m", m, "Degree (>= 3)")->required();
  lines->add_option("--emit-gram", emit_gram, "Export the Gram matrix (with hyperplane class) as .sms");
  lines->add_option("--emit-lines", emit_lines, "Export the line list as CSV");
  add_common(lines);

  auto* srch = app.add_subcommand("search", "Search epimorphisms for torsion");
  std::string family = "cyclic";
  std::int64_t max_order = 6;
  std::string out;
  bool full = false;
  srch->add_option("--family", family, "cyclic or all")->check(CLI::IsMember({"cyclic", "all"}));
  srch->add_option("--max-order", max_order, "Largest group order")->check(CLI::Range(2, 1 << 20));
  srch->add_option("--out", out, "JSONL result file (resumable through <out>.index)");
  srch->add_flag("--full", full, "Skip symmetry reduction");
  add_common(srch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ceva::Report report;
  try {
    ceva::ScopedDeadline deadline(budget);
    ceva::CommandOptions co;
    co.jobs = jobs;
    if (emit_matrix) co.emit_matrix = *emit_matrix;
    if (v_main->parsed()) {
      report = ceva::cmd_verify_main(*m, co);
    } else if (v_pq->parsed()) {
      report = ceva::cmd_verify_pq(*m, co);
    } else if (v_toy->parsed()) {
      report = ceva::cmd_verify_toy(parse_epimorphism(m, group, images), co);
    } else if (filt->parsed()) {
      report = ceva::cmd_filtration(*m, co);
    } else if (lines->parsed()) {
      ceva::LinesOptions lo;
      if (emit_gram) lo.emit_gram = *emit_gram;
      if (emit_lines) lo.emit_lines = *emit_lines;
      report = ceva::cmd_lines(*m, lo);
    } else {
      ceva::SearchOptions so;
      so.family = family == "all" ? ceva::SearchFamily::all : ceva::SearchFamily::cyclic;
      so.max_order = max_order;
      so.full_enumeration = full;
      so.jobs = jobs;
      so.out = out;
      report = ceva::cmd_search(so);
    }
  } catch (const ceva::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }

  const std::string text = report.to_json().dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(report_path);
    if (!os) {
      std::cerr << "error: cannot write " << report_path << '\n';
      return kExitFail;
    }
    os << text;
  }
  std::cerr << report.command << ": " << (report.pass() ? "PASS" : "FAIL") << '\n';
  return report.pass() ? kExitPass : kExitFail;
}
