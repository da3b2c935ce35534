#include "ceva/commands.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string(CEVA_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ceva_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, VerifyMainPasses) {
  auto r = run_cli("verify main --m 3 --jobs 1");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "verify main");
  EXPECT_EQ(j["versions"]["schema"], 1);
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
}

TEST(Cli, ReportsAreByteIdentical) {
  for (const std::string args : {"verify main --m 3", "filtration --m 3", "lines --m 4",
                                 "verify toy --group 2,4 --images '1,0|0,1|1,3'", "search --family all --max-order 6"}) {
    auto a = run_cli(args + " --jobs 1");
    auto b = run_cli(args + " --jobs 2");
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, MatchesGoldenReports) {
  const std::filesystem::path dir(CEVA_GOLDEN_DIR);
  EXPECT_EQ(run_cli("verify main --m 2").out, slurp(dir / "verify_main_m2.json"));
  EXPECT_EQ(run_cli("verify pq --m 3").out, slurp(dir / "verify_pq_m3.json"));
  EXPECT_EQ(run_cli("filtration --m 2").out, slurp(dir / "filtration_m2.json"));
  EXPECT_EQ(run_cli("lines --m 3").out, slurp(dir / "lines_m3.json"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("lines --m 2").code, 2);
  EXPECT_EQ(run_cli("verify toy --m 3").code, 2);
  EXPECT_EQ(run_cli("verify toy --group 4 --images '2|0|2'").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("verify main").code, 2);
  EXPECT_EQ(run_cli("verify main --m 7 --budget-seconds 0.001").code, 3);
  EXPECT_EQ(run_cli("verify toy --group 5 --images '1|2|0'").code, 0);
}

TEST(Cli, EmitsMatrixAndSidecar) {
  auto path = scratch("a.sms");
  auto r = run_cli("verify main --m 2 --emit-matrix " + path.string());
  ASSERT_EQ(r.code, 0);
  auto m = ceva::IntMatrix::from_sms(slurp(path));
  EXPECT_EQ(m, ceva::flatten(ceva::build_tilde_A(2)));
  auto side = nlohmann::json::parse(slurp(path.string() + ".json"));
  EXPECT_EQ(side["group_order"], 8);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".json");
}

TEST(Cli, EmitsGramAndLines) {
  auto gram = scratch("g.sms"), csv = scratch("l.csv");
  auto r = run_cli("lines --m 3 --emit-gram " + gram.string() + " --emit-lines " + csv.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(ceva::IntMatrix::from_sms(slurp(gram)), ceva::gram_matrix(3).gram);
  auto text = slurp(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 28);
  std::filesystem::remove(gram);
  std::filesystem::remove(csv);
}

TEST(Cli, SearchWritesResumableRows) {
  auto out = scratch("s.jsonl");
  ASSERT_EQ(run_cli("search --family cyclic --max-order 5 --out " + out.string()).code, 0);
  auto again = nlohmann::json::parse(run_cli("search --family cyclic --max-order 5 --out " + out.string()).out);
  EXPECT_EQ(again["results"][0]["evaluated"], 0);
  std::filesystem::remove(out);
  std::filesystem::remove(ceva::index_path(out));
}

TEST(Commands, ReportShape) {
  auto r = ceva::cmd_verify_toy(ceva::Epimorphism({2, 2}, {ceva::ExponentVector{1, 0}, {0, 1}, {0, 0}}));
  EXPECT_TRUE(r.pass());
  auto j = r.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "params", "results", "checks", "versions"}));
  EXPECT_EQ(j["results"][3]["group"]["rank"], 6);
}
