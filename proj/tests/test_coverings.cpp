#include "oracles.hpp"

#include "ceva/coverings.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

using ceva::Epimorphism;
using ceva::FiniteAbelianGroup;

namespace {

std::uint64_t order_of(const ceva::FPAbelianGroup& g) {
  std::uint64_t o = 1;
  for (const auto& t : g.torsion) o *= static_cast<std::uint64_t>(t.to_int64());
  return o;
}

std::filesystem::path temp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ceva_test_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove(p);
  std::filesystem::remove(ceva::index_path(p));
  return p;
}

}  // namespace

TEST(Covering, KernelHasIndexOrder) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 30; ++i) {
    auto a = oracle::random_epimorphism(rng, 30);
    auto k = ceva::kernel_of_epimorphism(a);
    ASSERT_EQ(k.cols(), 3U);
    EXPECT_EQ(ceva::determinant(k), ceva::Integer(static_cast<std::int64_t>(a.order())));
  }
}

TEST(Covering, H1OfFermatIsTrivial) {
  for (std::int64_t m = 1; m <= 4; ++m) EXPECT_TRUE(ceva::h1_of_covering(Epimorphism::fermat(m)).is_trivial());
  EXPECT_TRUE(ceva::h1_of_covering(Epimorphism({2}, {ceva::ExponentVector{1}, {1}, {1}})).is_trivial());
}

TEST(Covering, NontrivialH1Example) {
  Epimorphism a({4, 4}, {ceva::ExponentVector{0, 1}, {1, 0}, {1, 2}});
  EXPECT_EQ(ceva::h1_of_covering(a).str(), "Z/2");
  EXPECT_EQ(oracle::h1_order_by_counting(a), 2U);
}

TEST(Covering, H1OrderMatchesCountingOracle) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 60; ++i) {
    auto a = oracle::random_epimorphism(rng, 24);
    if (a.group().exponent() > 12) continue;
    auto h = ceva::h1_of_covering(a);
    EXPECT_EQ(h.rank, 0U);
    EXPECT_EQ(order_of(h), oracle::h1_order_by_counting(a)) << a.group().str();
  }
}

TEST(Covering, H1InvariantUnderRelabeling) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10; ++i) {
    auto a = oracle::random_epimorphism(rng, 16);
    auto h = ceva::h1_of_covering(a);
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
      EXPECT_EQ(ceva::h1_of_covering(a.relabeled(perm)), h);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(Toy, CyclicExample) {
  auto rep = ceva::verify_toy(Epimorphism({5}, {ceva::ExponentVector{1}, {2}, {0}}));
  EXPECT_EQ(rep.vanishing_index, 3U);
  EXPECT_EQ(rep.expected_rank_B, 3U);
  EXPECT_TRUE(ceva::all_pass(rep.checks));
}

TEST(Toy, VanishingGammaZeroIsRelabeled) {
  // alpha(gamma_0) = -(1 + 2 + 3) = 0 in Z/6.
  auto rep = ceva::verify_toy(Epimorphism({6}, {ceva::ExponentVector{1}, {2}, {3}}));
  EXPECT_EQ(rep.vanishing_index, 0U);
  EXPECT_EQ(rep.relabeled.image(3), 0U);
  EXPECT_TRUE(ceva::all_pass(rep.checks));
}

TEST(Toy, RejectsNonVanishing) {
  EXPECT_THROW(ceva::verify_toy(Epimorphism::fermat(2)), ceva::PreconditionViolated);
}

TEST(Search, GroupsUpToOrder) {
  auto cyc = ceva::groups_up_to(ceva::SearchFamily::cyclic, 6);
  EXPECT_EQ(cyc.size(), 5U);
  auto all = ceva::groups_up_to(ceva::SearchFamily::all, 8);
  std::vector<std::string> names;
  for (const auto& g : all) names.push_back(g.str());
  EXPECT_EQ(names, (std::vector<std::string>{"Z/2", "Z/3", "Z/2+Z/2", "Z/4", "Z/5", "Z/6", "Z/7", "Z/2+Z/2+Z/2",
                                             "Z/2+Z/4", "Z/8"}));
}

TEST(Search, AutomorphismCounts) {
  EXPECT_EQ(ceva::automorphisms(FiniteAbelianGroup({7})).size(), 6U);
  EXPECT_EQ(ceva::automorphisms(FiniteAbelianGroup({2, 2})).size(), 6U);
  EXPECT_EQ(ceva::automorphisms(FiniteAbelianGroup({2, 4})).size(), 8U);
  EXPECT_EQ(ceva::automorphisms(FiniteAbelianGroup({2, 2, 2})).size(), 168U);
  for (const auto& g : ceva::groups_up_to(ceva::SearchFamily::all, 12)) {
    EXPECT_EQ(ceva::automorphisms(g).size(), oracle::automorphism_tables(g).size()) << g.str();
  }
}

TEST(Search, ClassCountsMatchOrbitOracle) {
  for (const auto& g : ceva::groups_up_to(ceva::SearchFamily::all, 9)) {
    EXPECT_EQ(ceva::epimorphism_classes(g).size(), oracle::orbit_count(g)) << g.str();
  }
}

TEST(Search, FullEnumerationCountsSurjections) {
  FiniteAbelianGroup g({2, 2});
  std::size_t brute = 0;
  for (ceva::ElementIndex a = 0; a < 4; ++a) {
    for (ceva::ElementIndex b = 0; b < 4; ++b) {
      for (ceva::ElementIndex c = 0; c < 4; ++c) {
        std::set<ceva::ElementIndex> span{0, a, b, c, g.add(a, b), g.add(a, c), g.add(b, c), g.add(a, g.add(b, c))};
        brute += span.size() == 4 ? 1 : 0;
      }
    }
  }
  EXPECT_EQ(ceva::epimorphism_classes(g, false).size(), brute);
}

TEST(Search, TorsionOfAEqualsTorsionOfBWhenH1Vanishes) {
  ceva::SearchOptions opt;
  opt.family = ceva::SearchFamily::all;
  opt.max_order = 8;
  auto s = ceva::search(opt);
  EXPECT_EQ(s.classes, s.evaluated);
  for (const auto& row : s.rows) {
    if (row.applicable()) {
      EXPECT_EQ(row.module_A.torsion, row.module_B.torsion) << row.key();
    }
  }
}

TEST(Search, CyclicSmallOrdersAreTorsionFree) {
  ceva::SearchOptions opt;
  opt.max_order = 8;
  opt.jobs = 2;
  auto s = ceva::search(opt);
  EXPECT_GT(s.classes, 0U);
  EXPECT_EQ(s.torsion_hits, 0U);
}

TEST(Search, ResumesFromIndex) {
  auto out = temp_file("resume.jsonl");
  ceva::SearchOptions opt;
  opt.family = ceva::SearchFamily::all;
  opt.max_order = 6;
  opt.out = out;
  auto first = ceva::search(opt);
  EXPECT_EQ(first.resumed, 0U);
  EXPECT_EQ(first.evaluated, first.classes);
  auto second = ceva::search(opt);
  EXPECT_EQ(second.evaluated, 0U);
  EXPECT_EQ(second.resumed, first.classes);
  std::ifstream is(out);
  std::size_t lines = 0;
  for (std::string line; std::getline(is, line);) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("tors_interpretation"));
    ++lines;
  }
  EXPECT_EQ(lines, first.classes);
  // Widening the search only evaluates the new classes.
  opt.max_order = 7;
  auto third = ceva::search(opt);
  EXPECT_EQ(third.resumed, first.classes);
  EXPECT_EQ(third.evaluated + third.resumed, third.classes);
  std::filesystem::remove(out);
  std::filesystem::remove(ceva::index_path(out));
}

TEST(Search, RejectsTinyOrder) {
  ceva::SearchOptions opt;
  opt.max_order = 1;
  EXPECT_THROW(ceva::search(opt), std::invalid_argument);
}
