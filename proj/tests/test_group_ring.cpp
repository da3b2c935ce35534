#include "oracles.hpp"

#include "ceva/alexander.hpp"
#include "ceva/group.hpp"
#include "ceva/group_ring.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using ceva::ElementIndex;
using ceva::Epimorphism;
using ceva::FiniteAbelianGroup;
using ceva::GroupRingElem;

namespace {

GroupRingElem random_element(std::mt19937_64& rng, const FiniteAbelianGroup& g, int terms = 4) {
  std::uniform_int_distribution<ElementIndex> pick(0, static_cast<ElementIndex>(g.order() - 1));
  std::uniform_int_distribution<std::int64_t> coef(-5, 5);
  GroupRingElem x(g);
  for (int i = 0; i < terms; ++i) x.add_term(pick(rng), coef(rng));
  return x;
}

}  // namespace

TEST(Group, IndexRoundTrip) {
  FiniteAbelianGroup g({2, 6, 12});
  EXPECT_EQ(g.order(), 144U);
  EXPECT_EQ(g.exponent(), 12);
  for (ElementIndex x = 0; x < g.order(); ++x) EXPECT_EQ(g.index(g.element(x)), x);
  EXPECT_EQ(g.index({3, -1, 25}), g.index({1, 5, 1}));
}

TEST(Group, ArithmeticMatchesCoordinates) {
  FiniteAbelianGroup g({3, 6});
  for (ElementIndex a = 0; a < g.order(); ++a) {
    for (ElementIndex b = 0; b < g.order(); ++b) {
      auto x = g.element(a), y = g.element(b);
      EXPECT_EQ(g.add(a, b), g.index({x[0] + y[0], x[1] + y[1]}));
    }
    EXPECT_EQ(g.add(a, g.neg(a)), 0U);
    EXPECT_EQ(g.scale(a, g.order_of(a)), 0U);
    for (std::int64_t k = 1; k < g.order_of(a); ++k) EXPECT_NE(g.scale(a, k), 0U);
  }
}

TEST(Group, SmithFormOfNonSmithModuli) {
  auto iso = ceva::smith_form(FiniteAbelianGroup({4, 6}));
  EXPECT_EQ(iso.smith.moduli(), (std::vector<std::int64_t>{2, 12}));
  EXPECT_EQ(ceva::smith_form(FiniteAbelianGroup({2, 3})).smith.moduli(), (std::vector<std::int64_t>{6}));
  EXPECT_TRUE(ceva::smith_form(FiniteAbelianGroup({1, 1})).smith.moduli().empty());
}

TEST(Group, SmithMapIsAnIsomorphism) {
  for (const auto& moduli : std::vector<std::vector<std::int64_t>>{{4, 6}, {2, 3, 5}, {6, 10, 15}, {9, 3}, {2, 2, 4}}) {
    FiniteAbelianGroup g(moduli);
    auto iso = ceva::smith_form(g);
    ASSERT_EQ(iso.smith.order(), g.order());
    std::set<ElementIndex> img;
    for (ElementIndex x = 0; x < g.order(); ++x) {
      auto fx = iso.smith.index(iso.apply(g.element(x)));
      img.insert(fx);
      for (ElementIndex y = 0; y < g.order(); y += 5) {
        auto fy = iso.smith.index(iso.apply(g.element(y)));
        EXPECT_EQ(iso.smith.index(iso.apply(g.element(g.add(x, y)))), iso.smith.add(fx, fy));
      }
    }
    EXPECT_EQ(img.size(), g.order());
  }
}

TEST(Epimorphism, FermatImages) {
  auto a = Epimorphism::fermat(4);
  const auto& g = a.group();
  EXPECT_EQ(g.moduli(), (std::vector<std::int64_t>{4, 4, 4}));
  EXPECT_EQ(g.element(a.image(1)), (ceva::ExponentVector{1, 0, 0}));
  EXPECT_EQ(g.element(a.image(0)), (ceva::ExponentVector{3, 3, 3}));
}

TEST(Epimorphism, RejectsNonSurjective) {
  EXPECT_THROW(Epimorphism({4}, {ceva::ExponentVector{2}, {0}, {2}}), ceva::NotSurjective);
  EXPECT_THROW(Epimorphism({2, 2}, {ceva::ExponentVector{1, 0}, {1, 0}, {0, 0}}), ceva::NotSurjective);
  EXPECT_NO_THROW(Epimorphism({2, 3}, {ceva::ExponentVector{1, 0}, {0, 1}, {0, 0}}));
  EXPECT_THROW(Epimorphism({2, 3}, {ceva::ExponentVector{1}, {0, 1}, {0, 0}}), std::invalid_argument);
}

TEST(Epimorphism, RelabelingPermutesImages) {
  Epimorphism a({5}, {ceva::ExponentVector{1}, {2}, {0}});
  auto b = a.relabeled({3, 0, 2, 1});
  EXPECT_EQ(b.image(1), a.image(0));
  EXPECT_EQ(b.image(2), a.image(2));
  EXPECT_EQ(b.image(3), a.image(1));
  EXPECT_EQ(b.image(0), a.image(3));
}

TEST(GroupRing, RingAxioms) {
  std::mt19937_64 rng(3);
  for (const auto& moduli : std::vector<std::vector<std::int64_t>>{{5}, {2, 4}, {3, 3, 3}, {12}}) {
    FiniteAbelianGroup g(moduli);
    auto one = GroupRingElem::one(g);
    for (int i = 0; i < 50; ++i) {
      auto x = random_element(rng, g), y = random_element(rng, g), z = random_element(rng, g);
      EXPECT_EQ(x * y, y * x);
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_EQ(x * (y + z), x * y + x * z);
      EXPECT_EQ(x * one, x);
      EXPECT_TRUE((x - x).is_zero());
      EXPECT_EQ((x * y).augmentation(), x.augmentation() * y.augmentation());
      EXPECT_EQ(x.translate(5 % g.order()), x * GroupRingElem::monomial(g, 5 % g.order()));
    }
  }
}

TEST(GroupRing, GeometricSumKillsGenerator) {
  auto a = Epimorphism::fermat(5);
  auto one = GroupRingElem::one(a.group());
  for (std::size_t j = 0; j < 4; ++j) {
    auto t = ceva::variable(a, j);
    EXPECT_TRUE((ceva::phi(a, 5, j) * (t - one)).is_zero());
    EXPECT_FALSE((ceva::phi(a, 4, j) * (t - one)).is_zero());
  }
}

TEST(GroupRing, MixedGroupsRejected) {
  auto x = GroupRingElem::one(FiniteAbelianGroup({2}));
  auto y = GroupRingElem::one(FiniteAbelianGroup({3}));
  EXPECT_THROW(x + y, std::invalid_argument);
}

TEST(GroupRing, OverflowIsReported) {
  FiniteAbelianGroup g({2});
  auto x = GroupRingElem::monomial(g, 1, std::int64_t{1} << 40);
  EXPECT_THROW(x * x, ceva::CoefficientOverflow);
}

TEST(Characters, AreDistinctHomomorphisms) {
  for (const auto& moduli : std::vector<std::vector<std::int64_t>>{{6}, {2, 4}, {3, 3}, {2, 2, 2}}) {
    FiniteAbelianGroup g(moduli);
    auto chars = ceva::characters(g);
    ASSERT_EQ(chars.size(), g.order());
    std::set<std::vector<std::uint64_t>> tables;
    for (const auto& chi : chars) {
      std::vector<std::uint64_t> table;
      for (ElementIndex x = 0; x < g.order(); ++x) {
        table.push_back(chi.evaluate(g, x));
        for (ElementIndex y = 0; y < g.order(); ++y) {
          EXPECT_EQ(chi.evaluate(g, g.add(x, y)), (chi.evaluate(g, x) + chi.evaluate(g, y)) % chi.order);
        }
      }
      tables.insert(table);
    }
    EXPECT_EQ(tables.size(), g.order());
  }
}

TEST(Alexander, RelationTags) {
  auto rels = ceva::universal_relations(Epimorphism::fermat(3));
  std::vector<std::string> tags;
  for (const auto& r : rels) tags.push_back(r.tag);
  EXPECT_EQ(tags, (std::vector<std::string>{"b1", "a1", "b2", "a2", "b3", "a3"}));
}

TEST(Alexander, FlattenedShape) {
  auto m = ceva::flatten(ceva::build_A(Epimorphism::fermat(2)));
  EXPECT_EQ(m.rows(), 48U);
  EXPECT_EQ(m.cols(), 48U);
  auto t = ceva::flatten(ceva::build_tilde_A(3));
  EXPECT_EQ(t.rows(), 6U * 27U);
  EXPECT_EQ(t.cols(), 9U * 27U);
}

TEST(Alexander, ColumnsOfAHaveZeroAugmentation) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    auto m = ceva::flatten(ceva::build_A(oracle::random_epimorphism(rng, 24)));
    std::vector<ceva::Integer> sums(m.cols());
    for (const auto& [idx, v] : m.entries()) sums[idx.second] += v;
    for (const auto& s : sums) EXPECT_TRUE(s.is_zero());
  }
}

TEST(Alexander, BoundaryOfRelationsVanishes) {
  std::mt19937_64 rng(6);
  std::vector<ceva::ModulePresentation> ps;
  for (std::int64_t m = 1; m <= 6; ++m) {
    ps.push_back(ceva::build_tilde_A(m));
    ps.push_back(ceva::build_tilde_A_prime(m));
  }
  for (int i = 0; i < 30; ++i) ps.push_back(ceva::build_A(oracle::random_epimorphism(rng, 30)));
  for (const auto& p : ps) {
    for (const auto& r : p.relations) EXPECT_TRUE(ceva::apply_boundary(p, r.coeffs).is_zero()) << r.tag;
    // Same statement on the flattened matrices.
    EXPECT_EQ((ceva::flatten_boundary(p) * ceva::flatten(p)).nonzeros(), 0U);
  }
}

TEST(Alexander, ElementLookup) {
  auto p = ceva::build_A(Epimorphism::fermat(2));
  EXPECT_EQ(p.generator_index("c2"), 4U);
  EXPECT_THROW((void)p.generator_index("z"), std::invalid_argument);
  EXPECT_THROW(p.add_relation(ceva::ModuleElement(2), "short"), std::invalid_argument);
  EXPECT_THROW(ceva::apply_boundary(ceva::build_B(Epimorphism::fermat(2)), p.zero_element()), std::invalid_argument);
}

TEST(Alexander, SidecarDescribesLayout) {
  auto p = ceva::build_tilde_A(2);
  auto j = ceva::presentation_sidecar(p);
  EXPECT_EQ(j["group_order"], 8);
  EXPECT_EQ(j["relations"].size(), 9U);
  EXPECT_EQ(j["relations"][6]["tag"], "phi_m(t1)a1");
  EXPECT_EQ(j["generators"][3], "c1");
  std::ostringstream os;
  ceva::flatten(p).write_sms(os);
  EXPECT_EQ(ceva::IntMatrix::from_sms(os.str()), ceva::flatten(p));
}

TEST(Alexander, OneRelatorShape) {
  auto p = ceva::build_B_onerelator(3);
  EXPECT_EQ(p.generators, (std::vector<std::string>{"c1", "c2", "c3"}));
  EXPECT_EQ(p.relations.size(), 4U);
  EXPECT_FALSE(p.boundary.has_value());
}
