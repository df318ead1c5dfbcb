#include <filesystem>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sl4/grpstore.hpp"

using namespace sl4;

TEST(GroupStore, OrdersMatchExhaustiveCount) {
  for (auto [n, modulus] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {2, 6}, {2, 8}, {3, 2}}) {
    const GroupStore g = special_linear_group(n, modulus);
    const auto brute = oracle::all_special(n, modulus);
    EXPECT_EQ(g.order(), brute.size()) << "SL" << n << "(Z/" << modulus << ")";
    EXPECT_EQ(g.order(), sl_order_formula(n, modulus));
    for (const auto& m : brute) EXPECT_TRUE(g.contains(m));
  }
}

TEST(GroupStore, Sl4Mod2) {
  const GroupStore g = special_linear_group(4, 2);
  EXPECT_EQ(g.order(), 20160u);
  EXPECT_TRUE(g.element(0).is_identity());
  for (std::size_t k = 2; k < g.order(); ++k) ASSERT_LT(g.code(k - 1), g.code(k));
  EXPECT_EQ(sl_order_formula(4, 4), 20160u * 32768u);
}

TEST(GroupStore, CapExceeded) {
  EXPECT_THROW(special_linear_group(4, 2, 1000), EnumerationCapExceeded);
}

TEST(GroupStore, IndexOfNonMemberThrows) {
  const GroupStore g = special_linear_group(2, 3);
  EXPECT_THROW(g.index_of(ModMatrix::from_rows(3, {{2, 0}, {0, 1}})), std::out_of_range);
}

TEST(Classes, Sl3Mod2MatchesConjugationOracle) {
  const GroupStore g = special_linear_group(3, 2);
  const ClassData c = conjugacy_classes(g);
  EXPECT_EQ(static_cast<int>(c.count()), oracle::class_count(oracle::all_special(3, 2)));
  EXPECT_EQ(c.count(), 6u);
  std::size_t total = 0;
  for (auto s : c.sizes) total += s;
  EXPECT_EQ(total, 168u);
  EXPECT_EQ(c.sizes[0], 1u);
  EXPECT_EQ(c.exponent, 84);
}

TEST(Classes, Sl2Mod4MatchesConjugationOracle) {
  const GroupStore g = special_linear_group(2, 4);
  EXPECT_EQ(static_cast<int>(conjugacy_classes(g).count()), oracle::class_count(oracle::all_special(2, 4)));
}

TEST(Classes, Sl4Mod2) {
  const ClassData c = conjugacy_classes(special_linear_group(4, 2));
  EXPECT_EQ(c.count(), 14u);
  EXPECT_EQ(c.exponent, 420);
}

TEST(Classes, PowerMapAndInverse) {
  const GroupStore g = special_linear_group(3, 2);
  const ClassData c = conjugacy_classes(g);
  for (std::size_t k = 0; k < c.count(); ++k) {
    const ModMatrix x = g.element(c.representatives[k]);
    EXPECT_EQ(c.power_map[k][0], 0u);
    EXPECT_EQ(c.power_map[k][1], k);
    EXPECT_EQ(c.inverse_class(k), c.class_of[g.index_of(invert(x))]);
    EXPECT_TRUE(power(x, c.orders[k]).is_identity());
  }
}

TEST(Classes, AlgebraMatchesDirectCount) {
  const GroupStore g = special_linear_group(3, 2);
  const ClassData c = conjugacy_classes(g);
  const ClassAlgebra a(g, c);
  for (std::size_t i = 0; i < c.count(); ++i)
    for (std::size_t j = 0; j < c.count(); ++j)
      for (std::size_t k = 0; k < c.count(); ++k) ASSERT_EQ(a(i, j, k), class_mult_coeff(g, c, i, j, k));
  // sum_k a(i, j, k) |C_k| = |C_i| |C_j|
  for (std::size_t i = 0; i < c.count(); ++i) {
    for (std::size_t j = 0; j < c.count(); ++j) {
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < c.count(); ++k) s += a(i, j, k) * c.sizes[k];
      EXPECT_EQ(s, c.sizes[i] * c.sizes[j]);
    }
  }
}

TEST(Subgroups, OrdersAndClosure) {
  struct Case {
    SubgroupName name;
    int p, r;
    std::size_t order;
  };
  // |SL2(Z/4)| = 48, |SL3(Z/2)| = 168, U1 = (Z/q)^3, U2 = (Z/q)^2, H Heisenberg q^3
  for (const Case& c : std::vector<Case>{{SubgroupName::SL2Block, 2, 2, 48},
                                         {SubgroupName::SL3Block, 2, 1, 168},
                                         {SubgroupName::U1, 2, 2, 64},
                                         {SubgroupName::U2, 2, 2, 16},
                                         {SubgroupName::H, 2, 2, 64},
                                         {SubgroupName::G2, 3, 1, 24},
                                         {SubgroupName::NSub, 3, 1, 3},
                                         {SubgroupName::GKer, 2, 2, 32768}}) {
    const NamedSubgroup s = make_subgroup(c.name, c.p, c.r);
    EXPECT_EQ(s.order(), c.order) << s.label;
    if (s.order() <= 200) {
      EXPECT_EQ(oracle::closure(s.elements).size(), s.order()) << s.label << " is not closed";
    }
  }
  const NamedSubgroup cij = make_subgroup(SubgroupName::Cij, 2, 2, 4, 1, 4);
  EXPECT_EQ(cij.order(), 2u);
  EXPECT_THROW(make_subgroup(SubgroupName::GKer, 2, 1), std::invalid_argument);
  EXPECT_EQ(parse_subgroup_name("SL2_block"), SubgroupName::SL2Block);
  EXPECT_FALSE(parse_subgroup_name("nope").has_value());
}

TEST(Subgroups, LocatedInStore) {
  const GroupStore g = special_linear_group(4, 2);
  const NamedSubgroup s = named_subgroup(g, SubgroupName::SL2Block, 2, 1);
  ASSERT_EQ(s.ids.size(), 6u);
  const ClassData c = conjugacy_classes(g);
  const auto dist = class_distribution(c, s.ids);
  std::size_t total = 0;
  for (auto d : dist) total += d;
  EXPECT_EQ(total, 6u);
  EXPECT_EQ(dist[0], 1u);
}

TEST(CongruenceKernel, Level4) {
  const CongruenceKernelCheck c = check_congruence_kernel(2, 2);
  EXPECT_EQ(c.trace_zero_count, 32768u);
  EXPECT_EQ(c.distinct_images, 32768u);
  EXPECT_EQ(c.kernel_count, 32768u);
  EXPECT_TRUE(c.homomorphism);
  EXPECT_TRUE(c.holds());
  EXPECT_THROW(check_congruence_kernel(2, 1), std::invalid_argument);
}

TEST(Cache, RoundTrip) {
  const GroupStore g = special_linear_group(3, 2);
  const auto dir = std::filesystem::temp_directory_path() / "sl4_cache_test";
  std::filesystem::create_directories(dir);
  const auto path = cache_path(dir, g);
  save_group(g, path);
  const GroupStore h = load_group(path, g.generators());
  ASSERT_EQ(h.order(), g.order());
  for (std::size_t k = 0; k < g.order(); ++k) ASSERT_EQ(h.code(k), g.code(k));
  EXPECT_EQ(cache_path(dir, g.generators()), path);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_group(path, g.generators()), std::runtime_error);
}
