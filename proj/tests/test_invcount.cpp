#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sl4/invcount.hpp"

using namespace sl4;

namespace {

std::vector<ModMatrix> block_generators(int n, int modulus) {
  return {embed_block(ModMatrix::from_rows(modulus, {{1, 1}, {0, 1}}), n, 0),
          embed_block(ModMatrix::from_rows(modulus, {{1, 0}, {1, 1}}), n, 0)};
}

}  // namespace

TEST(Restriction, Sl3Mod2Counterexample) {
  const RestrictionReport r = find_sl3_counterexample(2);
  EXPECT_EQ(r.group_order, 168u);
  EXPECT_EQ(r.subgroup_order, 6u);
  ASSERT_EQ(r.rows.size(), 6u);
  const std::vector<std::int64_t> want{1, 0, 0, 2, 1, 1};
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(r.rows[k].multiplicity, want[k]) << "row " << k;
  EXPECT_EQ(r.zero_rows(), 2u);
  EXPECT_EQ(r.rows[1].degree, 3);
  EXPECT_EQ(r.rows[2].degree, 3);
  EXPECT_TRUE(r.table_check.all());
  EXPECT_EQ(r.verdict, "FOUND");
}

TEST(Restriction, FloatRouteAgrees) {
  const GroupStore g = special_linear_group(3, 2);
  const ClassData c = conjugacy_classes(g);
  const CharacterTable t = character_table(g, c);
  const NamedSubgroup s = named_subgroup(g, SubgroupName::SL2Block, 2, 1);
  const auto counts = class_distribution(c, s.ids);
  for (std::size_t i = 0; i < t.size(); ++i) {
    double err = 1.0;
    EXPECT_EQ(restriction_multiplicity_float(t, i, counts, &err), restriction_multiplicity(t, i, counts));
    EXPECT_LT(err, 1e-9);
  }
}

// Fixed vectors of the SL2 block in a permutation module equal its orbit count.
TEST(Restriction, PermutationCharacterMatchesOrbitCount) {
  for (auto [n, nonzero] : std::vector<std::pair<int, bool>>{{3, true}, {3, false}, {4, true}, {4, false}}) {
    const GroupStore g = special_linear_group(n, 2);
    const ClassData c = conjugacy_classes(g);
    const CharacterTable t = character_table(g, c);
    const NamedSubgroup s = named_subgroup(g, SubgroupName::SL2Block, 2, 1);
    const auto values = vector_permutation_character(g, c, t, nonzero);
    const std::int64_t m = class_function_multiplicity(t, values, class_distribution(c, s.ids), 1 << n);
    EXPECT_EQ(m, oracle::vector_orbits(block_generators(n, 2), 2, nonzero)) << "n=" << n;
  }
}

TEST(Restriction, NonzeroVectorsOfF2FourGiveSeven) {
  EXPECT_EQ(oracle::vector_orbits(block_generators(4, 2), 2, true), 7);
}

TEST(Theorem, Level2) {
  const RestrictionReport r = verify_theorem_level(2);
  EXPECT_EQ(r.group_order, 20160u);
  EXPECT_EQ(r.class_count, 14u);
  EXPECT_EQ(r.subgroup_order, 6u);
  ASSERT_EQ(r.rows.size(), 14u);
  for (const auto& row : r.rows) EXPECT_GE(row.multiplicity, 1);
  EXPECT_EQ(r.rows.front().multiplicity, 1);
  EXPECT_TRUE(r.table_check.all());
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.verdict, "PASS");
  EXPECT_EQ(r.prime, 421u);
}

TEST(Theorem, Level1IsTrivial) {
  const RestrictionReport r = verify_theorem_level(1);
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].multiplicity, 1);
}

TEST(Theorem, CapError) {
  EXPECT_THROW(verify_theorem_level(2, {1000, kDefaultSeed}), EnumerationCapExceeded);
}

TEST(Theorem, ReportJson) {
  const auto j = report_to_json(find_sl3_counterexample(2));
  EXPECT_EQ(j["group"], "SL3(Z/2)");
  EXPECT_EQ(j["rows"].size(), 6u);
  EXPECT_EQ(j["verdict"], "FOUND");
  EXPECT_EQ(j["prime"], 337);
  EXPECT_EQ(j["exponent"], 84);
}
