#include <gtest/gtest.h>

#include "sl4/pipeline.hpp"

using namespace sl4;

namespace {

std::vector<ModMatrix> block_elements(int modulus) {
  std::vector<ModMatrix> out;
  const GroupStore g = special_linear_group(2, modulus);
  for (std::size_t k = 0; k < g.order(); ++k) out.push_back(embed_sl2(g.element(k)));
  return out;
}

double invariance_residual(const UnitaryRep& rep, const CVector& w, int modulus) {
  double worst = 0.0;
  for (const auto& h : block_elements(modulus)) worst = std::max(worst, (rep.apply(h, w) - w).norm());
  return worst;
}

}  // namespace

TEST(Step1, IdentitiesAtSeveralLevels) {
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}, {2, 4}, {3, 3}}) {
    EXPECT_TRUE(verify_step1_identities(p, r)) << p << "^" << r;
  }
  EXPECT_THROW(verify_step1_identities(2, 1), std::invalid_argument);
}

TEST(Step1, MonomialConjugatorsForEveryPair) {
  for (int modulus : {2, 4, 9}) {
    for (int i = 1; i <= 4; ++i) {
      for (int j = 1; j <= 4; ++j) {
        if (i == j) continue;
        const ModMatrix m = monomial_conjugator(i, j, modulus);
        EXPECT_EQ(det_mod(m), 1 % modulus);
        EXPECT_EQ(m * elementary(1, 4, 1, 4, modulus) * invert(m), elementary(i, j, 1, 4, modulus));
      }
    }
  }
  EXPECT_THROW(monomial_conjugator(2, 2, 4), std::invalid_argument);
}

TEST(Step1, FindsNontrivialCongruenceSubgroup) {
  const Step1Result s = step1_find_Cij(parse_rep("Z4^4", 4), 2, 2);
  EXPECT_FALSE(s.old_rep);
  EXPECT_NE(s.i, s.j);
  // a representation pulled back from level 2 is old at level 4
  EXPECT_TRUE(step1_find_Cij(parse_rep("Z2^4", 4), 2, 2).old_rep);
}

TEST(Step2, DualConjugator) {
  EXPECT_TRUE(sl3_dual_conjugator({0, 0, 1}, 2, 2).is_identity());
  for (const std::array<int, 3>& xi : std::vector<std::array<int, 3>>{{1, 0, 0}, {3, 2, 1}, {2, 1, 0}, {0, 3, 2}}) {
    const ModMatrix g = sl3_dual_conjugator(xi, 2, 2);
    EXPECT_EQ(det_mod(g), 1);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(g(2, k), xi[k]);
  }
  EXPECT_THROW(sl3_dual_conjugator({2, 0, 2}, 2, 2), NoPrimitiveLabel);
}

TEST(Step2, RowCompletion) {
  for (const std::array<int, 2>& z : std::vector<std::array<int, 2>>{{1, 0}, {3, 5}, {0, 1}, {6, 7}, {4, 3}}) {
    const ModMatrix h = sl2_row_completion(z, 3, 2);
    EXPECT_EQ(det_mod(h), 1);
    EXPECT_EQ(h(0, 0), z[0]);
    EXPECT_EQ(h(0, 1), z[1]);
  }
  EXPECT_THROW(sl2_row_completion({3, 6}, 3, 2), std::invalid_argument);
}

TEST(Step2, HeisenbergCharacter) {
  const UnitaryRep rep = parse_rep("Z4^4", 4);
  const Step1Result s1 = step1_find_Cij(rep, 2, 2);
  const Step2Result s2 = step2_find_v(conjugated(rep, s1.conjugator), 2, 2);
  EXPECT_EQ(s2.xi_after, (std::array<int, 3>{0, 0, 1}));
  EXPECT_NE(s2.xi_before[0] % 2, 0);
  EXPECT_LT(s2.h_residual, 1e-8);
  EXPECT_LT(s2.kernel_residual, 1e-8);
  EXPECT_NEAR(s2.v.norm(), 1.0, 1e-12);
}

TEST(Pipeline, Level2FifteenPoints) {
  const UnitaryRep rep = parse_rep("nonzero:Z2^4", 2);
  const InvariantWitness w = run_pipeline(rep, 2, 1);
  EXPECT_FALSE(w.fallback);
  EXPECT_EQ(w.dim_w, 3);
  EXPECT_EQ(w.predicted_dim_w, 3);
  EXPECT_TRUE(w.coset_labels_distinct);
  EXPECT_LT(w.residual, 1e-8);
  EXPECT_LT(w.oracle_distance, 1e-8);
  EXPECT_EQ(w.oracle_rank, 7);
  EXPECT_LT(invariance_residual(rep, w.w, 2), 1e-8);
}

TEST(Pipeline, Level4VectorModule) {
  const UnitaryRep rep = parse_rep("Z4^4", 4);
  const InvariantWitness w = run_pipeline(rep, 2, 2);
  EXPECT_FALSE(w.fallback);
  EXPECT_EQ(w.dim_w, 12);
  EXPECT_EQ(w.predicted_dim_w, 12);
  EXPECT_TRUE(w.coset_labels_distinct);
  EXPECT_LT(w.residual, 1e-8);
  EXPECT_LT(invariance_residual(rep, w.w, 4), 1e-8);
  EXPECT_NEAR(w.w.norm(), 1.0, 1e-12);
}

TEST(Pipeline, SecondCaseOnCosetModule) {
  const UnitaryRep rep = parse_rep("cosets:SL3_block", 2);
  const InvariantWitness w = run_pipeline(rep, 2, 1);
  ASSERT_TRUE(w.step2.has_value());
  EXPECT_EQ(w.step2->case_tag, Step2Case::Case2);
  EXPECT_EQ(w.step2->R, 0);
  EXPECT_LT(w.residual, 1e-8);
  EXPECT_EQ(w.dim_w, 3);
}

TEST(Pipeline, Level3) {
  const UnitaryRep rep = parse_rep("nonzero:Z3^4", 3);
  const InvariantWitness w = run_pipeline(rep, 3, 1);
  EXPECT_FALSE(w.fallback);
  EXPECT_EQ(w.dim_w, 8);
  EXPECT_LT(w.residual, 1e-8);
}

TEST(Pipeline, OldRepFallsBack) {
  const InvariantWitness w = run_pipeline(parse_rep("Z2^4", 4), 2, 2);
  EXPECT_TRUE(w.fallback);
  EXPECT_FALSE(w.fallback_reason.empty());
  EXPECT_LT(w.residual, 1e-8);
  const InvariantWitness t = run_pipeline(parse_rep("trivial", 4), 2, 2);
  EXPECT_TRUE(t.fallback);
  EXPECT_EQ(t.oracle_rank, 1);
}

TEST(Pipeline, LevelMismatch) {
  EXPECT_THROW(run_pipeline(parse_rep("Z4^4", 4), 2, 1), DimensionMismatch);
}

TEST(Pipeline, WitnessJson) {
  const auto j = witness_to_json(run_pipeline(parse_rep("nonzero:Z2^4", 2), 2, 1));
  for (const char* key : {"level", "rep", "step1", "xi_before", "xi_after", "case", "R", "zeta", "dimW",
                          "predicted_dimW", "residual", "fallback"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["dimW"], 3);
  EXPECT_EQ(j["fallback"], false);
}
