#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sl4/reps.hpp"

using namespace sl4;

namespace {

std::vector<ModMatrix> block_elements(int modulus) {
  std::vector<ModMatrix> out;
  const GroupStore g = special_linear_group(2, modulus);
  for (std::size_t k = 0; k < g.order(); ++k) out.push_back(embed_sl2(g.element(k)));
  return out;
}

std::vector<ModMatrix> block_generators(int modulus) {
  return {embed_sl2(ModMatrix::from_rows(modulus, {{1, 1}, {0, 1}})),
          embed_sl2(ModMatrix::from_rows(modulus, {{1, 0}, {1, 1}}))};
}

ModMatrix random_element(std::mt19937_64& rng, int modulus) {
  ModMatrix g = ModMatrix::identity(4, modulus);
  for (int k = 0; k < 8; ++k) {
    const int i = 1 + static_cast<int>(rng() % 4);
    const int j = 1 + (i + static_cast<int>(rng() % 3)) % 4;
    g = g * elementary(i, j, static_cast<long long>(rng() % modulus), 4, modulus);
  }
  return g;
}

}  // namespace

TEST(Reps, PermutationRepsAreUnitaryHomomorphisms) {
  std::mt19937_64 rng(5);
  for (auto [text, level] : std::vector<std::pair<std::string, int>>{
           {"nonzero:Z2^4", 2}, {"Z4^4", 4}, {"Z2^4", 4}, {"cosets:SL3_block", 2}, {"trivial:3", 4}}) {
    const UnitaryRep rep = parse_rep(text, level);
    for (int trial = 0; trial < 10; ++trial) {
      const ModMatrix g = random_element(rng, level);
      const ModMatrix h = random_element(rng, level);
      EXPECT_LT(homomorphism_defect(rep, g, h), 1e-12) << text;
      EXPECT_LT(unitarity_defect(rep, g), 1e-12) << text;
    }
  }
}

TEST(Reps, Dimensions) {
  EXPECT_EQ(parse_rep("nonzero:Z2^4", 2).dim(), 15);
  EXPECT_EQ(parse_rep("Z4^4", 4).dim(), 256);
  EXPECT_EQ(parse_rep("cosets:SL3_block", 2).dim(), 120);
  EXPECT_EQ(parse_rep(R"({"sum":["trivial","nonzero:Z2^4"]})", 2).dim(), 16);
  EXPECT_EQ(parse_rep(R"({"tensor":["Z2^4","nonzero:Z2^4"]})", 2).dim(), 240);
  EXPECT_EQ(parse_rep(R"({"type":"perm","space":"Z2^4","level":4})", 2).level(), 4);
}

TEST(Reps, DescriptorErrors) {
  EXPECT_THROW(parse_rep("bogus", 2), DescriptorError);
  EXPECT_THROW(parse_rep("{bad json", 2), DescriptorError);
  EXPECT_THROW(parse_rep(R"({"type":"perm"})", 2), DescriptorError);
  EXPECT_THROW(parse_rep(R"({"sum":[]})", 2), DescriptorError);
  EXPECT_THROW(parse_rep("trivial:x", 2), DescriptorError);
}

TEST(Reps, ProjectorRankIsOrbitCount) {
  const Projector p2 = invariant_projector(parse_rep("nonzero:Z2^4", 2), block_elements(2));
  EXPECT_EQ(p2.rank, 7);
  EXPECT_EQ(p2.rank, oracle::vector_orbits(block_generators(2), 2, true));
  const Projector p4 = invariant_projector(parse_rep("Z4^4", 4), block_elements(4));
  EXPECT_EQ(p4.rank, oracle::vector_orbits(block_generators(4), 4, false));
  EXPECT_EQ(p4.rank, 48);
  // P is an orthogonal projection
  EXPECT_LT((p2.matrix * p2.matrix - p2.matrix).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((p2.matrix.adjoint() - p2.matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reps, ConjugatedRep) {
  const UnitaryRep rep = parse_rep("nonzero:Z2^4", 2);
  const ModMatrix m = elementary(1, 3, 1, 4, 2) * elementary(3, 2, 1, 4, 2);
  const UnitaryRep c = conjugated(rep, m);
  const ModMatrix g = elementary(2, 4, 1, 4, 2);
  EXPECT_LT((c(g) - rep(m * g * invert(m))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Reps, CompressKeepsInvariantSubspace) {
  const UnitaryRep rep = parse_rep("nonzero:Z2^4", 2);
  // the all-ones vector spans an invariant line
  const CMatrix q = CMatrix::Ones(15, 1) / std::sqrt(15.0);
  const UnitaryRep line = compress(rep, q);
  EXPECT_EQ(line.dim(), 1);
  EXPECT_NEAR(std::abs(line(elementary(1, 2, 1, 4, 2))(0, 0) - 1.0), 0.0, 1e-12);
}

TEST(Isotypic, U1SplitOfVectorModule) {
  const int q = 4;
  const UnitaryRep rep = parse_rep("Z4^4", q);
  const std::vector<ModMatrix> gens{elementary(1, 4, 1, 4, q), elementary(2, 4, 1, 4, q), elementary(3, 4, 1, 4, q)};
  const IsotypicDecomposition d = isotypic_split(rep, gens, q, "U1");
  EXPECT_EQ(d.total_dim(), 256);
  EXPECT_LT(d.max_residual, 1e-8);
  EXPECT_LT(d.orthonormality_defect, 1e-8);
  for (const auto& c : d.components) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const CMatrix diff = rep(gens[k]) * c.basis - c.label.eigenvalue(k) * c.basis;
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-8);
    }
  }
  // orthogonal components in distinct labels
  for (std::size_t a = 1; a < d.components.size(); ++a) EXPECT_LT(d.components[a - 1].label, d.components[a].label);
  EXPECT_NE(d.find({0, 0, 0}), nullptr);
}

TEST(Isotypic, NonCommutingRejected) {
  const UnitaryRep rep = parse_rep("nonzero:Z2^4", 2);
  const std::vector<ModMatrix> gens{elementary(1, 2, 1, 4, 2), elementary(2, 1, 1, 4, 2)};
  EXPECT_THROW(isotypic_split(rep, gens, 2, "bad"), NonCommutingGenerators);
}

TEST(Isotypic, InsideSubspace) {
  const int q = 2;
  const UnitaryRep rep = parse_rep("Z2^4", q);
  const std::vector<ModMatrix> u1{elementary(1, 4, 1, 4, q), elementary(2, 4, 1, 4, q), elementary(3, 4, 1, 4, q)};
  const IsotypicDecomposition d = isotypic_split(rep, u1, q, "U1");
  const IsotypicComponent* c = d.find({0, 0, 1});
  ASSERT_NE(c, nullptr);
  const std::vector<ModMatrix> u2{elementary(1, 3, 1, 4, q), elementary(2, 3, 1, 4, q)};
  const IsotypicDecomposition inner = isotypic_split(rep, u2, q, "U2", &c->basis);
  EXPECT_EQ(inner.total_dim(), static_cast<int>(c->basis.cols()));
}

// Invariants of a tensor product over a product group multiply.
TEST(TensorInvariants, RanksMultiply) {
  const auto h2 = block_elements(2);
  struct Case {
    std::string a;
    std::string b;
  };
  for (const auto& c : std::vector<Case>{{"nonzero:Z2^4", "Z2^4"}, {"trivial:2", "nonzero:Z2^4"}, {"Z2^4", "Z2^4"}}) {
    const TensorInvariantCheck t = tensor_invariants_property(parse_rep(c.a, 2), h2, parse_rep(c.b, 2), h2);
    EXPECT_TRUE(t.holds()) << c.a << " x " << c.b;
    EXPECT_GT(t.rank_a, 0);
  }
  const GroupStore g3 = special_linear_group(2, 3);
  std::vector<ModMatrix> h3;
  for (std::size_t k = 0; k < g3.order(); ++k) h3.push_back(embed_sl2(g3.element(k)));
  const TensorInvariantCheck mixed = tensor_invariants_property(parse_rep("nonzero:Z2^4", 2), h2,
                                                                parse_rep("nonzero:Z3^4", 3), h3);
  EXPECT_TRUE(mixed.holds());
  EXPECT_EQ(mixed.rank_a, 7);
}
