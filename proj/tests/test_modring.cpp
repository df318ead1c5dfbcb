#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sl4/modring.hpp"

using namespace sl4;

namespace {

ModMatrix random_matrix(std::mt19937_64& rng, int n, int modulus) {
  ModMatrix m(n, modulus);
  std::uniform_int_distribution<int> d(0, modulus - 1);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.set(r, c, d(rng));
  return m;
}

}  // namespace

TEST(ModRing, ReduceAndInverse) {
  EXPECT_EQ(reduce_mod(-1, 4), 3);
  EXPECT_EQ(reduce_mod(9, 4), 1);
  EXPECT_EQ(mod_inverse(3, 4), 3);
  EXPECT_EQ(mod_inverse(2, 9), 5);
  EXPECT_THROW(mod_inverse(2, 4), NotInvertible);
  EXPECT_EQ(mod_pow(3, 4, 7), 81 % 7);
}

TEST(ModRing, Factorize) {
  const auto f = factorize(360);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0].prime, 2);
  EXPECT_EQ(f[0].exponent, 3);
  EXPECT_EQ(f[2].value(), 5);
  EXPECT_TRUE(factorize(1).empty());
  EXPECT_TRUE(is_prime(421));
  EXPECT_FALSE(is_prime(1));
}

TEST(ModRing, ElementaryMatrices) {
  const ModMatrix e = elementary(1, 4, 3, 4, 4);
  EXPECT_EQ(e(0, 3), 3);
  EXPECT_EQ(det_mod(e), 1);
  EXPECT_TRUE((e * elementary(1, 4, -3, 4, 4)).is_identity());
  EXPECT_THROW(elementary(2, 2, 1, 4, 4), std::invalid_argument);
  EXPECT_EQ(elementary_generators(4, 2).size(), 12u);
}

TEST(ModRing, DeterminantMatchesCofactorOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4;
    const ModMatrix m = random_matrix(rng, n, 12);
    std::vector<long long> v;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v.push_back(m(r, c));
    EXPECT_EQ(det_mod(m), reduce_mod(oracle::det(v, n), 12));
  }
}

TEST(ModRing, InverseOfUnimodular) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    ModMatrix m = ModMatrix::identity(4, 9);
    for (int k = 0; k < 6; ++k) {
      const int i = 1 + static_cast<int>(rng() % 4);
      const int j = 1 + (i + static_cast<int>(rng() % 3)) % 4;
      m = m * elementary(i, j, static_cast<long long>(rng() % 9), 4, 9);
    }
    EXPECT_TRUE((m * invert(m)).is_identity());
    EXPECT_TRUE((invert(m) * m).is_identity());
  }
}

TEST(ModRing, EncodeRoundTrip) {
  std::mt19937_64 rng(3);
  for (int modulus : {2, 3, 4, 9, 16}) {
    for (int trial = 0; trial < 100; ++trial) {
      const ModMatrix m = random_matrix(rng, 4, modulus);
      EXPECT_EQ(decode(encode(m), 4, modulus), m);
    }
  }
  EXPECT_EQ(bits_per_entry(2), 1);
  EXPECT_EQ(bits_per_entry(4), 2);
  EXPECT_EQ(bits_per_entry(5), 3);
  EXPECT_THROW(encode(ModMatrix::identity(4, 64)), std::exception);
}

TEST(ModRing, EmbedSl2) {
  const ModMatrix a = ModMatrix::from_rows(4, {{1, 1}, {0, 1}});
  const ModMatrix g = embed_sl2(a);
  EXPECT_EQ(g, elementary(1, 2, 1, 4, 4));
  EXPECT_THROW(embed_sl2(ModMatrix::from_rows(4, {{2, 0}, {0, 1}})), std::exception);
  EXPECT_EQ(embed_block(a, 4, 1), elementary(2, 3, 1, 4, 4));
}

TEST(ModRing, DimensionMismatchThrows) {
  EXPECT_THROW(ModMatrix::identity(3, 4) * ModMatrix::identity(4, 4), DimensionMismatch);
  EXPECT_THROW(ModMatrix::identity(4, 4) * ModMatrix::identity(4, 2), DimensionMismatch);
}

// Split/combine round trip and multiplicativity against componentwise
// reduction mod each prime power.
class CrtProperty : public ::testing::TestWithParam<int> {};

TEST_P(CrtProperty, RoundTripAndMultiplicative) {
  const int modulus = GetParam();
  const CrtSplitting crt(modulus);
  std::mt19937_64 rng(20240521 + modulus);
  for (int trial = 0; trial < 10000; ++trial) {
    const ModMatrix a = random_matrix(rng, 4, modulus);
    const ModMatrix b = random_matrix(rng, 4, modulus);
    const auto pa = crt_split(a, crt);
    ASSERT_EQ(pa.size(), crt.factors().size());
    for (std::size_t k = 0; k < pa.size(); ++k) {
      const int q = crt.factors()[k].value();
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) ASSERT_EQ(pa[k](r, c), a(r, c) % q);
    }
    ASSERT_EQ(crt_combine(pa, crt), a);
    const auto pb = crt_split(b, crt);
    const auto pab = crt_split(a * b, crt);
    for (std::size_t k = 0; k < pa.size(); ++k) ASSERT_EQ(pab[k], pa[k] * pb[k]);
  }
}

INSTANTIATE_TEST_SUITE_P(Moduli, CrtProperty, ::testing::Values(6, 12));
