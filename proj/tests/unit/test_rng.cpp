#include <gtest/gtest.h>

#include <random>

#include "love/error.hpp"
#include "love/rng.hpp"

namespace love {
namespace {

// Vectors printed by docs/rng_reference.py, a separate Python implementation.

TEST(Rng, EngineIsStandardMersenneTwister64) {
  std::mt19937_64 standard;
  standard.discard(9999);
  EXPECT_EQ(standard(), 9981545732273789042ULL);
  Rng r(5489);
  for (int i = 0; i < 9999; ++i) r.next_u64();
  EXPECT_EQ(r.next_u64(), 9981545732273789042ULL);
}

TEST(Rng, RawVectors) {
  Rng r(42);
  EXPECT_EQ(r.next_u64(), 13930160852258120406ULL);
  EXPECT_EQ(r.next_u64(), 11788048577503494824ULL);
  EXPECT_EQ(r.next_u64(), 13874630024467741450ULL);
}

TEST(Rng, UniformVectors) {
  Rng a(42);
  EXPECT_EQ(a.uniform01(), 0.755155532954539);
  EXPECT_EQ(a.uniform01(), 0.6390313938546974);
  EXPECT_EQ(a.uniform01(), 0.7521452007480266);
  Rng b(42);
  EXPECT_EQ(b.uniform(0.1, 10.0), 7.576039776249936);
  EXPECT_EQ(b.uniform(0.1, 10.0), 6.426410799161505);
  EXPECT_EQ(b.uniform(0.1, 10.0), 7.546237487405463);
}

TEST(Rng, CoinVectors) {
  Rng r(42);
  const bool expected[] = {true, true, true, false, true, false, true, false};
  for (bool e : expected) EXPECT_EQ(r.coin(), e);
}

TEST(Rng, BelowVectors) {
  Rng r(42);
  for (std::uint64_t e : {6, 4, 0, 2, 1, 8, 6, 4}) EXPECT_EQ(r.below(10), e);
  EXPECT_THROW(r.below(0), DomainError);
  EXPECT_EQ(r.below(1), 0u);
}

TEST(Rng, BelowStaysInRange) {
  Rng r(7);
  const std::uint64_t big = (1ULL << 63) + 12345;
  for (int i = 0; i < 10000; ++i) {
    ASSERT_LT(r.below(3), 3u);
    ASSERT_LT(r.below(big), big);
  }
}

TEST(Rng, UniformRange) {
  Rng r(8);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SeedDerivation, Vectors) {
  EXPECT_EQ(splitmix64(0), 16294208416658607535ULL);
  EXPECT_EQ(derive_seed(42, 0), 2949826092126892291ULL);
  EXPECT_EQ(derive_seed(42, 1), 5139283748462763858ULL);
  EXPECT_EQ(derive_seed(42, 2), 6349198060258255764ULL);
}

}  // namespace
}  // namespace love
