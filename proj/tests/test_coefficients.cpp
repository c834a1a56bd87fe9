#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace kronlab;

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker(Partition({2, 2}), Partition({2, 2}), Partition({2, 2})), 1);
  EXPECT_EQ(kronecker(Partition({1, 1}), Partition({1, 1}), Partition({1, 1})), 0);
  Partition l({8, 2, 2, 2, 2, 2});
  EXPECT_EQ(kronecker(l, l, Partition({6, 6, 6})), 8);
  EXPECT_GT(kronecker(Partition({3, 3, 3}), Partition({3, 3, 3}), Partition({3, 3, 3})), 0);
  EXPECT_EQ(kronecker(Partition{}, Partition{}, Partition{}), 1);
  for (int n = 1; n <= 7; ++n)
    for (const auto& lambda : partitions_of(n)) EXPECT_EQ(kronecker(Partition({n}), lambda, lambda), 1);
}

TEST(Kronecker, SizeMismatch) {
  EXPECT_THROW(kronecker(Partition({2}), Partition({1}), Partition({2})), std::invalid_argument);
}

TEST(Kronecker, MatchesPermutationSum) {
  for (int n = 1; n <= 6; ++n) {
    const auto& ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        for (const auto& c : ps) EXPECT_EQ(kronecker(a, b, c), oracle::kronecker_bruteforce(a, b, c));
  }
}

TEST(Kronecker, SymmetriesExhaustive) {
  for (int n = 1; n <= 8; ++n) {
    const auto& ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        for (const auto& c : ps) {
          BigInt g = kronecker(a, b, c);
          ASSERT_GE(g, 0);
          EXPECT_EQ(kronecker(b, a, c), g);
          EXPECT_EQ(kronecker(a, c, b), g);
          EXPECT_EQ(kronecker(c, b, a), g);
          EXPECT_EQ(kronecker(b, c, a), g);
          EXPECT_EQ(kronecker(c, a, b), g);
          EXPECT_EQ(kronecker(conjugate(a), conjugate(b), c), g);
          EXPECT_EQ(kronecker(a, conjugate(b), conjugate(c)), g);
        }
  }
}

TEST(Kronecker, DvirBound) {
  for (int n = 1; n <= 8; ++n) {
    const auto& ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        for (const auto& c : ps)
          if (kronecker(a, b, c) > 0) {
            EXPECT_LE(durfee(a), 2 * durfee(b) * durfee(c));
          }
  }
}

TEST(Kronecker, Semigroup) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int attempt = 0; attempt < 4000 && checked < 300; ++attempt) {
    int n = 1 + static_cast<int>(rng() % 7);
    int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(12 - n));
    auto l = oracle::random_partition(rng, n), mu = oracle::random_partition(rng, n),
         nu = oracle::random_partition(rng, n);
    auto a = oracle::random_partition(rng, m), b = oracle::random_partition(rng, m),
         c = oracle::random_partition(rng, m);
    if (kronecker(a, b, c) == 0) continue;
    ++checked;
    EXPECT_GE(kronecker(add(l, a), add(mu, b), add(nu, c)), kronecker(l, mu, nu));
  }
  EXPECT_GE(checked, 100);
}

TEST(Kronecker, ScalingMonotone) {
  int checked = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto& ps = partitions_of(n);
    for (const auto& a : ps)
      for (const auto& b : ps)
        for (const auto& c : ps) {
          BigInt g1 = kronecker(a, b, c);
          if (g1 == 0) continue;
          ++checked;
          BigInt g2 = kronecker(scale(2, a), scale(2, b), scale(2, c));
          EXPECT_GE(g2, g1);
          EXPECT_GE(kronecker(scale(3, a), scale(3, b), scale(3, c)), g2);
        }
  }
  EXPECT_GT(checked, 20);
}

TEST(Lr, Examples) {
  for (int n = 0; n <= 6; ++n)
    for (const auto& l : partitions_of(n)) EXPECT_EQ(lr(l, l, Partition{}), 1);
  EXPECT_EQ(lr(Partition({2, 1}), Partition({1}), Partition({1, 1})), 1);
  EXPECT_EQ(lr(Partition({3, 2, 1}), Partition({2, 1}), Partition({2, 1})), 2);
  EXPECT_EQ(lr(Partition({2, 2}), Partition({3}), Partition({1})), 0);
  EXPECT_THROW(lr(Partition({2, 1}), Partition({1}), Partition({1})), std::invalid_argument);
}

TEST(Lr, MatchesInducedCharacterOracle) {
  for (int n = 0; n <= 8; ++n)
    for (const auto& l : partitions_of(n))
      for (int k = 0; k <= n; ++k)
        for (const auto& mu : partitions_of(k))
          for (const auto& nu : partitions_of(n - k))
            EXPECT_EQ(lr(l, mu, nu), oracle::lr_induced(l, mu, nu)) << to_text(l) << " " << to_text(mu) << " " << to_text(nu);
}

TEST(Lr, SqrtBinomialBound) {
  for (int n = 0; n <= 10; ++n)
    for (const auto& l : partitions_of(n))
      for (int a = 0; a <= n; ++a)
        for (const auto& mu : partitions_of(a))
          for (const auto& nu : partitions_of(n - a)) {
            BigInt c = lr(l, mu, nu);
            EXPECT_LE(c * c, binomial(n, a));
            EXPECT_EQ(c, lr(l, nu, mu));
          }
}

TEST(Lr3, Examples) {
  EXPECT_EQ(lr3(Partition({2, 1}), Partition({1}), Partition({1}), Partition({1})), 2);
  for (const auto& l : partitions_of(5)) EXPECT_EQ(lr3(l, l, Partition{}, Partition{}), 1);
  EXPECT_THROW(lr3(Partition({2, 1}), Partition({1}), Partition({1}), Partition{}), std::invalid_argument);
}

TEST(Lr3, OracleAndSymmetry) {
  for (int n = 0; n <= 8; ++n)
    for (const auto& l : partitions_of(n))
      for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b)
          for (const auto& x : partitions_of(a))
            for (const auto& y : partitions_of(b))
              for (const auto& z : partitions_of(n - a - b)) {
                BigInt c = lr3(l, x, y, z);
                EXPECT_EQ(c, lr3(l, y, z, x));
                EXPECT_EQ(c, lr3(l, y, x, z));
                if (n <= 6) {
                  EXPECT_EQ(c, oracle::lr3_induced(l, x, y, z));
                }
              }
}

TEST(Lr3, TrinomialBound) {
  for (int n = 0; n <= 9; ++n)
    for (const auto& l : partitions_of(n))
      for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b) {
          std::vector<int> sizes{a, b, n - a - b};
          BigInt bound = multinomial(sizes);
          for (const auto& x : partitions_of(a))
            for (const auto& y : partitions_of(b))
              for (const auto& z : partitions_of(n - a - b)) {
                BigInt c = lr3(l, x, y, z);
                EXPECT_LE(c * c, bound);
                EXPECT_LE(c * c, pow_int(BigInt(3), static_cast<unsigned>(n)));
              }
        }
}
