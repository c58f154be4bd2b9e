#include <gtest/gtest.h>

#include <vector>

#include "rache/bigint.hpp"
#include "rache/errors.hpp"

namespace rache::bigint {
namespace {

std::vector<bool> sieve(std::size_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = prime[1] = false;
  for (std::size_t i = 2; i * i <= limit; ++i) {
    if (!prime[i]) continue;
    for (std::size_t j = i * i; j <= limit; j += i) prime[j] = false;
  }
  return prime;
}

TEST(BigInt, HexIsLowercaseUnpadded) {
  EXPECT_EQ(to_hex(Int(0)), "0");
  EXPECT_EQ(to_hex(Int(255)), "ff");
  EXPECT_EQ(to_hex(Int(4096)), "1000");
  EXPECT_EQ(from_hex("deadBEEF"), Int(0xdeadbeefU));
}

TEST(BigInt, RejectsMalformedText) {
  EXPECT_THROW(from_hex(""), FormatError);
  EXPECT_THROW(from_hex("12g4"), FormatError);
  EXPECT_THROW(from_hex("-1"), FormatError);
  EXPECT_THROW(from_decimal("1e5"), FormatError);
  EXPECT_THROW(from_decimal(" 7"), FormatError);
}

TEST(BigInt, U64Conversions) {
  const std::uint64_t big = 0xfedcba9876543210ULL;
  EXPECT_EQ(to_u64(from_u64(big)), big);
  EXPECT_EQ(to_hex(from_u64(big)), "fedcba9876543210");
  Int too_big = from_u64(big);
  too_big <<= 1;
  EXPECT_THROW(to_u64(too_big), DomainError);
}

TEST(BigInt, ModexpMatchesRepeatedMultiplication) {
  for (unsigned base = 0; base < 20; ++base) {
    for (unsigned exp = 0; exp < 20; ++exp) {
      unsigned long expected = 1 % 97;
      for (unsigned i = 0; i < exp; ++i) expected = expected * base % 97;
      EXPECT_EQ(modexp(Int(base), Int(exp), Int(97)), Int(expected));
    }
  }
  EXPECT_THROW(modexp(Int(2), Int(3), Int(0)), DomainError);
  EXPECT_THROW(modexp(Int(2), Int(-1), Int(7)), DomainError);
}

TEST(BigInt, MillerRabinAgreesWithSieve) {
  DeterministicTestEntropy entropy(1);
  const auto prime = sieve(5000);
  for (unsigned n = 0; n <= 5000; ++n) {
    EXPECT_EQ(is_probable_prime(Int(n), 40, entropy), prime[n]) << n;
  }
}

TEST(BigInt, MillerRabinOnKnownValues) {
  DeterministicTestEntropy entropy(2);
  // Carmichael numbers fool Fermat but not Miller-Rabin.
  for (unsigned c : {561u, 1105u, 1729u, 2465u, 2821u, 6601u, 8911u}) {
    EXPECT_FALSE(is_probable_prime(Int(c), 40, entropy)) << c;
  }
  Int mersenne127 = 1;
  mersenne127 <<= 127;
  mersenne127 -= 1;
  EXPECT_TRUE(is_probable_prime(mersenne127, 40, entropy));
  Int mersenne128 = 1;
  mersenne128 <<= 128;
  mersenne128 -= 1;
  EXPECT_FALSE(is_probable_prime(mersenne128, 40, entropy));
}

TEST(BigInt, RandomBelowStaysInRange) {
  DeterministicTestEntropy entropy(3);
  const Int bound(1000);
  std::vector<int> seen(1000, 0);
  for (int i = 0; i < 20000; ++i) {
    const Int v = random_below(entropy, bound);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, bound);
    ++seen[v.get_ui()];
  }
  for (int count : seen) EXPECT_GT(count, 0);
  EXPECT_THROW(random_below(entropy, Int(0)), DomainError);
}

TEST(BigInt, RandomUnitIsCoprime) {
  DeterministicTestEntropy entropy(4);
  const Int n(2 * 3 * 5 * 7 * 11);
  for (int i = 0; i < 500; ++i) {
    const Int u = random_unit(entropy, n);
    Int g;
    mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), n.get_mpz_t());
    EXPECT_EQ(g, 1);
    EXPECT_GT(u, 0);
  }
}

TEST(BigInt, DeterministicEntropyIsReproducible) {
  DeterministicTestEntropy a(99);
  DeterministicTestEntropy b(99);
  EXPECT_EQ(random_bits(a, 300), random_bits(b, 300));
  DeterministicTestEntropy c(100);
  EXPECT_NE(random_bits(a, 300), random_bits(c, 300));
  EXPECT_LE(bit_length(random_bits(c, 300)), 300u);
}

}  // namespace
}  // namespace rache::bigint
