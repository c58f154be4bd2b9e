#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rache/errors.hpp"
#include "rache/radix.hpp"
#include "test_support.hpp"

namespace rache::radix {
namespace {

using testing::test_keys;

// Digit j of x in base r as (x / r^j) % r, computed with explicit powers.
std::vector<std::uint64_t> digits_by_powers(std::uint64_t x, std::uint64_t r) {
  if (x == 0) return {0};
  std::vector<std::uint64_t> out;
  for (unsigned __int128 power = 1; power <= x; power *= r) {
    out.push_back(static_cast<std::uint64_t>((x / power) % r));
  }
  return out;
}

std::uint64_t digit_sum_oracle(std::uint64_t x, std::uint64_t r) {
  std::uint64_t sum = 0;
  for (auto d : digits_by_powers(x, r)) sum += d;
  return sum;
}

const RadixCache& shared_cache(std::uint64_t r, std::uint64_t m) {
  static std::map<std::pair<std::uint64_t, std::uint64_t>, RadixCache> caches;
  auto key = std::pair{r, m};
  auto it = caches.find(key);
  if (it == caches.end()) {
    SystemEntropy entropy;
    it = caches.emplace(key, cache_init(test_keys().pub, r, m, entropy)).first;
  }
  return it->second;
}

TEST(Decompose, KnownValues) {
  EXPECT_EQ(decompose(21, 2).digits, (std::vector<std::uint64_t>{1, 0, 1, 0, 1}));
  EXPECT_EQ(decompose(0, 2).digits, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(decompose(255, 16).digits, (std::vector<std::uint64_t>{15, 15}));
  EXPECT_EQ(decompose(255, 16).radix, 16u);
  EXPECT_THROW(decompose(5, 1), DomainError);
  EXPECT_THROW(decompose(5, 0), DomainError);
}

TEST(Decompose, MatchesPowerDivisionOracle) {
  for (std::uint64_t r : {2u, 3u, 7u, 10u, 16u, 1000u}) {
    for (std::uint64_t x = 0; x <= 5000; ++x) {
      const auto d = decompose(x, r);
      ASSERT_EQ(d.digits, digits_by_powers(x, r)) << x << " base " << r;
      for (auto digit : d.digits) ASSERT_LT(digit, r);
      if (x > 0) ASSERT_NE(d.digits.back(), 0u);
    }
  }
  const std::uint64_t max = UINT64_MAX;
  EXPECT_EQ(decompose(max, 2).digits.size(), 64u);
  EXPECT_EQ(recompose(decompose(max, 10)), max);
}

TEST(Recompose, InvertsDecompose) {
  EXPECT_EQ(recompose({2, {1, 0, 1, 0, 1}}), 21u);
  EXPECT_EQ(recompose({2, {0}}), 0u);
  for (std::uint64_t r : {2u, 3u, 10u, 16u}) {
    for (std::uint64_t x = 0; x <= 4096; ++x) {
      ASSERT_EQ(recompose(decompose(x, r)), x);
    }
  }
}

TEST(Recompose, RejectsInvalidDigitVectors) {
  EXPECT_THROW(recompose({2, {2}}), DomainError);
  EXPECT_THROW(recompose({1, {0}}), DomainError);
  EXPECT_THROW(recompose({2, std::vector<std::uint64_t>(65, 1)}), DomainError);
}

TEST(FloorLog, MatchesExactPowers) {
  EXPECT_EQ(floor_log(1, 2), 0u);
  EXPECT_EQ(floor_log(21, 2), 4u);
  EXPECT_EQ(floor_log(1024, 2), 10u);
  EXPECT_EQ(floor_log(1023, 2), 9u);
  EXPECT_EQ(floor_log(1000000000, 2), 29u);
  EXPECT_EQ(floor_log(UINT64_MAX, 2), 63u);
  EXPECT_EQ(floor_log(UINT64_MAX, UINT64_MAX), 1u);
  EXPECT_EQ(floor_log(999, 10), 2u);
  EXPECT_EQ(floor_log(1000, 10), 3u);
  EXPECT_THROW(floor_log(0, 2), DomainError);
}

TEST(CacheInit, EntriesEncryptRadixPowers) {
  const auto& keys = test_keys();
  SystemEntropy entropy;
  const auto cache = cache_init(keys.pub, 2, 21, entropy);
  ASSERT_EQ(cache.entries().size(), 5u);
  const std::vector<unsigned> expected{1, 2, 4, 8, 16};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(paillier::decrypt(keys.priv, cache.entries()[i]), expected[i]);
  }
  EXPECT_EQ(paillier::decrypt(keys.priv, cache.zero()), 0);
  EXPECT_EQ(cache.init_encryptions(), 6u);
  EXPECT_EQ(cache.radix(), 2u);
  EXPECT_EQ(cache.max_value(), 21u);
}

TEST(CacheInit, PowerOfTwoMaximum) {
  const auto& keys = test_keys();
  const auto& cache = shared_cache(2, 1024);
  ASSERT_EQ(cache.entries().size(), 11u);
  for (std::size_t i = 0; i < 11; ++i) {
    EXPECT_EQ(paillier::decrypt(keys.priv, cache.entries()[i]),
              bigint::from_u64(std::uint64_t{1} << i));
  }
}

TEST(CacheInit, CountsEncryptionsExactly) {
  const auto& pk = test_keys().pub;
  SystemEntropy entropy;
  for (auto [r, m] : {std::pair<std::uint64_t, std::uint64_t>{2, 1000000000},
                      {3, 4096}, {10, 99999}, {16, 255}, {7, 1}}) {
    const auto before = paillier::op_counts().encryptions;
    const auto cache = cache_init(pk, r, m, entropy);
    const auto performed = paillier::op_counts().encryptions - before;
    EXPECT_EQ(cache.entries().size(), floor_log(m, r) + 1);
    EXPECT_EQ(performed, floor_log(m, r) + 2);
    EXPECT_EQ(cache.init_encryptions(), performed);
  }
}

TEST(CacheInit, DegenerateAndInvalidMaxima) {
  const auto& keys = test_keys();
  SystemEntropy entropy;
  const auto empty = cache_init(keys.pub, 2, 0, entropy);
  EXPECT_TRUE(empty.entries().empty());
  EXPECT_EQ(empty.init_encryptions(), 1u);
  EXPECT_EQ(rache_encrypt(empty, 0).ciphertext, empty.zero());
  EXPECT_THROW(rache_encrypt(empty, 1), OutOfCacheRangeError);

  EXPECT_THROW(cache_init(keys.pub, 1, 10, entropy), DomainError);
  // A toy modulus n = 3 * 5 makes m >= n reachable.
  const auto tiny = paillier::PublicKey::from_modulus(15);
  EXPECT_THROW(cache_init(tiny, 2, 15, entropy), DomainError);
  EXPECT_NO_THROW(cache_init(tiny, 2, 14, entropy));
}

TEST(RacheEncrypt, TwentyOneTakesTwoAdditions) {
  const auto& keys = test_keys();
  const auto& cache = shared_cache(2, 31);
  const auto encoded = rache_encrypt(cache, 21);
  EXPECT_EQ(paillier::decrypt(keys.priv, encoded.ciphertext), 21);
  EXPECT_EQ(encoded.stats.additions, 2u);
  EXPECT_EQ(encoded.stats.cache_hits, 3u);
}

TEST(RacheEncrypt, ZeroIsTheCachedZero) {
  const auto& cache = shared_cache(2, 31);
  const auto encoded = rache_encrypt(cache, 0);
  EXPECT_EQ(encoded.ciphertext, cache.zero());
  EXPECT_EQ(encoded.stats.additions, 0u);
}

TEST(RacheEncrypt, RejectsValuesAboveCacheMaximum) {
  const auto& cache = shared_cache(2, 31);
  EXPECT_THROW(rache_encrypt(cache, 32), OutOfCacheRangeError);
}

TEST(RacheEncrypt, ExhaustiveAgainstDecryptOracle) {
  const auto& keys = test_keys();
  const auto& cache = shared_cache(2, 4096);
  for (std::uint64_t x = 0; x <= 4096; ++x) {
    const auto encoded = rache_encrypt(cache, x);
    ASSERT_EQ(paillier::decrypt(keys.priv, encoded.ciphertext), x) << x;
  }
}

TEST(RacheEncrypt, AdditionCountMatchesDigitSumAndCostModel) {
  for (std::uint64_t r : {2u, 3u, 10u}) {
    const std::uint64_t m = 4096;
    const auto& cache = shared_cache(r, m);
    const double bound = std::ceil(worst_case_additions(r, m));
    for (std::uint64_t x = 1; x <= m; ++x) {
      const auto before = paillier::op_counts().additions;
      const auto stats = rache_encrypt(cache, x).stats;
      const auto counted = paillier::op_counts().additions - before;
      const std::uint64_t expected = digit_sum_oracle(x, r) - 1;
      ASSERT_EQ(stats.additions, expected) << x << " base " << r;
      ASSERT_EQ(counted, expected) << x << " base " << r;
      ASSERT_EQ(stats.cache_hits, digit_sum_oracle(x, r));
      ASSERT_LE(static_cast<double>(expected), bound);
    }
  }
}

TEST(RacheEncrypt, WorstCaseIsAttainedAtAllMaxDigits) {
  // m = r^(k+1) - 1 has every digit r - 1.
  for (auto [r, k] : {std::pair<std::uint64_t, int>{2, 9}, {3, 5}, {4, 4}}) {
    std::uint64_t m = 1;
    for (int i = 0; i <= k; ++i) m *= r;
    --m;
    const auto& cache = shared_cache(r, m);
    const auto additions = rache_encrypt(cache, m).stats.additions;
    EXPECT_EQ(static_cast<double>(additions), worst_case_additions(r, m));
  }
}

TEST(RacheEncrypt, PerformsNoEncryption) {
  const auto& cache = shared_cache(2, 4096);
  const auto before = paillier::op_counts().encryptions;
  for (std::uint64_t x = 0; x < 500; ++x) rache_encrypt(cache, x);
  std::vector<std::uint64_t> xs(300, 4095);
  rache_encrypt_batch(cache, xs, 3);
  EXPECT_EQ(paillier::op_counts().encryptions, before);
}

TEST(RacheEncrypt, IsAPureFunctionWithoutRandomization) {
  const auto& cache = shared_cache(2, 4096);
  EXPECT_EQ(rache_encrypt(cache, 1234).ciphertext,
            rache_encrypt(cache, 1234).ciphertext);
}

TEST(RacheEncrypt, RerandomizedOutputStillDecrypts) {
  const auto& keys = test_keys();
  const auto& cache = shared_cache(2, 31);
  SystemEntropy entropy;
  const auto plain = rache_encrypt(cache, 21);
  const auto fresh = rache_encrypt(cache, 21, entropy);
  EXPECT_NE(fresh.ciphertext, plain.ciphertext);
  EXPECT_EQ(paillier::decrypt(keys.priv, fresh.ciphertext), 21);
  EXPECT_EQ(
      paillier::decrypt(keys.priv,
                        paillier::rerandomize(keys.pub, plain.ciphertext, entropy)),
      21);
}

TEST(RacheBatch, DecryptsMixedValues) {
  const auto& keys = test_keys();
  const auto& cache = shared_cache(2, 1024);
  const std::vector<std::uint64_t> xs{21, 0, 1024};
  const auto result = rache_encrypt_batch(cache, xs, 1);
  ASSERT_EQ(result.ciphertexts.size(), 3u);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(paillier::decrypt(keys.priv, result.ciphertexts[i]), xs[i]);
  }
  EXPECT_EQ(result.stats.additions, 2u);
  EXPECT_GE(result.elapsed_seconds, 0.0);
}

TEST(RacheBatch, WorkerCountDoesNotChangeOutput) {
  const auto& cache = shared_cache(2, 4096);
  std::vector<std::uint64_t> xs;
  for (std::uint64_t x = 0; x <= 4096; x += 7) xs.push_back(x);
  const auto one = rache_encrypt_batch(cache, xs, 1);
  for (unsigned workers : {2u, 3u, 4u, 16u}) {
    const auto many = rache_encrypt_batch(cache, xs, workers);
    EXPECT_EQ(many.ciphertexts, one.ciphertexts) << workers;
    EXPECT_EQ(many.stats, one.stats);
  }
}

TEST(RacheBatch, RandomizedBatchDecryptsAndDiffers) {
  const auto& keys = test_keys();
  const auto& cache = shared_cache(2, 1024);
  std::vector<std::uint64_t> xs(40, 21);
  BatchOptions options;
  options.randomize = true;
  const auto result = rache_encrypt_batch(cache, xs, 4, options);
  for (const auto& c : result.ciphertexts) {
    EXPECT_EQ(paillier::decrypt(keys.priv, c), 21);
  }
  EXPECT_NE(result.ciphertexts[0], result.ciphertexts[1]);

  options.entropy = deterministic_test_entropy_factory(5);
  EXPECT_EQ(rache_encrypt_batch(cache, xs, 4, options).ciphertexts,
            rache_encrypt_batch(cache, xs, 4, options).ciphertexts);
}

TEST(RacheBatch, ErrorNamesTheOffendingIndex) {
  const auto& cache = shared_cache(2, 31);
  const std::vector<std::uint64_t> xs{1, 2, 3, 40, 5, 99};
  try {
    rache_encrypt_batch(cache, xs, 2);
    FAIL() << "expected OutOfCacheRangeError";
  } catch (const OutOfCacheRangeError& e) {
    EXPECT_EQ(e.index(), 3u);
    EXPECT_NE(std::string(e.what()).find("index 3"), std::string::npos);
  }
  EXPECT_THROW(rache_encrypt_batch(cache, xs, 0), DomainError);
}

TEST(CostModel, KnownValues) {
  EXPECT_EQ(worst_case_additions(2, 7), 2.0);
  EXPECT_EQ(worst_case_additions(4, 15), 5.0);
  EXPECT_NEAR(worst_case_additions(2, 2), 0.5849625007211561, 1e-12);
  EXPECT_NEAR(worst_case_additions(3, 1000), 11.577239214556705, 1e-9);
  EXPECT_THROW(worst_case_additions(1, 10), DomainError);
  EXPECT_THROW(worst_case_additions(2, 1), DomainError);
}

TEST(CostModel, StrictlyIncreasingInRadix) {
  for (std::uint64_t m : {2ULL, 10ULL, 1000ULL, 1000000ULL, 1000000000ULL}) {
    for (std::uint64_t r = 2; r < 64; ++r) {
      EXPECT_LT(worst_case_additions(r, m), worst_case_additions(r + 1, m))
          << "m=" << m << " r=" << r;
    }
  }
}

TEST(CostModel, OptimalRadixIsTwo) {
  EXPECT_EQ(optimal_radix(2, 64), 2u);
  EXPECT_EQ(optimal_radix(1000000000, 64), 2u);
  EXPECT_EQ(optimal_radix(1024, 2), 2u);
  for (std::uint64_t m = 2; m < 3000; m += 13) EXPECT_EQ(optimal_radix(m, 64), 2u);
  EXPECT_THROW(optimal_radix(10, 1), DomainError);
}

}  // namespace
}  // namespace rache::radix
