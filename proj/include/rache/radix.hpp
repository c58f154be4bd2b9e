#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rache/entropy.hpp"
#include "rache/paillier.hpp"

// Radix-additive caching.
//
// A value x = sum_i d_i r^i is encrypted without any Paillier encryption:
// the cache holds he(r^0) ... he(r^k) for k = floor(log_r m), and he(x) is
// the homomorphic sum of d_i copies of he(r^i). Only the cache build pays
// for real encryptions.
namespace rache::radix {

using paillier::Ciphertext;
using paillier::PublicKey;

inline constexpr std::uint64_t kDefaultRadix = 2;

struct DigitVector {
  std::uint64_t radix = 2;
  // digits[i] is the coefficient of radix^i. Zero is the single digit {0}.
  std::vector<std::uint64_t> digits;

  std::uint64_t digit_sum() const;

  friend bool operator==(const DigitVector&, const DigitVector&) = default;
};

DigitVector decompose(std::uint64_t x, std::uint64_t radix);

// Throws DomainError if a digit is out of range or the sum overflows 64 bits.
std::uint64_t recompose(const DigitVector& d);

// floor(log_r m) computed in integers; m >= 1, r >= 2.
std::size_t floor_log(std::uint64_t m, std::uint64_t radix);

// Immutable table of encrypted radix powers plus one encryption of zero.
class RadixCache {
 public:
  // Performs floor(log_r m) + 2 encryptions (m >= 1) or one (m = 0).
  static RadixCache build(const PublicKey& pk, std::uint64_t radix,
                          std::uint64_t max_value, EntropySource& entropy);

  std::uint64_t radix() const { return radix_; }
  std::uint64_t max_value() const { return max_value_; }
  const PublicKey& key() const { return key_; }
  // entries()[i] encrypts radix^i.
  std::span<const Ciphertext> entries() const { return entries_; }
  const Ciphertext& zero() const { return zero_; }
  std::uint64_t init_encryptions() const { return init_encryptions_; }

 private:
  RadixCache() = default;

  PublicKey key_;
  std::uint64_t radix_ = 2;
  std::uint64_t max_value_ = 0;
  std::vector<Ciphertext> entries_;
  Ciphertext zero_;
  std::uint64_t init_encryptions_ = 0;
};

inline RadixCache cache_init(const PublicKey& pk, std::uint64_t radix,
                             std::uint64_t max_value, EntropySource& entropy) {
  return RadixCache::build(pk, radix, max_value, entropy);
}

struct EncodeStats {
  std::uint64_t additions = 0;
  // Number of cache entries folded in (the digit sum; 1 for the zero entry).
  std::uint64_t cache_hits = 0;

  EncodeStats& operator+=(const EncodeStats& o) {
    additions += o.additions;
    cache_hits += o.cache_hits;
    return *this;
  }
  friend bool operator==(const EncodeStats&, const EncodeStats&) = default;
};

struct Encoded {
  Ciphertext ciphertext;
  EncodeStats stats;
};

// Builds he(x) from cache entries with he_add only. Entries are folded in
// ascending index, starting from the first nonzero digit, so additions =
// digit_sum - 1. x = 0 returns the cached zero. Throws OutOfCacheRangeError
// when x > cache.max_value().
Encoded rache_encrypt(const RadixCache& cache, std::uint64_t x);

// Same, followed by one rerandomize so equal plaintexts no longer produce
// equal ciphertexts.
Encoded rache_encrypt(const RadixCache& cache, std::uint64_t x,
                      EntropySource& rerandomizer);

// Writes the encoding of x into `out`, reusing its storage. `scratch` must be
// distinct from out.
EncodeStats rache_encrypt_into(const RadixCache& cache, std::uint64_t x,
                               Ciphertext& out, bigint::Int& scratch);

struct BatchOptions {
  bool randomize = false;
  // Used only when randomize is set. Defaults to the system CSPRNG.
  EntropyFactory entropy;
};

struct BatchResult {
  std::vector<Ciphertext> ciphertexts;
  EncodeStats stats;
  double elapsed_seconds = 0.0;
};

// Ciphertext slots whose limbs are preallocated for products modulo n^2, so
// encoding into them does not touch the heap.
std::vector<Ciphertext> allocate_ciphertexts(const PublicKey& pk,
                                             std::size_t count);

// Checks every value first (error names the first offending index), then
// encodes xs[i] into out[i] across `workers` contiguous chunks.
EncodeStats rache_encrypt_batch_into(const RadixCache& cache,
                                     std::span<const std::uint64_t> xs,
                                     std::span<Ciphertext> out,
                                     unsigned workers,
                                     const BatchOptions& options = {});

// Allocates, encodes and times the whole call. Without randomization the
// output is bit-identical for every worker count.
BatchResult rache_encrypt_batch(const RadixCache& cache,
                                std::span<const std::uint64_t> xs,
                                unsigned workers,
                                const BatchOptions& options = {});

// Continuous worst-case addition count f(r) = (r-1) log_r(m+1) - 1.
double worst_case_additions(std::uint64_t radix, std::uint64_t max_value);

// argmin of worst_case_additions over [2, r_max], ties to the smaller radix.
std::uint64_t optimal_radix(std::uint64_t max_value, std::uint64_t r_max);

}  // namespace rache::radix
