#include "rache/radix.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "rache/errors.hpp"
#include "rache/parallel.hpp"

namespace rache::radix {

namespace {

void check_radix(std::uint64_t radix) {
  if (radix < 2) {
    throw DomainError("radix must be at least 2, got " + std::to_string(radix));
  }
}

void check_in_cache(const RadixCache& cache, std::uint64_t x,
                    std::size_t index) {
  if (x > cache.max_value()) {
    throw OutOfCacheRangeError(
        "value " + std::to_string(x) + " at index " + std::to_string(index) +
            " exceeds cache maximum " + std::to_string(cache.max_value()),
        index);
  }
}

// Bits needed for the product of two values below n^2.
std::size_t product_bits(const PublicKey& pk) {
  return 2 * bigint::bit_length(pk.n_squared) + 64;
}

}  // namespace

std::uint64_t DigitVector::digit_sum() const {
  std::uint64_t sum = 0;
  for (std::uint64_t d : digits) sum += d;
  return sum;
}

DigitVector decompose(std::uint64_t x, std::uint64_t radix) {
  check_radix(radix);
  DigitVector out{radix, {}};
  do {
    out.digits.push_back(x % radix);
    x /= radix;
  } while (x > 0);
  return out;
}

std::uint64_t recompose(const DigitVector& d) {
  check_radix(d.radix);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value = 0;
  // Horner from the most significant digit.
  for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
    if (*it >= d.radix) {
      throw DomainError("digit " + std::to_string(*it) + " out of range for radix " +
                        std::to_string(d.radix));
    }
    if (value > (kMax - *it) / d.radix) {
      throw DomainError("recomposed value overflows 64 bits");
    }
    value = value * d.radix + *it;
  }
  return value;
}

std::size_t floor_log(std::uint64_t m, std::uint64_t radix) {
  check_radix(radix);
  if (m == 0) throw DomainError("floor_log of zero");
  std::size_t k = 0;
  unsigned __int128 power = radix;
  while (power <= m) {
    ++k;
    power *= radix;
  }
  return k;
}

RadixCache RadixCache::build(const PublicKey& pk, std::uint64_t radix,
                             std::uint64_t max_value, EntropySource& entropy) {
  check_radix(radix);
  if (bigint::from_u64(max_value) >= pk.n) {
    throw DomainError("cache maximum " + std::to_string(max_value) +
                      " is outside the message space");
  }
  RadixCache cache;
  cache.key_ = pk;
  cache.radix_ = radix;
  cache.max_value_ = max_value;
  if (max_value > 0) {
    const std::size_t top = floor_log(max_value, radix);
    cache.entries_.reserve(top + 1);
    std::uint64_t power = 1;
    for (std::size_t i = 0; i <= top; ++i) {
      cache.entries_.push_back(paillier::encrypt(pk, power, entropy));
      ++cache.init_encryptions_;
      if (i < top) power *= radix;
    }
  }
  cache.zero_ = paillier::encrypt(pk, std::uint64_t{0}, entropy);
  ++cache.init_encryptions_;
  return cache;
}

EncodeStats rache_encrypt_into(const RadixCache& cache, std::uint64_t x,
                               Ciphertext& out, bigint::Int& scratch) {
  check_in_cache(cache, x, 0);
  EncodeStats stats;
  if (x == 0) {
    out.value = cache.zero().value;
    stats.cache_hits = 1;
    return stats;
  }
  const auto entries = cache.entries();
  const std::uint64_t radix = cache.radix();
  bool started = false;
  for (std::size_t k = 0; x > 0; ++k, x /= radix) {
    const std::uint64_t digit = x % radix;
    for (std::uint64_t j = 0; j < digit; ++j) {
      if (!started) {
        mpz_set(out.value.get_mpz_t(), entries[k].value.get_mpz_t());
        started = true;
      } else {
        paillier::he_add_into(cache.key(), out, entries[k], scratch);
        ++stats.additions;
      }
    }
    stats.cache_hits += digit;
  }
  return stats;
}

Encoded rache_encrypt(const RadixCache& cache, std::uint64_t x) {
  Encoded out;
  bigint::Int scratch;
  out.stats = rache_encrypt_into(cache, x, out.ciphertext, scratch);
  return out;
}

Encoded rache_encrypt(const RadixCache& cache, std::uint64_t x,
                      EntropySource& rerandomizer) {
  Encoded out = rache_encrypt(cache, x);
  out.ciphertext =
      paillier::rerandomize(cache.key(), out.ciphertext, rerandomizer);
  return out;
}

std::vector<Ciphertext> allocate_ciphertexts(const PublicKey& pk,
                                             std::size_t count) {
  std::vector<Ciphertext> out(count);
  const std::size_t bits = bigint::bit_length(pk.n_squared) + 64;
  for (auto& c : out) mpz_realloc2(c.value.get_mpz_t(), bits);
  return out;
}

EncodeStats rache_encrypt_batch_into(const RadixCache& cache,
                                     std::span<const std::uint64_t> xs,
                                     std::span<Ciphertext> out,
                                     unsigned workers,
                                     const BatchOptions& options) {
  if (workers == 0) throw DomainError("workers must be at least 1");
  if (out.size() != xs.size()) {
    throw DomainError("output span size does not match input");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) check_in_cache(cache, xs[i], i);

  const EntropyFactory factory =
      options.entropy ? options.entropy : system_entropy_factory();
  std::vector<EncodeStats> per_worker(workers);
  for_each_chunk(xs.size(), workers,
                 [&](unsigned worker, std::size_t begin, std::size_t end) {
                   if (begin == end) return;
                   bigint::Int scratch;
                   mpz_realloc2(scratch.get_mpz_t(), product_bits(cache.key()));
                   std::unique_ptr<EntropySource> entropy;
                   if (options.randomize) entropy = factory(worker);
                   EncodeStats local;
                   for (std::size_t i = begin; i < end; ++i) {
                     local += rache_encrypt_into(cache, xs[i], out[i], scratch);
                     if (entropy) {
                       out[i] = paillier::rerandomize(cache.key(), out[i],
                                                      *entropy);
                     }
                   }
                   per_worker[worker] = local;
                 });
  EncodeStats total;
  for (const auto& s : per_worker) total += s;
  return total;
}

BatchResult rache_encrypt_batch(const RadixCache& cache,
                                std::span<const std::uint64_t> xs,
                                unsigned workers,
                                const BatchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  BatchResult result;
  result.ciphertexts = allocate_ciphertexts(cache.key(), xs.size());
  result.stats =
      rache_encrypt_batch_into(cache, xs, result.ciphertexts, workers, options);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

double worst_case_additions(std::uint64_t radix, std::uint64_t max_value) {
  check_radix(radix);
  if (max_value < 2) {
    throw DomainError("worst_case_additions needs max_value >= 2");
  }
  // When m + 1 is an exact power of r the model is an integer; compute that
  // case in integers so callers can compare exactly.
  unsigned __int128 power = radix;
  std::uint64_t exponent = 1;
  const unsigned __int128 target = static_cast<unsigned __int128>(max_value) + 1;
  while (power < target) {
    power *= radix;
    ++exponent;
  }
  if (power == target) {
    return static_cast<double>(radix - 1) * static_cast<double>(exponent) - 1.0;
  }
  const double log_r = std::log2(static_cast<double>(max_value) + 1.0) /
                       std::log2(static_cast<double>(radix));
  return static_cast<double>(radix - 1) * log_r - 1.0;
}

std::uint64_t optimal_radix(std::uint64_t max_value, std::uint64_t r_max) {
  check_radix(r_max);
  std::uint64_t best = 2;
  double best_cost = worst_case_additions(2, max_value);
  for (std::uint64_t r = 3; r <= r_max; ++r) {
    const double cost = worst_case_additions(r, max_value);
    if (cost < best_cost) {
      best = r;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace rache::radix
