#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "rache/entropy.hpp"

// Thin layer over GMP. Nothing here is constant-time: this library is a
// benchmark artifact and must not be used where side channels matter.
namespace rache::bigint {

using Int = mpz_class;

// base^exponent mod modulus. Every modular exponentiation in the library
// goes through this routine.
Int modexp(const Int& base, const Int& exponent, const Int& modulus);

std::size_t bit_length(const Int& x);

Int from_u64(std::uint64_t v);

// Throws DomainError when x does not fit.
std::uint64_t to_u64(const Int& x);

// Lowercase, big-endian, no padding. Zero is "0".
std::string to_hex(const Int& x);
Int from_hex(std::string_view hex);

std::string to_decimal(const Int& x);
Int from_decimal(std::string_view dec);

// Uniform in [0, 2^bits).
Int random_bits(EntropySource& entropy, std::size_t bits);

// Uniform in [0, bound) by rejection sampling. bound must be positive.
Int random_below(EntropySource& entropy, const Int& bound);

// Uniform unit of Z_n: in [1, n) and coprime to n.
Int random_unit(EntropySource& entropy, const Int& n);

// Trial division by small primes followed by `rounds` Miller-Rabin rounds
// with bases drawn from `entropy`.
bool is_probable_prime(const Int& candidate, int rounds,
                       EntropySource& entropy);

}  // namespace rache::bigint
