#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rache/bigint.hpp"
#include "rache/entropy.hpp"

// Paillier cryptosystem with g = n + 1.
//
// Ciphertexts live in Z*_{n^2}; plaintexts in [0, n). The homomorphic
// addition he_add is multiplication modulo n^2. Key material and
// ciphertexts are immutable values and may be shared freely across threads.
namespace rache::paillier {

using bigint::Int;

inline constexpr int kMillerRabinRounds = 40;
inline constexpr std::size_t kMinKeyBits = 256;
inline constexpr std::size_t kDefaultKeyBits = 2048;

struct PublicKey {
  Int n;
  Int n_squared;
  Int g;
  std::size_t key_bits = 0;

  // Derives n^2, g and key_bits from the modulus.
  static PublicKey from_modulus(const Int& n);

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct PrivateKey {
  Int lambda;  // lcm(p - 1, q - 1)
  Int mu;      // L(g^lambda mod n^2)^-1 mod n
  Int n;

  friend bool operator==(const PrivateKey&, const PrivateKey&) = default;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

struct Ciphertext {
  Int value;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// Generates p != q, each a probable prime of key_bits / 2 bits with the top
// two bits set, so n has exactly key_bits bits. key_bits must be even and at
// least kMinKeyBits.
KeyPair keygen(std::size_t key_bits, EntropySource& entropy);

// c = (1 + m n) * rho^n mod n^2 for a fresh unit rho.
Ciphertext encrypt(const PublicKey& pk, const Int& m, EntropySource& entropy);
Ciphertext encrypt(const PublicKey& pk, std::uint64_t m,
                   EntropySource& entropy);

Int decrypt(const PrivateKey& sk, const Ciphertext& c);

// Decrypts to (m1 + m2) mod n.
Ciphertext he_add(const PublicKey& pk, const Ciphertext& a,
                  const Ciphertext& b);

// acc <- acc * rhs mod n^2 without allocating when `acc` and `scratch`
// already hold enough limbs. Operands are not validated.
void he_add_into(const PublicKey& pk, Ciphertext& acc, const Ciphertext& rhs,
                 Int& scratch);

// Multiplies by a fresh encryption of zero.
Ciphertext rerandomize(const PublicKey& pk, const Ciphertext& c,
                       EntropySource& entropy);

// 0 < value < n^2 and gcd(value, n) = 1.
bool is_valid(const PublicKey& pk, const Ciphertext& c);

// Encrypts every value with `workers` threads over contiguous chunks. Each
// worker draws its randomness from factory(worker).
std::vector<Ciphertext> encrypt_batch(const PublicKey& pk,
                                      std::span<const std::uint64_t> values,
                                      unsigned workers,
                                      const EntropyFactory& factory);

// Process-wide operation counters. Relaxed atomics; a snapshot taken while
// other threads are encrypting is only approximate.
struct OpCounts {
  std::uint64_t encryptions = 0;
  std::uint64_t additions = 0;
};
OpCounts op_counts();

}  // namespace rache::paillier
