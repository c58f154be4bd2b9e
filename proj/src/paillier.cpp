#include "rache/paillier.hpp"

#include <atomic>
#include <string>

#include "rache/errors.hpp"
#include "rache/parallel.hpp"

namespace rache::paillier {

namespace {

std::atomic<std::uint64_t> g_encryptions{0};
std::atomic<std::uint64_t> g_additions{0};

// Candidates tried per prime before giving up. A random odd 1024-bit number
// is prime with probability about 1/355.
constexpr std::size_t kPrimeCandidatesPerBit = 64;

Int gcd(const Int& a, const Int& b) {
  Int out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Int invert(const Int& a, const Int& modulus) {
  Int out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw KeyGenError("value is not invertible modulo n");
  }
  return out;
}

Int random_prime(std::size_t bits, EntropySource& entropy) {
  const std::size_t limit = kPrimeCandidatesPerBit * bits;
  for (std::size_t attempt = 0; attempt < limit; ++attempt) {
    Int candidate = bigint::random_bits(entropy, bits);
    // Top two bits force the product of two such primes to full length.
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (bigint::is_probable_prime(candidate, kMillerRabinRounds, entropy)) {
      return candidate;
    }
  }
  throw KeyGenError("no prime of " + std::to_string(bits) + " bits found in " +
                    std::to_string(limit) + " candidates");
}

// L(u) = (u - 1) / n
Int l_function(const Int& u, const Int& n) {
  Int out = u - 1;
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
  return out;
}

// g^m mod n^2 with g = n + 1 is 1 + m n.
Int generator_power(const PublicKey& pk, const Int& m) {
  Int out = m * pk.n + 1;
  if (out >= pk.n_squared) out %= pk.n_squared;
  return out;
}

void check_message(const PublicKey& pk, const Int& m) {
  if (m < 0 || m >= pk.n) {
    throw DomainError("plaintext outside message space [0, n)");
  }
}

void check_ciphertext(const PublicKey& pk, const Ciphertext& c) {
  if (!is_valid(pk, c)) {
    throw MalformedCiphertextError("ciphertext is not a unit modulo n^2");
  }
}

}  // namespace

PublicKey PublicKey::from_modulus(const Int& n) {
  if (n <= 1) throw DomainError("modulus must exceed 1");
  PublicKey pk;
  pk.n = n;
  pk.n_squared = n * n;
  pk.g = n + 1;
  pk.key_bits = bigint::bit_length(n);
  return pk;
}

KeyPair keygen(std::size_t key_bits, EntropySource& entropy) {
  if (key_bits < kMinKeyBits || key_bits % 2 != 0) {
    throw DomainError("key size must be even and at least " +
                      std::to_string(kMinKeyBits) + " bits, got " +
                      std::to_string(key_bits));
  }
  const std::size_t prime_bits = key_bits / 2;
  for (;;) {
    const Int p = random_prime(prime_bits, entropy);
    Int q = random_prime(prime_bits, entropy);
    while (q == p) q = random_prime(prime_bits, entropy);

    const Int n = p * q;
    if (gcd(n, (p - 1) * (q - 1)) != 1) continue;

    KeyPair keys;
    keys.pub = PublicKey::from_modulus(n);
    if (keys.pub.key_bits != key_bits) continue;
    keys.priv.n = n;
    keys.priv.lambda = lcm(p - 1, q - 1);
    const Int u = generator_power(keys.pub, keys.priv.lambda);
    keys.priv.mu = invert(l_function(u, n), n);
    return keys;
  }
}

Ciphertext encrypt(const PublicKey& pk, const Int& m, EntropySource& entropy) {
  check_message(pk, m);
  const Int rho = bigint::random_unit(entropy, pk.n);
  Int c = generator_power(pk, m) * bigint::modexp(rho, pk.n, pk.n_squared);
  c %= pk.n_squared;
  g_encryptions.fetch_add(1, std::memory_order_relaxed);
  return Ciphertext{std::move(c)};
}

Ciphertext encrypt(const PublicKey& pk, std::uint64_t m,
                   EntropySource& entropy) {
  return encrypt(pk, bigint::from_u64(m), entropy);
}

Int decrypt(const PrivateKey& sk, const Ciphertext& c) {
  const Int n_squared = sk.n * sk.n;
  if (c.value <= 0 || c.value >= n_squared || gcd(c.value, sk.n) != 1) {
    throw MalformedCiphertextError("ciphertext is not a unit modulo n^2");
  }
  const Int u = bigint::modexp(c.value, sk.lambda, n_squared);
  Int m = l_function(u, sk.n) * sk.mu;
  m %= sk.n;
  return m;
}

Ciphertext he_add(const PublicKey& pk, const Ciphertext& a,
                  const Ciphertext& b) {
  check_ciphertext(pk, a);
  check_ciphertext(pk, b);
  Ciphertext out = a;
  Int scratch;
  he_add_into(pk, out, b, scratch);
  return out;
}

void he_add_into(const PublicKey& pk, Ciphertext& acc, const Ciphertext& rhs,
                 Int& scratch) {
  mpz_mul(scratch.get_mpz_t(), acc.value.get_mpz_t(), rhs.value.get_mpz_t());
  mpz_mod(acc.value.get_mpz_t(), scratch.get_mpz_t(),
          pk.n_squared.get_mpz_t());
  g_additions.fetch_add(1, std::memory_order_relaxed);
}

Ciphertext rerandomize(const PublicKey& pk, const Ciphertext& c,
                       EntropySource& entropy) {
  check_ciphertext(pk, c);
  const Int rho = bigint::random_unit(entropy, pk.n);
  Int out = c.value * bigint::modexp(rho, pk.n, pk.n_squared);
  out %= pk.n_squared;
  return Ciphertext{std::move(out)};
}

bool is_valid(const PublicKey& pk, const Ciphertext& c) {
  return c.value > 0 && c.value < pk.n_squared && gcd(c.value, pk.n) == 1;
}

std::vector<Ciphertext> encrypt_batch(const PublicKey& pk,
                                      std::span<const std::uint64_t> values,
                                      unsigned workers,
                                      const EntropyFactory& factory) {
  if (workers == 0) throw DomainError("workers must be at least 1");
  std::vector<Ciphertext> out(values.size());
  for_each_chunk(values.size(), workers,
                 [&](unsigned worker, std::size_t begin, std::size_t end) {
                   if (begin == end) return;
                   auto entropy = factory(worker);
                   for (std::size_t i = begin; i < end; ++i) {
                     out[i] = encrypt(pk, values[i], *entropy);
                   }
                 });
  return out;
}

OpCounts op_counts() {
  return {g_encryptions.load(std::memory_order_relaxed),
          g_additions.load(std::memory_order_relaxed)};
}

}  // namespace rache::paillier
