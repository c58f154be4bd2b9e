#include "rache/bigint.hpp"

#include <array>
#include <string>
#include <vector>

#include "rache/errors.hpp"

namespace rache::bigint {

namespace {

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
    47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
    191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

bool is_digit_string(std::string_view s, bool hex) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= '0' && c <= '9') ||
                    (hex && ((c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F')));
    if (!ok) return false;
  }
  return true;
}

Int parse(std::string_view s, int base) {
  if (!is_digit_string(s, base == 16)) {
    throw FormatError("invalid " + std::string(base == 16 ? "hex" : "decimal") +
                      " integer '" + std::string(s) + "'");
  }
  Int out;
  if (out.set_str(std::string(s), base) != 0) {
    throw FormatError("invalid integer '" + std::string(s) + "'");
  }
  return out;
}

}  // namespace

Int modexp(const Int& base, const Int& exponent, const Int& modulus) {
  if (modulus <= 0) throw DomainError("modexp: modulus must be positive");
  if (exponent < 0) throw DomainError("modexp: negative exponent");
  Int out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           modulus.get_mpz_t());
  return out;
}

std::size_t bit_length(const Int& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

Int from_u64(std::uint64_t v) {
  Int out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

std::uint64_t to_u64(const Int& x) {
  if (x < 0 || bit_length(x) > 64) {
    throw DomainError("integer does not fit in 64 bits");
  }
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, x.get_mpz_t());
  return v;
}

std::string to_hex(const Int& x) { return x.get_str(16); }

Int from_hex(std::string_view hex) { return parse(hex, 16); }

std::string to_decimal(const Int& x) { return x.get_str(10); }

Int from_decimal(std::string_view dec) { return parse(dec, 10); }

Int random_bits(EntropySource& entropy, std::size_t bits) {
  if (bits == 0) return 0;
  std::vector<std::uint8_t> buf((bits + 7) / 8);
  entropy.fill(buf);
  if (const std::size_t spare = buf.size() * 8 - bits; spare > 0) {
    buf[0] &= static_cast<std::uint8_t>(0xff >> spare);
  }
  Int out;
  mpz_import(out.get_mpz_t(), buf.size(), 1, 1, 0, 0, buf.data());
  return out;
}

Int random_below(EntropySource& entropy, const Int& bound) {
  if (bound <= 0) throw DomainError("random_below: bound must be positive");
  const std::size_t bits = bit_length(bound);
  for (;;) {
    Int candidate = random_bits(entropy, bits);
    if (candidate < bound) return candidate;
  }
}

Int random_unit(EntropySource& entropy, const Int& n) {
  if (n <= 1) throw DomainError("random_unit: modulus must exceed 1");
  for (;;) {
    Int candidate = random_below(entropy, n);
    if (candidate == 0) continue;
    Int g;
    mpz_gcd(g.get_mpz_t(), candidate.get_mpz_t(), n.get_mpz_t());
    if (g == 1) return candidate;
  }
}

bool is_probable_prime(const Int& candidate, int rounds,
                       EntropySource& entropy) {
  if (candidate < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (candidate == p) return true;
    if (mpz_divisible_ui_p(candidate.get_mpz_t(), p)) return false;
  }

  // candidate - 1 = d * 2^s with d odd.
  const Int n_minus_1 = candidate - 1;
  const mp_bitcnt_t s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
  Int d;
  mpz_fdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);

  const Int base_range = candidate - 3;  // bases in [2, n - 2]
  for (int round = 0; round < rounds; ++round) {
    const Int a = random_below(entropy, base_range) + 2;
    Int x = modexp(a, d, candidate);
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (mp_bitcnt_t i = 1; i < s; ++i) {
      x = x * x % candidate;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace rache::bigint
