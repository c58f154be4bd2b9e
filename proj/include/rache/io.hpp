#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rache/bench.hpp"
#include "rache/paillier.hpp"

namespace rache::io {

struct Dataset {
  std::string name;
  std::vector<std::uint64_t> values;
  std::uint64_t max_value = 0;
};

// One unsigned decimal per line; blank lines and lines starting with '#'
// are skipped. Values above 2^64 - 1 are rejected, never truncated.
Dataset load_plaintexts(const std::filesystem::path& path);
Dataset parse_plaintexts(std::istream& in, std::string name);

// Throws EmptyDatasetError on an empty list.
std::uint64_t scan_max(std::span<const std::uint64_t> values);

// Decimal, one per line.
void write_plaintexts(const std::filesystem::path& path,
                      std::span<const bigint::Int> values);

// First line n=<hex>, then one hex ciphertext per line.
void write_ciphertexts(const std::filesystem::path& path,
                       const paillier::PublicKey& pk,
                       std::span<const paillier::Ciphertext> cts);

struct CiphertextFile {
  bigint::Int n;
  std::vector<paillier::Ciphertext> ciphertexts;
};

CiphertextFile read_ciphertexts(const std::filesystem::path& path);

// Strict mode: throws KeyMismatchError unless the header matches pk.n.
std::vector<paillier::Ciphertext> read_ciphertexts(
    const std::filesystem::path& path, const paillier::PublicKey& expected);

void write_public_key(const std::filesystem::path& path,
                      const paillier::PublicKey& pk);
paillier::PublicKey read_public_key(const std::filesystem::path& path);

void write_private_key(const std::filesystem::path& path,
                       const paillier::PrivateKey& sk);
paillier::PrivateKey read_private_key(const std::filesystem::path& path);

inline constexpr const char* kReportCsvHeader =
    "workload,phase,workers,n_items,mean_seconds,stderr_seconds,op_count";
inline constexpr const char* kMemoryCsvHeader =
    "workload,normalized_time,resident_bytes";

std::string format_report_csv(std::span<const bench::BenchReport> reports);

// Rache samples are labelled "<workload>/rache_exec", Paillier samples
// "<workload>/paillier".
std::string format_memory_csv(std::span<const bench::BenchReport> reports);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace rache::io
