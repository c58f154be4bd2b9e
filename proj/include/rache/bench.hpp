#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rache/paillier.hpp"

namespace rache::bench {

enum class Phase { rache_init, rache_exec, paillier, he_add_micro, he_enc_micro };

std::string_view to_string(Phase phase);

struct BenchConfig {
  std::size_t key_bits = paillier::kDefaultKeyBits;
  std::uint64_t radix = 2;
  unsigned workers = 1;
  std::size_t n_items = 1024;
  std::optional<std::uint64_t> max_value_override;
  // Seed for generated workloads. Key material always comes from the
  // system CSPRNG.
  std::optional<std::uint64_t> seed;
  bool randomize_outputs = false;
  unsigned repetitions = 5;
  bool probe_memory = false;

  // Throws DomainError on repetitions, workers or radix out of range.
  void validate() const;
};

struct PhaseRecord {
  Phase phase;
  unsigned workers;
  std::size_t n_items;
  double mean_seconds;
  double stderr_seconds;
  std::uint64_t op_count;
};

struct MemorySample {
  double normalized_time;
  std::uint64_t resident_bytes;
};

struct BenchReport {
  std::string workload;
  std::vector<PhaseRecord> records;
  // Rache encoding timeline, 11 points when probing is enabled.
  std::vector<MemorySample> memory_samples;
  // Same timeline for plain Paillier encryption of the workload.
  std::vector<MemorySample> paillier_memory_samples;

  const PhaseRecord* find(Phase phase, unsigned workers) const;
};

struct Summary {
  double mean = 0.0;
  // Sample standard deviation over sqrt(count); zero for a single run.
  double standard_error = 0.0;
};
Summary summarize(std::span<const double> seconds);

// n values uniform in [0, n), deterministic in seed.
std::vector<std::uint64_t> gen_uniform(std::size_t n, std::uint64_t seed);

// Current resident set size, or nullopt when the host cannot report it.
// normalized_time is left at 0 for the caller to fill in.
std::optional<MemorySample> probe_memory();

// n_items encryptions he(i), then n_items round-robin additions over
// precomputed encryptions of 0 .. floor(log2 n).
BenchReport bench_micro(const BenchConfig& cfg, const paillier::KeyPair& keys);

// Times rache_init, rache_exec and plain Paillier over xs. Both pipelines
// are decrypt-checked on the first repetition; a mismatch throws
// VerificationError and no report is produced.
BenchReport bench_dataset(const BenchConfig& cfg, const paillier::KeyPair& keys,
                          std::span<const std::uint64_t> xs,
                          std::string workload = "dataset");

enum class ScalingMode { strong, weak };

std::string_view to_string(ScalingMode mode);

// 1, 2, 4, ... up to and including max_workers (max_workers itself is
// appended when it is not a power of two).
std::vector<unsigned> worker_sweep(unsigned max_workers);

// Strong: gen_uniform(cfg.n_items) at every worker count. Weak: 1024 values
// per worker, regenerated per scale.
BenchReport bench_scaling(const BenchConfig& cfg, const paillier::KeyPair& keys,
                          ScalingMode mode);

inline constexpr std::size_t kWeakItemsPerWorker = 1024;

}  // namespace rache::bench
