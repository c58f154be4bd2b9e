#include "rache/bench.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include "rache/errors.hpp"
#include "rache/io.hpp"
#include "rache/parallel.hpp"
#include "rache/radix.hpp"

namespace rache::bench {

namespace {

using Clock = std::chrono::steady_clock;
using paillier::Ciphertext;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double time_call(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  return seconds_since(start);
}

PhaseRecord make_record(Phase phase, unsigned workers, std::size_t n_items,
                        std::span<const double> seconds,
                        std::uint64_t op_count) {
  const Summary s = summarize(seconds);
  return {phase, workers, n_items, s.mean, s.standard_error, op_count};
}

// Decrypts every ciphertext and compares against the expected plaintext.
template <typename Expected>
void verify(const paillier::PrivateKey& sk, std::span<const Ciphertext> cts,
            std::size_t count, unsigned workers, Expected expected,
            std::string_view pipeline) {
  if (cts.size() != count) {
    throw VerificationError(std::string(pipeline) + " produced " +
                            std::to_string(cts.size()) + " ciphertexts for " +
                            std::to_string(count) + " inputs");
  }
  for_each_chunk(count, workers,
                 [&](unsigned, std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) {
                     bigint::Int got;
                     try {
                       got = paillier::decrypt(sk, cts[i]);
                     } catch (const MalformedCiphertextError& e) {
                       throw VerificationError(std::string(pipeline) +
                                               " output " + std::to_string(i) +
                                               ": " + e.what());
                     }
                     if (got != expected(i)) {
                       throw VerificationError(
                           std::string(pipeline) + " output " +
                           std::to_string(i) + " decrypts to " +
                           bigint::to_decimal(got) + ", expected " +
                           bigint::to_decimal(expected(i)));
                     }
                   }
                 });
}

std::uint64_t resolve_seed(const BenchConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  return (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^
         std::random_device{}();
}

// Encodes in ten equal segments, probing resident memory before the first
// and after each segment.
template <typename EncodeSegment>
std::vector<MemorySample> probe_timeline(std::size_t count,
                                         EncodeSegment encode_segment) {
  std::vector<MemorySample> samples;
  constexpr int kSegments = 10;
  for (int s = 0; s <= kSegments; ++s) {
    if (s > 0) {
      encode_segment(count * (s - 1) / kSegments, count * s / kSegments);
    }
    auto sample = probe_memory();
    if (!sample) {
      std::cerr << "warning: resident memory unavailable, probing disabled\n";
      return {};
    }
    sample->normalized_time = static_cast<double>(s) / kSegments;
    samples.push_back(*sample);
  }
  return samples;
}

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::rache_init: return "rache_init";
    case Phase::rache_exec: return "rache_exec";
    case Phase::paillier: return "paillier";
    case Phase::he_add_micro: return "he_add_micro";
    case Phase::he_enc_micro: return "he_enc_micro";
  }
  return "unknown";
}

std::string_view to_string(ScalingMode mode) {
  return mode == ScalingMode::strong ? "strong" : "weak";
}

void BenchConfig::validate() const {
  if (repetitions < 1) throw DomainError("repetitions must be at least 1");
  if (workers < 1) throw DomainError("workers must be at least 1");
  if (radix < 2) throw DomainError("radix must be at least 2");
  if (n_items < 1) throw DomainError("n_items must be at least 1");
}

const PhaseRecord* BenchReport::find(Phase phase, unsigned workers) const {
  for (const auto& r : records) {
    if (r.phase == phase && r.workers == workers) return &r;
  }
  return nullptr;
}

Summary summarize(std::span<const double> seconds) {
  Summary s;
  if (seconds.empty()) return s;
  const double n = static_cast<double>(seconds.size());
  s.mean = std::accumulate(seconds.begin(), seconds.end(), 0.0) / n;
  if (seconds.size() > 1) {
    double ss = 0.0;
    for (double x : seconds) ss += (x - s.mean) * (x - s.mean);
    s.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

std::vector<std::uint64_t> gen_uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<std::uint64_t> out(n);
  for (auto& v : out) v = engine() % n;
  return out;
}

std::optional<MemorySample> probe_memory() {
  std::ifstream statm("/proc/self/statm");
  std::uint64_t size_pages = 0;
  std::uint64_t resident_pages = 0;
  if (!(statm >> size_pages >> resident_pages) || resident_pages == 0) {
    return std::nullopt;
  }
  const long page = ::sysconf(_SC_PAGESIZE);
  if (page <= 0) return std::nullopt;
  return MemorySample{0.0, resident_pages * static_cast<std::uint64_t>(page)};
}

std::vector<unsigned> worker_sweep(unsigned max_workers) {
  if (max_workers < 1) throw DomainError("workers must be at least 1");
  std::vector<unsigned> out;
  for (unsigned w = 1; w <= max_workers; w *= 2) out.push_back(w);
  if (out.back() != max_workers) out.push_back(max_workers);
  return out;
}

BenchReport bench_micro(const BenchConfig& cfg, const paillier::KeyPair& keys) {
  cfg.validate();
  const auto& pk = keys.pub;
  const std::size_t n = cfg.n_items;
  const std::size_t top = radix::floor_log(n, 2);

  SystemEntropy entropy;
  std::vector<Ciphertext> entries;
  for (std::size_t j = 0; j <= top; ++j) {
    entries.push_back(paillier::encrypt(pk, std::uint64_t{j}, entropy));
  }
  // Operands of the i-th addition: floor(log2 i) and its successor modulo
  // the number of entries.
  auto lhs = [](std::size_t i) {
    return i == 0 ? std::size_t{0} : radix::floor_log(i, 2);
  };
  auto rhs = [&](std::size_t i) { return (lhs(i) + 1) % (top + 1); };

  std::vector<std::uint64_t> plaintexts(n);
  std::iota(plaintexts.begin(), plaintexts.end(), std::uint64_t{0});

  const auto factory = system_entropy_factory();
  std::vector<double> enc_seconds;
  std::vector<double> add_seconds;
  for (unsigned rep = 0; rep < cfg.repetitions; ++rep) {
    std::vector<Ciphertext> encrypted;
    enc_seconds.push_back(time_call([&] {
      encrypted = paillier::encrypt_batch(pk, plaintexts, cfg.workers, factory);
    }));

    auto sums = radix::allocate_ciphertexts(pk, n);
    add_seconds.push_back(time_call([&] {
      for_each_chunk(n, cfg.workers,
                     [&](unsigned, std::size_t begin, std::size_t end) {
                       bigint::Int scratch;
                       for (std::size_t i = begin; i < end; ++i) {
                         sums[i].value = entries[lhs(i)].value;
                         paillier::he_add_into(pk, sums[i], entries[rhs(i)],
                                               scratch);
                       }
                     });
    }));

    if (rep == 0) {
      verify(keys.priv, encrypted, n, cfg.workers,
             [](std::size_t i) { return bigint::from_u64(i); }, "he_enc_micro");
      verify(keys.priv, sums, n, cfg.workers,
             [&](std::size_t i) { return bigint::from_u64(lhs(i) + rhs(i)); },
             "he_add_micro");
    }
  }

  BenchReport report;
  report.workload = "micro";
  report.records.push_back(
      make_record(Phase::he_enc_micro, cfg.workers, n, enc_seconds, n));
  report.records.push_back(
      make_record(Phase::he_add_micro, cfg.workers, n, add_seconds, n));
  return report;
}

BenchReport bench_dataset(const BenchConfig& cfg, const paillier::KeyPair& keys,
                          std::span<const std::uint64_t> xs,
                          std::string workload) {
  cfg.validate();
  if (xs.empty()) throw EmptyDatasetError("benchmark dataset is empty");
  const auto& pk = keys.pub;
  const std::uint64_t max_value =
      cfg.max_value_override ? *cfg.max_value_override : io::scan_max(xs);

  SystemEntropy entropy;
  const auto factory = system_entropy_factory();
  const radix::BatchOptions options{cfg.randomize_outputs, factory};
  const auto expected = [&](std::size_t i) { return bigint::from_u64(xs[i]); };

  std::vector<double> init_seconds;
  std::vector<double> exec_seconds;
  std::vector<double> paillier_seconds;
  std::uint64_t init_ops = 0;
  std::uint64_t exec_ops = 0;
  std::optional<radix::RadixCache> cache;
  for (unsigned rep = 0; rep < cfg.repetitions; ++rep) {
    init_seconds.push_back(time_call([&] {
      cache.emplace(radix::RadixCache::build(pk, cfg.radix, max_value, entropy));
    }));

    auto batch = radix::rache_encrypt_batch(*cache, xs, cfg.workers, options);
    exec_seconds.push_back(batch.elapsed_seconds);

    std::vector<Ciphertext> plain;
    paillier_seconds.push_back(time_call([&] {
      plain = paillier::encrypt_batch(pk, xs, cfg.workers, factory);
    }));

    if (rep == 0) {
      verify(keys.priv, batch.ciphertexts, xs.size(), cfg.workers, expected,
             "rache_exec");
      verify(keys.priv, plain, xs.size(), cfg.workers, expected, "paillier");
      init_ops = cache->init_encryptions();
      exec_ops = batch.stats.additions;
    }
  }

  BenchReport report;
  report.workload = std::move(workload);
  const std::size_t n = xs.size();
  report.records.push_back(
      make_record(Phase::rache_init, cfg.workers, n, init_seconds, init_ops));
  report.records.push_back(
      make_record(Phase::rache_exec, cfg.workers, n, exec_seconds, exec_ops));
  report.records.push_back(
      make_record(Phase::paillier, cfg.workers, n, paillier_seconds, n));

  if (cfg.probe_memory) {
    auto slots = radix::allocate_ciphertexts(pk, n);
    report.memory_samples =
        probe_timeline(n, [&](std::size_t begin, std::size_t end) {
          radix::rache_encrypt_batch_into(
              *cache, xs.subspan(begin, end - begin),
              std::span(slots).subspan(begin, end - begin), cfg.workers,
              options);
        });

    std::vector<Ciphertext> plain(n);
    report.paillier_memory_samples =
        probe_timeline(n, [&](std::size_t begin, std::size_t end) {
          auto part = paillier::encrypt_batch(
              pk, xs.subspan(begin, end - begin), cfg.workers, factory);
          std::move(part.begin(), part.end(), plain.begin() + begin);
        });
  }
  return report;
}

BenchReport bench_scaling(const BenchConfig& cfg, const paillier::KeyPair& keys,
                          ScalingMode mode) {
  cfg.validate();
  const std::uint64_t seed = resolve_seed(cfg);
  BenchReport report;
  report.workload = std::string(to_string(mode)) + "_scaling";

  std::vector<std::uint64_t> strong_xs;
  if (mode == ScalingMode::strong) strong_xs = gen_uniform(cfg.n_items, seed);

  for (unsigned workers : worker_sweep(cfg.workers)) {
    BenchConfig scaled = cfg;
    scaled.workers = workers;
    scaled.probe_memory = false;
    std::vector<std::uint64_t> weak_xs;
    if (mode == ScalingMode::weak) {
      weak_xs = gen_uniform(kWeakItemsPerWorker * workers, seed);
    }
    const auto& xs = mode == ScalingMode::strong ? strong_xs : weak_xs;
    scaled.n_items = xs.size();
    BenchReport part = bench_dataset(scaled, keys, xs, report.workload);
    report.records.insert(report.records.end(), part.records.begin(),
                          part.records.end());
  }
  return report;
}

}  // namespace rache::bench
