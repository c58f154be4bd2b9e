#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>

namespace rache {

// Source of random bytes. Implementations are not thread-safe; each worker
// owns its own instance.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// Operating-system CSPRNG (getrandom(2)). The default everywhere.
class SystemEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Seeded, fully deterministic generator. NOT cryptographically secure:
// exists so tests and reproducible runs can pin key material. Never used
// unless constructed explicitly.
class DeterministicTestEntropy final : public EntropySource {
 public:
  explicit DeterministicTestEntropy(std::uint64_t seed) : engine_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 engine_;
};

// Creates the entropy handle for a given worker index.
using EntropyFactory =
    std::function<std::unique_ptr<EntropySource>(unsigned worker)>;

EntropyFactory system_entropy_factory();

// Worker w receives DeterministicTestEntropy(seed + w).
EntropyFactory deterministic_test_entropy_factory(std::uint64_t seed);

}  // namespace rache
