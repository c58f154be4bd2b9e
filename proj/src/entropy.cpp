#include "rache/entropy.hpp"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "rache/errors.hpp"

namespace rache {

void SystemEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t got = ::getrandom(out.data() + done, out.size() - done, 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw EntropyError(std::string("getrandom failed: ") +
                         std::strerror(errno));
    }
    done += static_cast<std::size_t>(got);
  }
}

void DeterministicTestEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word & 0xff);
      word >>= 8;
    }
  }
}

EntropyFactory system_entropy_factory() {
  return [](unsigned) { return std::make_unique<SystemEntropy>(); };
}

EntropyFactory deterministic_test_entropy_factory(std::uint64_t seed) {
  return [seed](unsigned worker) {
    return std::make_unique<DeterministicTestEntropy>(seed + worker);
  };
}

}  // namespace rache
