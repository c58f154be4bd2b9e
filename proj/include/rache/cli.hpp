#pragma once

#include <iosfwd>

namespace rache::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Entry point of the `rache` executable. Progress goes to `err`, tables
// (radix-info) to `out`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace rache::cli
