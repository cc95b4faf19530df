#pragma once

#include <iosfwd>

namespace frozen::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRegime = 2;
inline constexpr int kExitUsage = 64;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frozen::cli
