#pragma once

#include <iosfwd>

namespace nudgek::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitValidation = 3;

/// Entry point for the analyze, tir, atir-sweep, kopt, simulate and validate
/// subcommands.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nudgek::cli
