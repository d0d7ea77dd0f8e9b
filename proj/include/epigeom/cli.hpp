#pragma once

#include <string>
#include <vector>

namespace epigeom::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point behind main(): parses argv, dispatches to the subcommands
/// {alpha, entropy, body, transform-check, check} and writes artifacts.
/// Exit codes: 0 success (all checks hold or informational), 1 usage/IO error,
/// 2 a check in an asserting suite came back violated.
int run(int argc, const char* const* argv);

/// Convenience for tests: args without the program name.
int run(const std::vector<std::string>& args);

}  // namespace epigeom::cli
