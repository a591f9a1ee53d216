#pragma once

#include <ostream>

namespace fuller {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default output directory of `simulate`.
inline constexpr const char* kOutputDirEnv = "FULLER_OUTPUT_DIR";

/// Dispatches the verbs simulate, analyze, bound, classify, brackets and qrel.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fuller
