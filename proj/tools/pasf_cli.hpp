#pragma once

#include <string>
#include <vector>

namespace pasf::cli {

inline constexpr const char* kToolVersion = "pasflab 0.1.0";

// exit codes: 0 holds/success, 1 refuted/counterexample, 2 exhausted or
// inconclusive, 64 usage, 65 schema/data, 66 missing input, 74 I/O
inline constexpr int kExitHolds = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitSchema = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitIo = 74;

int run(const std::vector<std::string>& args);

}  // namespace pasf::cli
