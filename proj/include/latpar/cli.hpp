#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace latpar::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitInternal = 4;

// Runs one command (args exclude the program name) and returns the exit
// code. Reports go to out; every failure also emits a single JSON error
// object on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latpar::cli
